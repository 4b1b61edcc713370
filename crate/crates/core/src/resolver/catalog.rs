//! OASIS XML catalogs and the project's import registry.

use std::fs;
use std::path::{Path, PathBuf};

use crate::coordinate::ArtifactCoordinate;
use crate::xml::XmlWriter;

use super::ResolveError;

pub const CATALOG_NS: &str = "urn:oasis:names:tc:entity:xmlns:xml:catalog";
pub const CATALOG_FILE: &str = "catalog.xml";
pub const REGISTRY_FILE: &str = "import-registry.xml";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub system_id: String,
    pub uri: String,
}

/// `system` entries only; the other OASIS entry types are not used.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

/// systemId, uri, coordinate
type SystemEntry = (String, Option<String>, Option<String>);

fn system_elements(text: &str) -> Result<Vec<SystemEntry>, roxmltree::Error> {
    let doc = roxmltree::Document::parse(text)?;
    Ok(doc
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "system")
        .map(|n| {
            (
                n.attribute("systemId").unwrap_or_default().to_string(),
                n.attribute("uri").map(str::to_string),
                n.attribute("coordinate").map(str::to_string),
            )
        })
        .collect())
}

impl Catalog {
    pub fn lookup(&self, system_id: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.system_id == system_id)
            .map(|e| e.uri.as_str())
    }

    /// Adds an entry unless the system id is already mapped.
    pub fn add(&mut self, system_id: &str, uri: &str) -> bool {
        if self.lookup(system_id).is_some() {
            return false;
        }
        self.entries.push(CatalogEntry {
            system_id: system_id.to_string(),
            uri: uri.to_string(),
        });
        true
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut c = Catalog::default();
        for (system_id, uri, _) in system_elements(text).map_err(|e| e.to_string())? {
            let uri = uri.ok_or_else(|| format!("system entry {system_id:?} has no uri"))?;
            c.add(&system_id, &uri);
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ResolveError> {
        let text = fs::read_to_string(path).map_err(|e| ResolveError::Catalog {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text).map_err(|message| ResolveError::Catalog {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Empty catalog when the file does not exist.
    pub fn load_or_default(path: &Path) -> Result<Self, ResolveError> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Catalog::default())
        }
    }

    pub fn to_xml(&self) -> String {
        let mut w = XmlWriter::new();
        w.open_with("catalog", &[("xmlns", CATALOG_NS)]);
        for e in &self.entries {
            w.empty("system", &[("systemId", &e.system_id), ("uri", &e.uri)]);
        }
        w.close();
        w.finish()
    }

    /// Resolves a relative `uri` against the catalog's directory.
    pub fn resolve_uri(uri: &str, base: &Path) -> PathBuf {
        let path = Path::new(uri.strip_prefix("file://").unwrap_or(uri));
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            base.join(path)
        }
    }
}

/// Maps import IRIs to artifact coordinates. Stored like a catalog, with a
/// `coordinate="g:a:v[:type]"` attribute in place of `uri`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportRegistry {
    pub entries: Vec<(String, ArtifactCoordinate)>,
}

impl ImportRegistry {
    pub fn lookup(&self, iri: &str) -> Option<&ArtifactCoordinate> {
        self.entries.iter().find(|(i, _)| i == iri).map(|(_, c)| c)
    }

    pub fn insert(&mut self, iri: &str, c: ArtifactCoordinate) -> bool {
        if self.lookup(iri).is_some() {
            return false;
        }
        self.entries.push((iri.to_string(), c));
        true
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut r = ImportRegistry::default();
        for (system_id, _, coordinate) in system_elements(text).map_err(|e| e.to_string())? {
            let raw = coordinate.ok_or_else(|| format!("registry entry {system_id:?} has no coordinate"))?;
            let c: ArtifactCoordinate = raw.parse().map_err(|e| format!("{e}"))?;
            r.insert(&system_id, c);
        }
        Ok(r)
    }

    pub fn load_or_default(path: &Path) -> Result<Self, ResolveError> {
        if !path.exists() {
            return Ok(ImportRegistry::default());
        }
        let err = |message: String| ResolveError::Catalog {
            path: path.to_path_buf(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        Self::parse(&text).map_err(err)
    }

    pub fn to_xml(&self) -> String {
        let mut w = XmlWriter::new();
        w.open_with("catalog", &[("xmlns", CATALOG_NS)]);
        for (iri, c) in &self.entries {
            w.empty("system", &[("systemId", iri), ("coordinate", &c.to_string())]);
        }
        w.close();
        w.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_round_trip_and_namespace() {
        let mut c = Catalog::default();
        c.add(
            "www.example.com/example.owl",
            "/repo/ex/com/example/1.0/example-1.0.owl",
        );
        assert!(!c.add("www.example.com/example.owl", "/elsewhere"));
        let xml = c.to_xml();
        let doc = roxmltree::Document::parse(&xml).unwrap();
        assert_eq!(doc.root_element().tag_name().namespace(), Some(CATALOG_NS));
        assert!(xml.contains(
            r#"<system systemId="www.example.com/example.owl" uri="/repo/ex/com/example/1.0/example-1.0.owl"/>"#
        ));
        assert_eq!(Catalog::parse(&xml).unwrap(), c);
    }

    #[test]
    fn relative_uri_catalog_parses() {
        let text = r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<catalog prefer="public" xmlns="urn:oasis:names:tc:entity:xmlns:xml:catalog">
  <system systemId="www.example.com/example.owl" uri="src/resource/owl"/>
</catalog>"#;
        let c = Catalog::parse(text).unwrap();
        assert_eq!(c.lookup("www.example.com/example.owl"), Some("src/resource/owl"));
        assert_eq!(
            Catalog::resolve_uri("src/resource/owl", Path::new("/p")),
            PathBuf::from("/p/src/resource/owl")
        );
    }

    #[test]
    fn registry_round_trip() {
        let mut r = ImportRegistry::default();
        r.insert("www.example.com/example.owl", "ex.com:example:1.0".parse().unwrap());
        let back = ImportRegistry::parse(&r.to_xml()).unwrap();
        assert_eq!(back, r);
        assert_eq!(
            back.lookup("www.example.com/example.owl").unwrap().artifact_id,
            "example"
        );
        assert!(ImportRegistry::parse(r#"<catalog><system systemId="x"/></catalog>"#).is_err());
    }
}
