//! Ontology search engines consulted when no repository has an artifact.

use std::collections::BTreeMap;
use std::path::Path;

use crate::coordinate::ArtifactCoordinate;

/// What is known about the ontology being looked for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchQuery {
    pub name: String,
    pub uri: Option<String>,
}

impl SearchQuery {
    pub fn for_coordinate(c: &ArtifactCoordinate) -> Self {
        SearchQuery {
            name: c.artifact_id.clone(),
            uri: None,
        }
    }
}

pub trait SearchEngine {
    fn name(&self) -> &str;
    fn search(&self, query: &SearchQuery) -> Result<Vec<String>, String>;
}

/// Static name/URI to URL mapping read from JSON:
/// `{"TimeOntologie": ["http://.../time.owl"]}`.
#[derive(Debug, Clone, Default)]
pub struct FixtureEngine {
    name: String,
    entries: BTreeMap<String, Vec<String>>,
}

impl FixtureEngine {
    pub fn from_json(name: &str, json: &str) -> Result<Self, serde_json::Error> {
        Ok(FixtureEngine {
            name: name.to_string(),
            entries: serde_json::from_str(json)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_json(&path.display().to_string(), &text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

impl SearchEngine for FixtureEngine {
    fn name(&self) -> &str {
        &self.name
    }

    fn search(&self, query: &SearchQuery) -> Result<Vec<String>, String> {
        let mut out: Vec<String> = self.entries.get(&query.name).cloned().unwrap_or_default();
        if let Some(urls) = query.uri.as_ref().and_then(|u| self.entries.get(u)) {
            out.extend(urls.iter().cloned());
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOutcome {
    pub candidates: Vec<String>,
    pub warnings: Vec<String>,
}

/// Asks every engine in order. Failures become warnings; duplicate URLs are
/// kept once, at their first position.
pub fn search_fallback(coord: &ArtifactCoordinate, engines: &[&dyn SearchEngine]) -> SearchOutcome {
    let query = SearchQuery::for_coordinate(coord);
    let mut out = SearchOutcome::default();
    for engine in engines {
        match engine.search(&query) {
            Ok(urls) => {
                for u in urls {
                    if !out.candidates.contains(&u) {
                        out.candidates.push(u);
                    }
                }
            }
            Err(e) => out
                .warnings
                .push(format!("search engine {} failed: {e}", engine.name())),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Broken;

    impl SearchEngine for Broken {
        fn name(&self) -> &str {
            "broken"
        }
        fn search(&self, _: &SearchQuery) -> Result<Vec<String>, String> {
            Err("unreachable".into())
        }
    }

    fn time() -> ArtifactCoordinate {
        ArtifactCoordinate::new("de.onto.maven", "TimeOntologie", "1.0").unwrap()
    }

    #[test]
    fn no_engines() {
        assert_eq!(search_fallback(&time(), &[]), SearchOutcome::default());
    }

    #[test]
    fn fixture_lookup() {
        let e = FixtureEngine::from_json("fixture", r#"{"TimeOntologie": ["http://onto.example/time.owl"]}"#).unwrap();
        let out = search_fallback(&time(), &[&e]);
        assert_eq!(out.candidates, vec!["http://onto.example/time.owl"]);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn failing_engine_becomes_warning() {
        let e = FixtureEngine::from_json("fixture", r#"{"TimeOntologie": ["u1", "u2"]}"#).unwrap();
        let out = search_fallback(&time(), &[&Broken, &e]);
        assert_eq!(out.candidates, vec!["u1", "u2"]);
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].contains("broken"));
    }
}
