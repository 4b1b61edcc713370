use std::fmt;

use thiserror::Error;

pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";

/// Namespace reserved for names minted by the tool itself (normalization,
/// individual concepts). Input ontologies must not use it.
pub const RESERVED_NS: &str = "urn:ontomvn:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid IRI {value:?}: {reason}")]
pub struct InvalidIri {
    pub value: String,
    pub reason: &'static str,
}

/// An IRI as written in a document, compared by exact string equality.
///
/// Scheme-less references such as `www.example.com/example.owl` are
/// accepted because ontology artifacts in the wild routinely use them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, InvalidIri> {
        let value = value.into();
        if value.is_empty() {
            return Err(InvalidIri { value, reason: "empty" });
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c == '<' || c == '>' || c == '"')
        {
            return Err(InvalidIri {
                value,
                reason: "contains whitespace, quote or angle bracket",
            });
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Fragment after `#`, else the last non-empty path segment.
    pub fn local_name(&self) -> &str {
        let s = self.0.as_str();
        if let Some(idx) = s.rfind('#') {
            if idx + 1 < s.len() {
                return &s[idx + 1..];
            }
        }
        s.trim_end_matches('/')
            .rsplit(['/', ':'])
            .next()
            .filter(|seg| !seg.is_empty())
            .unwrap_or(s)
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_NS)
    }

    /// The IRI as a fetchable URL; scheme-less references get `http://`.
    pub fn to_url(&self) -> String {
        with_default_scheme(&self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// True when `s` starts with an RFC 3986 scheme followed by `:`.
pub fn has_scheme(s: &str) -> bool {
    match s.find(':') {
        Some(0) | None => false,
        Some(idx) => {
            let scheme = &s[..idx];
            scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
                // `host:port/...` is not a scheme
                && !s[idx + 1..].starts_with(|c: char| c.is_ascii_digit())
        }
    }
}

pub fn with_default_scheme(s: &str) -> String {
    if has_scheme(s) {
        s.to_string()
    } else {
        format!("http://{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_whitespace() {
        assert!(Iri::new("").is_err());
        assert!(Iri::new("http://ex.org/a b").is_err());
        assert!(Iri::new("<http://ex.org/a>").is_err());
    }

    #[test]
    fn local_names() {
        let money = Iri::new("www.xfront.com/owl/ontologies/camera/#Money").unwrap();
        assert_eq!(money.local_name(), "Money");
        assert_eq!(Iri::new("http://ex.org/onto/A").unwrap().local_name(), "A");
        assert_eq!(Iri::new("http://ex.org/onto/").unwrap().local_name(), "onto");
        assert_eq!(Iri::new("urn:x:y").unwrap().local_name(), "y");
    }

    #[test]
    fn default_scheme() {
        assert_eq!(
            with_default_scheme("www.example.com/example.owl"),
            "http://www.example.com/example.owl"
        );
        assert_eq!(with_default_scheme("https://a.b/c"), "https://a.b/c");
        assert_eq!(with_default_scheme("localhost:8080/x"), "http://localhost:8080/x");
        assert_eq!(with_default_scheme("file:/tmp/x"), "file:/tmp/x");
    }
}
