use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

pub const DEFAULT_TYPE: &str = "owl";
const SNAPSHOT_SUFFIX: &str = "-SNAPSHOT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid coordinate {value:?}: {reason}")]
pub struct CoordinateError {
    pub value: String,
    pub reason: String,
}

/// `groupId:artifactId:version[:type[:classifier]]` identity of an artifact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArtifactCoordinate {
    pub group_id: String,
    pub artifact_id: String,
    pub version: String,
    pub kind: String,
    pub classifier: Option<String>,
}

/// `(group_id, artifact_id)`: the unit of version mediation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArtifactKey {
    pub group_id: String,
    pub artifact_id: String,
}

impl fmt::Display for ArtifactKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.group_id, self.artifact_id)
    }
}

fn bad(value: &str, reason: impl Into<String>) -> CoordinateError {
    CoordinateError {
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn check_part(whole: &str, what: &str, part: &str, allow_dot: bool) -> Result<(), CoordinateError> {
    if part.is_empty() {
        return Err(bad(whole, format!("{what} is empty")));
    }
    if part
        .chars()
        .any(|c| c.is_whitespace() || c == '/' || c == '\\' || c == ':')
    {
        return Err(bad(whole, format!("{what} contains '/', ':' or whitespace")));
    }
    if !allow_dot && part.contains('.') {
        return Err(bad(whole, format!("{what} contains '.'")));
    }
    if part == "." || part == ".." {
        return Err(bad(whole, format!("{what} is a path traversal segment")));
    }
    Ok(())
}

impl ArtifactCoordinate {
    pub fn new(
        group_id: impl Into<String>,
        artifact_id: impl Into<String>,
        version: impl Into<String>,
    ) -> Result<Self, CoordinateError> {
        Self::full(group_id, artifact_id, version, DEFAULT_TYPE, None::<String>)
    }

    pub fn full(
        group_id: impl Into<String>,
        artifact_id: impl Into<String>,
        version: impl Into<String>,
        kind: impl Into<String>,
        classifier: Option<impl Into<String>>,
    ) -> Result<Self, CoordinateError> {
        let c = ArtifactCoordinate {
            group_id: group_id.into(),
            artifact_id: artifact_id.into(),
            version: version.into(),
            kind: kind.into(),
            classifier: classifier.map(Into::into),
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CoordinateError> {
        let whole = self.to_string();
        check_part(&whole, "groupId", &self.group_id, true)?;
        if self.group_id.split('.').any(str::is_empty) {
            return Err(bad(&whole, "groupId has an empty segment"));
        }
        check_part(&whole, "artifactId", &self.artifact_id, true)?;
        check_part(&whole, "version", &self.version, true)?;
        check_part(&whole, "type", &self.kind, false)?;
        if let Some(c) = &self.classifier {
            check_part(&whole, "classifier", c, false)?;
        }
        Ok(())
    }

    pub fn is_snapshot(&self) -> bool {
        self.version.ends_with(SNAPSHOT_SUFFIX)
    }

    pub fn key(&self) -> ArtifactKey {
        ArtifactKey {
            group_id: self.group_id.clone(),
            artifact_id: self.artifact_id.clone(),
        }
    }

    pub fn with_version(&self, version: &str) -> Result<Self, CoordinateError> {
        let mut c = self.clone();
        c.version = version.to_string();
        c.validate()?;
        Ok(c)
    }

    /// `g/r/o/u/p/artifact/version` with `/` separators.
    pub fn relative_dir(&self) -> String {
        format!(
            "{}/{}/{}",
            self.group_id.replace('.', "/"),
            self.artifact_id,
            self.version
        )
    }

    pub fn file_stem(&self) -> String {
        format!("{}-{}", self.artifact_id, self.version)
    }

    pub fn file_name(&self) -> String {
        match &self.classifier {
            Some(c) => format!("{}-{}.{}", self.file_stem(), c, self.kind),
            None => format!("{}.{}", self.file_stem(), self.kind),
        }
    }

    pub fn pom_file_name(&self) -> String {
        format!("{}.pom", self.file_stem())
    }

    /// Layout-relative path of the artifact file, `/`-separated.
    pub fn artifact_path(&self) -> String {
        format!("{}/{}", self.relative_dir(), self.file_name())
    }

    pub fn pom_path(&self) -> String {
        format!("{}/{}", self.relative_dir(), self.pom_file_name())
    }

    pub fn artifact_fs_path(&self) -> PathBuf {
        self.artifact_path().split('/').collect()
    }

    /// Inverse of [`artifact_path`](Self::artifact_path).
    pub fn from_artifact_path(path: &str) -> Result<Self, CoordinateError> {
        let parts: Vec<&str> = path.trim_matches('/').split('/').collect();
        if parts.len() < 4 {
            return Err(bad(path, "expected group/artifact/version/file"));
        }
        let n = parts.len();
        let (file, version, artifact) = (parts[n - 1], parts[n - 2], parts[n - 3]);
        let group = parts[..n - 3].join(".");
        let prefix = format!("{artifact}-{version}");
        let rest = file
            .strip_prefix(&prefix)
            .ok_or_else(|| bad(path, "file name does not start with artifact-version"))?;
        let (classifier, kind) = if let Some(ext) = rest.strip_prefix('.') {
            (None, ext)
        } else if let Some(tail) = rest.strip_prefix('-') {
            let (c, ext) = tail
                .rsplit_once('.')
                .ok_or_else(|| bad(path, "file name has no extension"))?;
            (Some(c), ext)
        } else {
            return Err(bad(path, "malformed file name"));
        };
        Self::full(group, artifact, version, kind, classifier)
    }
}

impl fmt::Display for ArtifactCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.group_id, self.artifact_id, self.version)?;
        if self.kind != DEFAULT_TYPE || self.classifier.is_some() {
            write!(f, ":{}", self.kind)?;
        }
        if let Some(c) = &self.classifier {
            write!(f, ":{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ArtifactCoordinate {
    type Err = CoordinateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            [g, a, v] => Self::new(*g, *a, *v),
            [g, a, v, t] => Self::full(*g, *a, *v, *t, None::<String>),
            [g, a, v, t, c] => Self::full(*g, *a, *v, *t, Some(*c)),
            _ => Err(bad(s, "expected groupId:artifactId:version[:type[:classifier]]")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn camera_layout_path() {
        let c = ArtifactCoordinate::full(
            "xfront.com.owl.ontologies",
            "Camera-OWL-Ontology",
            "1.0-SNAPSHOT",
            "owl",
            None::<String>,
        )
        .unwrap();
        assert!(c.is_snapshot());
        assert_eq!(
            c.artifact_path(),
            "xfront/com/owl/ontologies/Camera-OWL-Ontology/1.0-SNAPSHOT/Camera-OWL-Ontology-1.0-SNAPSHOT.owl"
        );
        assert_eq!(c.pom_file_name(), "Camera-OWL-Ontology-1.0-SNAPSHOT.pom");
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(ArtifactCoordinate::new("", "a", "1").is_err());
        assert!(ArtifactCoordinate::new("g", "a b", "1").is_err());
        assert!(ArtifactCoordinate::new("g", "a", "1/2").is_err());
        assert!(ArtifactCoordinate::new("g..h", "a", "1").is_err());
        assert!(ArtifactCoordinate::new("g", "..", "1").is_err());
    }

    #[test]
    fn parse_and_display() {
        let c: ArtifactCoordinate = "de.onto.maven:TimeOntologie:1.0".parse().unwrap();
        assert_eq!(c.kind, "owl");
        assert_eq!(c.to_string(), "de.onto.maven:TimeOntologie:1.0");
        let c: ArtifactCoordinate = "g:a:1:rdf:docs".parse().unwrap();
        assert_eq!(c.to_string(), "g:a:1:rdf:docs");
        assert!("g:a".parse::<ArtifactCoordinate>().is_err());
    }

    prop_compose! {
        fn coordinate()(
            group in "[a-z]{1,6}(\\.[a-z0-9]{1,5}){0,3}",
            artifact in "[A-Za-z][A-Za-z0-9_.-]{0,12}",
            version in "[0-9]{1,2}(\\.[0-9]{1,2}){0,2}(-SNAPSHOT)?",
            kind in "[a-z]{1,4}",
            classifier in proptest::option::of("[a-z]{1,5}"),
        ) -> ArtifactCoordinate {
            ArtifactCoordinate::full(group, artifact, version, kind, classifier).unwrap()
        }
    }

    proptest! {
        #[test]
        fn layout_is_invertible(c in coordinate()) {
            prop_assert_eq!(ArtifactCoordinate::from_artifact_path(&c.artifact_path()).unwrap(), c);
        }

        #[test]
        fn display_parses_back(c in coordinate()) {
            prop_assert_eq!(c.to_string().parse::<ArtifactCoordinate>().unwrap(), c);
        }
    }
}
