//! Project descriptor: the subset of Maven's POM this tool understands.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::coordinate::{ArtifactCoordinate, ArtifactKey, DEFAULT_TYPE};
use crate::xml::{child, children, node_text, XmlWriter};

pub const POM_FILE: &str = "pom.xml";

#[derive(Debug, Error)]
pub enum PomError {
    #[error("malformed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn schema(path: &str, message: impl Into<String>) -> PomError {
    PomError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyDecl {
    pub coordinate: ArtifactCoordinate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepositoryDecl {
    pub id: String,
    pub name: Option<String>,
    pub url: String,
    pub snapshots_enabled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub id: String,
    pub active_by_default: bool,
    pub repositories: Vec<RepositoryDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PluginConfig {
    pub group_id: Option<String>,
    pub artifact_id: String,
    pub version: Option<String>,
    pub configuration: BTreeMap<String, String>,
    pub goals: Vec<String>,
}

impl PluginConfig {
    pub fn has_goal(&self, goal: &str) -> bool {
        self.goals.iter().any(|g| g == goal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReportPlugin {
    pub group_id: Option<String>,
    pub artifact_id: String,
    pub version: Option<String>,
    pub reports: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Organization {
    pub name: Option<String>,
    pub url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct License {
    pub name: Option<String>,
    pub url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Developer {
    pub name: Option<String>,
    pub email: Option<String>,
    pub organization: Option<String>,
    pub organization_url: Option<String>,
    pub roles: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProjectMetadata {
    pub description: Option<String>,
    pub organization: Option<Organization>,
    pub inception_year: Option<String>,
    pub licenses: Vec<License>,
    pub developers: Vec<Developer>,
}

impl ProjectMetadata {
    pub fn is_empty(&self) -> bool {
        *self == ProjectMetadata::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectDescriptor {
    pub coordinate: ArtifactCoordinate,
    pub dependencies: Vec<DependencyDecl>,
    pub repositories: Vec<RepositoryDecl>,
    pub profiles: Vec<Profile>,
    pub plugins: Vec<PluginConfig>,
    pub report_plugins: Vec<ReportPlugin>,
    pub metadata: ProjectMetadata,
}

/// A parsed descriptor plus the element paths that were ignored.
#[derive(Debug, Clone)]
pub struct ParsedPom {
    pub project: ProjectDescriptor,
    pub warnings: Vec<String>,
}

impl ProjectDescriptor {
    pub fn new(coordinate: ArtifactCoordinate) -> Self {
        ProjectDescriptor {
            coordinate,
            dependencies: Vec::new(),
            repositories: Vec::new(),
            profiles: Vec::new(),
            plugins: Vec::new(),
            report_plugins: Vec::new(),
            metadata: ProjectMetadata::default(),
        }
    }

    pub fn load(project_dir: &Path) -> Result<ParsedPom, PomError> {
        let path = project_dir.join(POM_FILE);
        let text = std::fs::read_to_string(&path).map_err(|source| PomError::Io { path, source })?;
        parse_pom(&text)
    }

    /// Top-level repositories, then those of default-active profiles, first
    /// occurrence of each id kept.
    pub fn effective_repositories(&self) -> Vec<RepositoryDecl> {
        let mut seen = HashSet::new();
        self.repositories
            .iter()
            .chain(
                self.profiles
                    .iter()
                    .filter(|p| p.active_by_default)
                    .flat_map(|p| p.repositories.iter()),
            )
            .filter(|r| seen.insert(r.id.clone()))
            .cloned()
            .collect()
    }

    /// First plugin declaring `goal`, in document order.
    pub fn plugin_with_goal(&self, goal: &str) -> Option<&PluginConfig> {
        self.plugins.iter().find(|p| p.has_goal(goal))
    }

    /// Configuration value for `key` on the first plugin carrying `goal`.
    pub fn goal_config(&self, goal: &str, key: &str) -> Option<&str> {
        self.plugin_with_goal(goal)
            .and_then(|p| p.configuration.get(key))
            .map(String::as_str)
    }

    /// Project-relative path of the project's ontology document.
    pub fn ontology_file(&self) -> PathBuf {
        match self.goal_config("owlimport", "owlfile") {
            Some(f) => PathBuf::from(f),
            None => default_ontology_file(&self.coordinate.artifact_id),
        }
    }
}

pub fn default_ontology_file(artifact_id: &str) -> PathBuf {
    PathBuf::from("src")
        .join("main")
        .join("owl")
        .join(format!("{artifact_id}.owl"))
}

pub fn effective_repositories(p: &ProjectDescriptor) -> Vec<RepositoryDecl> {
    p.effective_repositories()
}

struct Ctx {
    warnings: Vec<String>,
}

impl Ctx {
    fn unknown(&mut self, path: &str, node: roxmltree::Node<'_, '_>) {
        self.warnings.push(format!("{path}/{}", node.tag_name().name()));
    }
}

fn elements<'a, 'i>(node: roxmltree::Node<'a, 'i>) -> impl Iterator<Item = roxmltree::Node<'a, 'i>> {
    node.children().filter(|c| c.is_element())
}

fn text_of(node: roxmltree::Node<'_, '_>, name: &str) -> Option<String> {
    child(node, name).and_then(node_text)
}

fn parse_bool(path: &str, v: Option<String>) -> Result<bool, PomError> {
    match v.as_deref() {
        None => Ok(false),
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        Some(other) => Err(schema(path, format!("expected true or false, found {other:?}"))),
    }
}

fn coordinate_of(node: roxmltree::Node<'_, '_>, path: &str, with_type: bool) -> Result<ArtifactCoordinate, PomError> {
    let req = |name: &str| text_of(node, name).ok_or_else(|| schema(path, format!("missing <{name}>")));
    let (g, a, v) = (req("groupId")?, req("artifactId")?, req("version")?);
    let kind = if with_type {
        text_of(node, "type").unwrap_or_else(|| DEFAULT_TYPE.to_string())
    } else {
        DEFAULT_TYPE.to_string()
    };
    let classifier = if with_type { text_of(node, "classifier") } else { None };
    ArtifactCoordinate::full(g, a, v, kind, classifier).map_err(|e| schema(path, e.to_string()))
}

pub fn parse_pom(text: &str) -> Result<ParsedPom, PomError> {
    let doc = roxmltree::Document::parse(text)?;
    let root = doc.root_element();
    if root.tag_name().name() != "project" {
        return Err(schema(root.tag_name().name(), "root element must be <project>"));
    }
    let mut ctx = Ctx { warnings: Vec::new() };
    let coordinate = coordinate_of(root, "project", false)?;
    let mut p = ProjectDescriptor::new(coordinate);

    for node in elements(root) {
        match node.tag_name().name() {
            "groupId" | "artifactId" | "version" => {}
            "description" => p.metadata.description = node_text(node),
            "inceptionYear" => p.metadata.inception_year = node_text(node),
            "organization" => {
                p.metadata.organization = Some(Organization {
                    name: text_of(node, "name"),
                    url: text_of(node, "url"),
                })
            }
            "licenses" => {
                for lic in children(node, "license") {
                    p.metadata.licenses.push(License {
                        name: text_of(lic, "name"),
                        url: text_of(lic, "url"),
                    });
                }
            }
            "developers" => {
                for dev in children(node, "developer") {
                    p.metadata.developers.push(Developer {
                        name: text_of(dev, "name"),
                        email: text_of(dev, "email"),
                        organization: text_of(dev, "organization"),
                        organization_url: text_of(dev, "organizationUrl"),
                        roles: child(dev, "roles")
                            .map(|r| children(r, "role").filter_map(node_text).collect())
                            .unwrap_or_default(),
                    });
                }
            }
            "dependencies" => {
                let mut keys: HashSet<ArtifactKey> = HashSet::new();
                for (i, dep) in elements(node).enumerate() {
                    let path = format!("project/dependencies/dependency[{}]", i + 1);
                    if dep.tag_name().name() != "dependency" {
                        ctx.unknown("project/dependencies", dep);
                        continue;
                    }
                    let coordinate = coordinate_of(dep, &path, true)?;
                    if !keys.insert(coordinate.key()) {
                        return Err(schema(&path, format!("duplicate dependency {}", coordinate.key())));
                    }
                    p.dependencies.push(DependencyDecl { coordinate });
                }
            }
            "repositories" => p.repositories = parse_repositories(node, "project/repositories", &mut ctx)?,
            "profiles" => {
                for (i, prof) in children(node, "profile").enumerate() {
                    let path = format!("project/profiles/profile[{}]", i + 1);
                    let mut active = false;
                    if let Some(act) = child(prof, "activation") {
                        for a in elements(act) {
                            if a.tag_name().name() == "activeByDefault" {
                                active = parse_bool(&path, node_text(a))?;
                            } else {
                                ctx.unknown(&format!("{path}/activation"), a);
                            }
                        }
                    }
                    let repositories = match child(prof, "repositories") {
                        Some(r) => parse_repositories(r, &format!("{path}/repositories"), &mut ctx)?,
                        None => Vec::new(),
                    };
                    p.profiles.push(Profile {
                        id: text_of(prof, "id").ok_or_else(|| schema(&path, "missing <id>"))?,
                        active_by_default: active,
                        repositories,
                    });
                }
            }
            "build" => {
                for b in elements(node) {
                    if b.tag_name().name() != "plugins" {
                        ctx.unknown("project/build", b);
                        continue;
                    }
                    for (i, pl) in children(b, "plugin").enumerate() {
                        p.plugins
                            .push(parse_plugin(pl, &format!("project/build/plugins/plugin[{}]", i + 1))?);
                    }
                }
            }
            "reporting" => {
                for b in elements(node) {
                    if b.tag_name().name() != "plugins" {
                        ctx.unknown("project/reporting", b);
                        continue;
                    }
                    for (i, pl) in children(b, "plugin").enumerate() {
                        let path = format!("project/reporting/plugins/plugin[{}]", i + 1);
                        let reports = child(pl, "reportSets")
                            .into_iter()
                            .flat_map(|rs| children(rs, "reportSet"))
                            .filter_map(|set| child(set, "reports"))
                            .flat_map(|r| children(r, "report"))
                            .filter_map(node_text)
                            .collect();
                        p.report_plugins.push(ReportPlugin {
                            group_id: text_of(pl, "groupId"),
                            artifact_id: text_of(pl, "artifactId")
                                .ok_or_else(|| schema(&path, "missing <artifactId>"))?,
                            version: text_of(pl, "version"),
                            reports,
                        });
                    }
                }
            }
            _ => ctx.unknown("project", node),
        }
    }
    Ok(ParsedPom {
        project: p,
        warnings: ctx.warnings,
    })
}

fn parse_repositories(
    node: roxmltree::Node<'_, '_>,
    path: &str,
    ctx: &mut Ctx,
) -> Result<Vec<RepositoryDecl>, PomError> {
    let mut out = Vec::new();
    for (i, r) in elements(node).enumerate() {
        if r.tag_name().name() != "repository" {
            ctx.unknown(path, r);
            continue;
        }
        let rpath = format!("{path}/repository[{}]", i + 1);
        let snapshots = child(r, "snapshots").and_then(|s| text_of(s, "enabled"));
        out.push(RepositoryDecl {
            id: text_of(r, "id").ok_or_else(|| schema(&rpath, "missing <id>"))?,
            name: text_of(r, "name"),
            url: text_of(r, "url").ok_or_else(|| schema(&rpath, "missing <url>"))?,
            snapshots_enabled: parse_bool(&rpath, snapshots)?,
        });
    }
    Ok(out)
}

fn parse_plugin(pl: roxmltree::Node<'_, '_>, path: &str) -> Result<PluginConfig, PomError> {
    let mut configuration = BTreeMap::new();
    if let Some(conf) = child(pl, "configuration") {
        for c in elements(conf) {
            configuration.insert(c.tag_name().name().to_string(), node_text(c).unwrap_or_default());
        }
    }
    let goals = child(pl, "executions")
        .into_iter()
        .flat_map(|e| children(e, "execution"))
        .filter_map(|e| child(e, "goals"))
        .flat_map(|g| children(g, "goal"))
        .filter_map(node_text)
        .collect();
    Ok(PluginConfig {
        group_id: text_of(pl, "groupId"),
        artifact_id: text_of(pl, "artifactId").ok_or_else(|| schema(path, "missing <artifactId>"))?,
        version: text_of(pl, "version"),
        configuration,
        goals,
    })
}

fn write_repositories(w: &mut XmlWriter, repos: &[RepositoryDecl]) {
    if repos.is_empty() {
        return;
    }
    w.open("repositories");
    for r in repos {
        w.open("repository");
        if r.snapshots_enabled {
            w.open("snapshots").leaf("enabled", "true").close();
        }
        w.leaf("id", &r.id)
            .opt_leaf("name", r.name.as_deref())
            .leaf("url", &r.url);
        w.close();
    }
    w.close();
}

pub fn serialize_pom(p: &ProjectDescriptor) -> String {
    let mut w = XmlWriter::new();
    w.open("project");
    w.leaf("groupId", &p.coordinate.group_id)
        .leaf("artifactId", &p.coordinate.artifact_id)
        .leaf("version", &p.coordinate.version);

    let m = &p.metadata;
    w.opt_leaf("description", m.description.as_deref());
    if let Some(org) = &m.organization {
        w.open("organization")
            .opt_leaf("name", org.name.as_deref())
            .opt_leaf("url", org.url.as_deref())
            .close();
    }
    w.opt_leaf("inceptionYear", m.inception_year.as_deref());
    if !m.licenses.is_empty() {
        w.open("licenses");
        for l in &m.licenses {
            w.open("license")
                .opt_leaf("name", l.name.as_deref())
                .opt_leaf("url", l.url.as_deref())
                .close();
        }
        w.close();
    }
    if !m.developers.is_empty() {
        w.open("developers");
        for d in &m.developers {
            w.open("developer")
                .opt_leaf("name", d.name.as_deref())
                .opt_leaf("email", d.email.as_deref())
                .opt_leaf("organization", d.organization.as_deref())
                .opt_leaf("organizationUrl", d.organization_url.as_deref());
            if !d.roles.is_empty() {
                w.open("roles");
                for r in &d.roles {
                    w.leaf("role", r);
                }
                w.close();
            }
            w.close();
        }
        w.close();
    }

    if !p.dependencies.is_empty() {
        w.open("dependencies");
        for d in &p.dependencies {
            let c = &d.coordinate;
            w.open("dependency")
                .leaf("groupId", &c.group_id)
                .leaf("artifactId", &c.artifact_id)
                .leaf("version", &c.version)
                .leaf("type", &c.kind)
                .opt_leaf("classifier", c.classifier.as_deref())
                .close();
        }
        w.close();
    }
    write_repositories(&mut w, &p.repositories);
    if !p.profiles.is_empty() {
        w.open("profiles");
        for prof in &p.profiles {
            w.open("profile").leaf("id", &prof.id);
            if prof.active_by_default {
                w.open("activation").leaf("activeByDefault", "true").close();
            }
            write_repositories(&mut w, &prof.repositories);
            w.close();
        }
        w.close();
    }
    if !p.plugins.is_empty() {
        w.open("build").open("plugins");
        for pl in &p.plugins {
            w.open("plugin")
                .opt_leaf("groupId", pl.group_id.as_deref())
                .leaf("artifactId", &pl.artifact_id)
                .opt_leaf("version", pl.version.as_deref());
            if !pl.configuration.is_empty() {
                w.open("configuration");
                for (k, v) in &pl.configuration {
                    w.leaf(k, v);
                }
                w.close();
            }
            if !pl.goals.is_empty() {
                w.open("executions").open("execution").open("goals");
                for g in &pl.goals {
                    w.leaf("goal", g);
                }
                w.close().close().close();
            }
            w.close();
        }
        w.close().close();
    }
    if !p.report_plugins.is_empty() {
        w.open("reporting").open("plugins");
        for pl in &p.report_plugins {
            w.open("plugin")
                .opt_leaf("groupId", pl.group_id.as_deref())
                .leaf("artifactId", &pl.artifact_id)
                .opt_leaf("version", pl.version.as_deref());
            if !pl.reports.is_empty() {
                w.open("reportSets").open("reportSet").open("reports");
                for r in &pl.reports {
                    w.leaf("report", r);
                }
                w.close().close().close();
            }
            w.close();
        }
        w.close().close();
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version></project>";

    #[test]
    fn time_ontology_dependency() {
        let text = r#"<project>
          <groupId>ex</groupId><artifactId>p</artifactId><version>1</version>
          <dependencies>
            <dependency>
                <groupId>de.onto.maven</groupId>
                <artifactId>TimeOntologie</artifactId>
                <version>1.0</version>
            </dependency>
          </dependencies>
        </project>"#;
        let p = parse_pom(text).unwrap().project;
        assert_eq!(p.dependencies.len(), 1);
        let c = &p.dependencies[0].coordinate;
        assert_eq!(
            (c.group_id.as_str(), c.artifact_id.as_str(), c.version.as_str()),
            ("de.onto.maven", "TimeOntologie", "1.0")
        );
        assert_eq!(c.kind, "owl");
    }

    #[test]
    fn minimal_pom() {
        let parsed = parse_pom(MINIMAL).unwrap();
        let p = parsed.project;
        assert!(p.dependencies.is_empty() && p.repositories.is_empty() && p.plugins.is_empty());
        assert!(p.metadata.is_empty());
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn minimal_serialization() {
        let p = parse_pom(MINIMAL).unwrap().project;
        let text = serialize_pom(&p);
        assert!(text.contains(
            "<project>\n  <groupId>g</groupId>\n  <artifactId>a</artifactId>\n  <version>1</version>\n</project>"
        ));
    }

    #[test]
    fn missing_coordinates_is_schema_error() {
        let err = parse_pom("<project><groupId>g</groupId><version>1</version></project>").unwrap_err();
        assert!(matches!(err, PomError::Schema { .. }));
        let err = parse_pom(
            "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version>\
             <dependencies><dependency><groupId>x</groupId><artifactId>y</artifactId></dependency></dependencies></project>",
        )
        .unwrap_err();
        assert!(matches!(err, PomError::Schema { ref path, .. } if path.contains("dependency[1]")));
    }

    #[test]
    fn duplicate_dependency_rejected() {
        let dep = "<dependency><groupId>x</groupId><artifactId>y</artifactId><version>1</version></dependency>";
        let dep2 = "<dependency><groupId>x</groupId><artifactId>y</artifactId><version>2</version></dependency>";
        let text = format!(
            "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version><dependencies>{dep}{dep2}</dependencies></project>"
        );
        assert!(matches!(parse_pom(&text), Err(PomError::Schema { .. })));
    }

    #[test]
    fn malformed_xml() {
        assert!(matches!(parse_pom("<project>"), Err(PomError::Xml(_))));
    }

    #[test]
    fn unknown_elements_warn_with_path() {
        let text = "<project><groupId>g</groupId><artifactId>a</artifactId><version>1</version><modelVersion>4.0.0</modelVersion>\
                    <profiles><profile><id>x</id><activation><jdk>1.8</jdk></activation></profile></profiles></project>";
        let parsed = parse_pom(text).unwrap();
        assert_eq!(
            parsed.warnings,
            vec!["project/modelVersion", "project/profiles/profile[1]/activation/jdk"]
        );
    }

    #[test]
    fn namespaced_pom() {
        let text = r#"<project xmlns="http://maven.apache.org/POM/4.0.0"><groupId>g</groupId><artifactId>a</artifactId><version>1</version></project>"#;
        assert_eq!(parse_pom(text).unwrap().project.coordinate.artifact_id, "a");
    }

    fn repo(id: &str, url: &str) -> RepositoryDecl {
        RepositoryDecl {
            id: id.into(),
            name: None,
            url: url.into(),
            snapshots_enabled: false,
        }
    }

    #[test]
    fn effective_repositories_order_and_first_wins() {
        let mut p = ProjectDescriptor::new(ArtifactCoordinate::new("g", "a", "1").unwrap());
        assert!(p.effective_repositories().is_empty());
        p.repositories = vec![repo("central", "http://top/"), repo("b", "http://b/")];
        p.profiles = vec![
            Profile {
                id: "off".into(),
                active_by_default: false,
                repositories: vec![repo("off", "http://off/")],
            },
            Profile {
                id: "on".into(),
                active_by_default: true,
                repositories: vec![repo("central", "http://profile/"), repo("c", "http://c/")],
            },
        ];
        let ids: Vec<_> = p.effective_repositories().into_iter().map(|r| (r.id, r.url)).collect();
        assert_eq!(
            ids,
            vec![
                ("central".to_string(), "http://top/".to_string()),
                ("b".into(), "http://b/".into()),
                ("c".into(), "http://c/".into())
            ]
        );
    }

    #[test]
    fn ontology_file_convention_and_override() {
        let mut p = ProjectDescriptor::new(ArtifactCoordinate::new("g", "reputation", "1").unwrap());
        assert_eq!(p.ontology_file(), PathBuf::from("src/main/owl/reputation.owl"));
        p.plugins.push(PluginConfig {
            artifact_id: "OntoMvnImport".into(),
            configuration: [("owlfile".to_string(), "src/resource/reputation.owl".to_string())].into(),
            goals: vec!["owlimport".into()],
            ..Default::default()
        });
        assert_eq!(p.ontology_file(), PathBuf::from("src/resource/reputation.owl"));
    }
}
