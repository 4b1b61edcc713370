//! Dependency closure over POM dependencies and ontology imports, with
//! nearest-wins version mediation and XML catalog output.

mod catalog;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::coordinate::{ArtifactCoordinate, ArtifactKey};
use crate::iri::Iri;
use crate::ontology::{parse_ontology_lenient, Ontology, ParseError, SkippedConstruct};
use crate::pom::ProjectDescriptor;
use crate::repository::{fetch, LocalRepository, RemoteRepository, RepositoryError, Transport};

pub use catalog::{Catalog, CatalogEntry, ImportRegistry, CATALOG_FILE, CATALOG_NS, REGISTRY_FILE};

/// Version assigned to documents fetched straight from their import IRI.
pub const EXTERNAL_VERSION: &str = "0.0.0-EXTERNAL";

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("{source}; requested by {}", chain_string(chain))]
    Fetch {
        chain: Vec<ArtifactCoordinate>,
        #[source]
        source: RepositoryError,
    },
    #[error("cannot map import {iri}: {reason}")]
    UnmappableImport { iri: String, reason: String },
    #[error("{path}: {source}")]
    Syntax {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {message}")]
    Catalog { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Repository(#[from] RepositoryError),
}

fn chain_string(chain: &[ArtifactCoordinate]) -> String {
    chain.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" -> ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Pom,
    OwlImport,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Pom => "pom",
            EdgeKind::OwlImport => "owl-import",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyNode {
    pub coordinate: ArtifactCoordinate,
    pub depth: usize,
    /// Parents that asked for this exact version, first one first.
    pub requested_by: Vec<ArtifactCoordinate>,
    pub edge_kind: EdgeKind,
    pub file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub key: ArtifactKey,
    pub winner: String,
    pub winner_depth: usize,
    /// `(version, depth)` in the order they were met.
    pub losers: Vec<(String, usize)>,
}

impl Conflict {
    /// Losers newer than the winner; worth a warning.
    pub fn newer_losers(&self) -> Vec<&str> {
        self.losers
            .iter()
            .filter(|(v, _)| compare_versions(v, &self.winner) == Ordering::Greater)
            .map(|(v, _)| v.as_str())
            .collect()
    }
}

/// An `Import` resolved to an artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportEdge {
    pub iri: Iri,
    pub from: ArtifactCoordinate,
    pub target: ArtifactCoordinate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionResult {
    pub root: ArtifactCoordinate,
    pub selected: BTreeMap<ArtifactKey, DependencyNode>,
    pub conflicts: Vec<Conflict>,
    /// Selection order: breadth first, declaration order within a level.
    pub order: Vec<ArtifactKey>,
    pub imports: Vec<ImportEdge>,
    /// Dependency paths that led back to one of their own ancestors.
    pub cycles: Vec<Vec<ArtifactCoordinate>>,
    /// IRIs downloaded directly and stored under a derived coordinate.
    pub registrations: Vec<(String, ArtifactCoordinate)>,
}

impl ResolutionResult {
    pub fn node(&self, key: &ArtifactKey) -> Option<&DependencyNode> {
        self.selected.get(key)
    }

    pub fn ordered_nodes(&self) -> impl Iterator<Item = &DependencyNode> {
        self.order.iter().filter_map(|k| self.selected.get(k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImportSource {
    Registry,
    Cached,
    Downloaded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedImport {
    pub coordinate: ArtifactCoordinate,
    pub source: ImportSource,
}

fn sanitize(part: &str) -> String {
    let s: String = part
        .chars()
        .map(|c| {
            if c.is_whitespace() || matches!(c, ':' | '/' | '\\' | '?' | '#') {
                '_'
            } else {
                c
            }
        })
        .collect();
    let s = s.trim_matches('.').to_string();
    if s.is_empty() || s == ".." {
        "_".to_string()
    } else {
        s
    }
}

/// Coordinate under which a directly downloaded import is cached: reversed
/// host labels as group, last path segment without extension as artifact.
pub fn derive_coordinate(iri: &Iri) -> ArtifactCoordinate {
    let url = iri.to_url();
    let rest = url.split_once("://").map(|(_, r)| r).unwrap_or(&url);
    let rest = rest.split(['?', '#']).next().unwrap_or(rest);
    let (authority, path) = rest.split_once('/').unwrap_or((rest, ""));
    let host = authority.rsplit('@').next().unwrap_or(authority);
    let host = host.split(':').next().unwrap_or(host);
    let mut labels: Vec<String> = host.split('.').filter(|l| !l.is_empty()).map(sanitize).collect();
    labels.reverse();
    let group = if labels.is_empty() {
        "external".to_string()
    } else {
        labels.join(".")
    };
    let last = path.split('/').rfind(|s| !s.is_empty()).unwrap_or("index");
    let stem = match last.rsplit_once('.') {
        Some((stem, _)) if !stem.is_empty() => stem,
        _ => last,
    };
    ArtifactCoordinate::new(group, sanitize(stem), EXTERNAL_VERSION).expect("sanitized coordinate parts are valid")
}

/// Maps an import IRI to an artifact: registry first, then a cached direct
/// download, then a fresh download through `transport`.
pub fn map_import(
    iri: &Iri,
    registry: &ImportRegistry,
    local: &LocalRepository,
    transport: &dyn Transport,
) -> Result<MappedImport, ResolveError> {
    if let Some(c) = registry.lookup(iri.as_str()) {
        return Ok(MappedImport {
            coordinate: c.clone(),
            source: ImportSource::Registry,
        });
    }
    let derived = derive_coordinate(iri);
    if local.contains(&derived) {
        return Ok(MappedImport {
            coordinate: derived,
            source: ImportSource::Cached,
        });
    }
    let unmappable = |reason: String| ResolveError::UnmappableImport {
        iri: iri.to_string(),
        reason,
    };
    match transport.get(&iri.to_url()) {
        Ok(Some(bytes)) => {
            local.store(&derived, &bytes, None)?;
            log::info!("downloaded {iri} as {derived}");
            Ok(MappedImport {
                coordinate: derived,
                source: ImportSource::Downloaded,
            })
        }
        Ok(None) => Err(unmappable("not in the import registry and not found at its IRI".into())),
        Err(e) => Err(unmappable(format!("not in the import registry and {e}"))),
    }
}

struct Pending {
    coordinate: ArtifactCoordinate,
    depth: usize,
    /// Root first, direct parent last.
    chain: Vec<ArtifactCoordinate>,
    edge_kind: EdgeKind,
    via: Option<Iri>,
}

pub struct Resolver<'a> {
    pub repos: &'a [RemoteRepository],
    pub local: &'a LocalRepository,
    pub registry: &'a ImportRegistry,
    /// Used for imports that are not in the registry.
    pub transport: &'a dyn Transport,
}

fn parse_file(path: &Path) -> Result<Ontology, ResolveError> {
    let text = fs::read_to_string(path).map_err(|source| ResolveError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed = parse_ontology_lenient(&text).map_err(|source| ResolveError::Syntax {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parsed.ontology)
}

impl Resolver<'_> {
    /// Breadth-first closure from `project`. `root_ontology` contributes the
    /// project's own imports.
    pub fn resolve(
        &self,
        project: &ProjectDescriptor,
        root_ontology: Option<&Ontology>,
    ) -> Result<ResolutionResult, ResolveError> {
        let root = project.coordinate.clone();
        let mut result = ResolutionResult {
            root: root.clone(),
            selected: BTreeMap::new(),
            conflicts: Vec::new(),
            order: Vec::new(),
            imports: Vec::new(),
            cycles: Vec::new(),
            registrations: Vec::new(),
        };
        let mut queue = VecDeque::new();
        let chain = vec![root.clone()];
        for d in &project.dependencies {
            queue.push_back(Pending {
                coordinate: d.coordinate.clone(),
                depth: 1,
                chain: chain.clone(),
                edge_kind: EdgeKind::Pom,
                via: None,
            });
        }
        if let Some(o) = root_ontology {
            self.enqueue_imports(o, &chain, 1, &mut queue, &mut result)?;
        }
        while let Some(item) = queue.pop_front() {
            self.visit(item, &mut queue, &mut result)?;
        }
        Ok(result)
    }

    fn enqueue_imports(
        &self,
        o: &Ontology,
        chain: &[ArtifactCoordinate],
        depth: usize,
        queue: &mut VecDeque<Pending>,
        result: &mut ResolutionResult,
    ) -> Result<(), ResolveError> {
        for iri in &o.imports {
            let mapped = map_import(iri, self.registry, self.local, self.transport)?;
            if mapped.source == ImportSource::Downloaded {
                result.registrations.push((iri.to_string(), mapped.coordinate.clone()));
            }
            queue.push_back(Pending {
                coordinate: mapped.coordinate,
                depth,
                chain: chain.to_vec(),
                edge_kind: EdgeKind::OwlImport,
                via: Some(iri.clone()),
            });
        }
        Ok(())
    }

    fn visit(
        &self,
        item: Pending,
        queue: &mut VecDeque<Pending>,
        result: &mut ResolutionResult,
    ) -> Result<(), ResolveError> {
        let key = item.coordinate.key();
        let parent = item.chain.last().expect("chain starts at the root").clone();
        if item.chain.iter().any(|c| c.key() == key) {
            let mut cycle = item.chain.clone();
            cycle.push(item.coordinate.clone());
            log::warn!("dependency cycle: {}", chain_string(&cycle));
            result.cycles.push(cycle);
            return Ok(());
        }
        if let Some(node) = result.selected.get_mut(&key) {
            if node.coordinate.version == item.coordinate.version {
                if !node.requested_by.contains(&parent) {
                    node.requested_by.push(parent.clone());
                }
            } else {
                let (winner, winner_depth) = (node.coordinate.version.clone(), node.depth);
                let loser = (item.coordinate.version.clone(), item.depth);
                match result.conflicts.iter_mut().find(|c| c.key == key) {
                    Some(c) => {
                        if !c.losers.contains(&loser) {
                            c.losers.push(loser);
                        }
                    }
                    None => result.conflicts.push(Conflict {
                        key: key.clone(),
                        winner,
                        winner_depth,
                        losers: vec![loser],
                    }),
                }
            }
            if let Some(iri) = item.via {
                let target = result.selected[&key].coordinate.clone();
                result.imports.push(ImportEdge {
                    iri,
                    from: parent,
                    target,
                });
            }
            return Ok(());
        }

        let mut chain = item.chain;
        chain.push(item.coordinate.clone());
        let artifact = fetch(&item.coordinate, self.repos, self.local).map_err(|source| ResolveError::Fetch {
            chain: chain.clone(),
            source,
        })?;
        log::debug!(
            "selected {} at depth {} ({})",
            item.coordinate,
            item.depth,
            artifact.origin
        );
        result.order.push(key.clone());
        result.selected.insert(
            key,
            DependencyNode {
                coordinate: item.coordinate.clone(),
                depth: item.depth,
                requested_by: vec![parent.clone()],
                edge_kind: item.edge_kind,
                file: artifact.file.clone(),
            },
        );
        if let Some(iri) = item.via {
            result.imports.push(ImportEdge {
                iri,
                from: parent,
                target: item.coordinate.clone(),
            });
        }
        if let Some(pom) = &artifact.pom {
            for d in &pom.dependencies {
                queue.push_back(Pending {
                    coordinate: d.coordinate.clone(),
                    depth: item.depth + 1,
                    chain: chain.clone(),
                    edge_kind: EdgeKind::Pom,
                    via: None,
                });
            }
        }
        let o = parse_file(&artifact.file)?;
        self.enqueue_imports(&o, &chain, item.depth + 1, queue, result)
    }
}

/// Builds the catalog for every resolved import and writes it to `path`.
/// Entries use absolute paths into the local repository, one per import
/// IRI, in resolution order.
pub fn emit_catalog(result: &ResolutionResult, path: &Path) -> Result<Catalog, ResolveError> {
    let mut catalog = Catalog::default();
    for edge in &result.imports {
        let Some(node) = result.selected.get(&edge.target.key()) else {
            continue;
        };
        match fs::canonicalize(&node.file) {
            Ok(abs) => {
                catalog.add(edge.iri.as_str(), &abs.to_string_lossy());
            }
            Err(e) => log::warn!("not cataloguing {}: {}: {e}", edge.iri, node.file.display()),
        }
    }
    write_catalog(&catalog, path)?;
    Ok(catalog)
}

pub fn write_catalog(catalog: &Catalog, path: &Path) -> Result<(), ResolveError> {
    crate::repository::write_atomic(path, catalog.to_xml().as_bytes()).map_err(ResolveError::from)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedImport {
    pub iri: Iri,
    pub ontology: Ontology,
    /// Axioms outside the supported subset that were dropped while parsing.
    pub skipped: Vec<SkippedConstruct>,
    pub from_catalog: bool,
}

/// The transitive import closure of `o`, each IRI loaded once. Catalog
/// entries are used first, relative URIs resolved against `base`; anything
/// else goes through `transport`.
pub fn load_with_catalog(
    o: &Ontology,
    catalog: &Catalog,
    base: &Path,
    transport: &dyn Transport,
) -> Result<Vec<LoadedImport>, ResolveError> {
    let mut seen: HashSet<Iri> = HashSet::new();
    let mut queue: VecDeque<Iri> = o.imports.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some(iri) = queue.pop_front() {
        if !seen.insert(iri.clone()) {
            continue;
        }
        let (text, origin, from_catalog) = match catalog.lookup(iri.as_str()) {
            Some(uri) => {
                let path = Catalog::resolve_uri(uri, base);
                let text = fs::read_to_string(&path).map_err(|source| ResolveError::Io {
                    path: path.clone(),
                    source,
                })?;
                (text, path, true)
            }
            None => {
                let url = iri.to_url();
                let bytes = match transport.get(&url) {
                    Ok(Some(b)) => b,
                    Ok(None) => {
                        return Err(ResolveError::UnmappableImport {
                            iri: iri.to_string(),
                            reason: "no catalog entry and not found at its IRI".into(),
                        })
                    }
                    Err(e) => {
                        return Err(ResolveError::UnmappableImport {
                            iri: iri.to_string(),
                            reason: format!("no catalog entry and {e}"),
                        })
                    }
                };
                (String::from_utf8_lossy(&bytes).into_owned(), PathBuf::from(url), false)
            }
        };
        let parsed = parse_ontology_lenient(&text).map_err(|source| ResolveError::Syntax { path: origin, source })?;
        queue.extend(parsed.ontology.imports.iter().cloned());
        out.push(LoadedImport {
            iri,
            ontology: parsed.ontology,
            skipped: parsed.skipped,
            from_catalog,
        });
    }
    Ok(out)
}

/// Orders versions by numeric dot segments; `-SNAPSHOT` sorts just below
/// its release. Non-numeric segments compare as text.
pub fn compare_versions(a: &str, b: &str) -> Ordering {
    let split = |v: &str| -> (String, bool) {
        match v.strip_suffix("-SNAPSHOT") {
            Some(base) => (base.to_string(), true),
            None => (v.to_string(), false),
        }
    };
    let ((a_base, a_snap), (b_base, b_snap)) = (split(a), split(b));
    let a_parts: Vec<&str> = a_base.split(['.', '-']).collect();
    let b_parts: Vec<&str> = b_base.split(['.', '-']).collect();
    for i in 0..a_parts.len().max(b_parts.len()) {
        let (x, y) = (
            a_parts.get(i).copied().unwrap_or("0"),
            b_parts.get(i).copied().unwrap_or("0"),
        );
        let ord = match (x.parse::<u64>(), y.parse::<u64>()) {
            (Ok(m), Ok(n)) => m.cmp(&n),
            _ => x.cmp(y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    // a snapshot precedes its release
    b_snap.cmp(&a_snap)
}
