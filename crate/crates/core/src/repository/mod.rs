//! Local and remote artifact repositories in Maven directory layout.

mod search;
mod server;
mod transport;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha1::{Digest, Sha1};
use thiserror::Error;

use crate::coordinate::ArtifactCoordinate;
use crate::iri::with_default_scheme;
use crate::pom::{parse_pom, PomError, ProjectDescriptor, RepositoryDecl, POM_FILE};

pub use search::{search_fallback, FixtureEngine, SearchEngine, SearchOutcome, SearchQuery};
pub use server::{serve, serve_with, ServeOptions, ServerHandle};
pub use transport::{
    HttpTransport, MemoryTransport, OfflineTransport, Operation, RecordingTransport, Transport, TransportError,
};

pub const CHECKSUM_SUFFIX: &str = ".sha1";

#[derive(Debug, Error)]
pub enum RepositoryError {
    #[error("{coordinate} not found (tried: {})", if tried.is_empty() { "no repositories".to_string() } else { tried.join(", ") })]
    NotFound {
        coordinate: Box<ArtifactCoordinate>,
        tried: Vec<String>,
    },
    #[error("checksum mismatch for {path}: expected {expected}, got {actual}")]
    ChecksumMismatch {
        path: String,
        expected: String,
        actual: String,
    },
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("{url} rejected the upload with status {status}")]
    RemoteRejected { url: String, status: u16 },
    #[error("no {POM_FILE} in {0}")]
    MissingPom(PathBuf),
    #[error("ontology file {0} does not exist")]
    MissingOntologyFile(PathBuf),
    #[error(transparent)]
    Pom(#[from] PomError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot start server: {0}")]
    Bind(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RepositoryError + '_ {
    move |source| RepositoryError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Lowercase hex SHA-1.
pub fn sha1_hex(bytes: &[u8]) -> String {
    hex::encode(Sha1::digest(bytes))
}

/// The digest in a `.sha1` file. Some tools append the file name after the
/// hash, so only the first token counts.
pub fn parse_checksum(content: &[u8]) -> String {
    String::from_utf8_lossy(content)
        .split_whitespace()
        .next()
        .unwrap_or("")
        .to_ascii_lowercase()
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), RepositoryError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| RepositoryError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(CHECKSUM_SUFFIX);
    PathBuf::from(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRepository {
    root: PathBuf,
}

impl LocalRepository {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        LocalRepository { root: root.into() }
    }

    /// `~/.ontomvn/repository`.
    pub fn default_root() -> PathBuf {
        let home = std::env::var_os("HOME")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        home.join(".ontomvn").join("repository")
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn artifact_file(&self, c: &ArtifactCoordinate) -> PathBuf {
        self.root.join(c.artifact_fs_path())
    }

    pub fn pom_file(&self, c: &ArtifactCoordinate) -> PathBuf {
        self.root.join(c.pom_path().split('/').collect::<PathBuf>())
    }

    /// Writes `bytes` and its checksum sidecar.
    pub fn write_with_checksum(&self, path: &Path, bytes: &[u8]) -> Result<(), RepositoryError> {
        write_atomic(path, bytes)?;
        write_atomic(&sidecar(path), sha1_hex(bytes).as_bytes())
    }

    /// Reads a stored file and checks it against its sidecar.
    pub fn read_verified(&self, path: &Path) -> Result<Vec<u8>, RepositoryError> {
        let bytes = fs::read(path).map_err(io_err(path))?;
        let side = sidecar(path);
        let expected = parse_checksum(&fs::read(&side).map_err(io_err(&side))?);
        let actual = sha1_hex(&bytes);
        if expected != actual {
            return Err(RepositoryError::ChecksumMismatch {
                path: path.display().to_string(),
                expected,
                actual,
            });
        }
        Ok(bytes)
    }

    pub fn contains(&self, c: &ArtifactCoordinate) -> bool {
        self.artifact_file(c).is_file()
    }

    pub fn store(&self, c: &ArtifactCoordinate, artifact: &[u8], pom: Option<&[u8]>) -> Result<(), RepositoryError> {
        self.write_with_checksum(&self.artifact_file(c), artifact)?;
        if let Some(p) = pom {
            self.write_with_checksum(&self.pom_file(c), p)?;
        }
        Ok(())
    }

    /// The stored POM, if any. Unparseable POMs are logged and ignored.
    pub fn read_pom(&self, c: &ArtifactCoordinate) -> Option<ProjectDescriptor> {
        let path = self.pom_file(c);
        let text = fs::read_to_string(&path).ok()?;
        match parse_pom(&text) {
            Ok(parsed) => Some(parsed.project),
            Err(e) => {
                log::warn!("ignoring unreadable POM {}: {e}", path.display());
                None
            }
        }
    }

    fn resolved(&self, c: &ArtifactCoordinate, origin: Origin) -> Result<ResolvedArtifact, RepositoryError> {
        let file = self.artifact_file(c);
        self.read_verified(&file)?;
        Ok(ResolvedArtifact {
            coordinate: c.clone(),
            file,
            pom: self.read_pom(c),
            origin,
        })
    }
}

#[derive(Clone)]
pub struct RemoteRepository {
    pub decl: RepositoryDecl,
    pub transport: Arc<dyn Transport>,
}

impl fmt::Debug for RemoteRepository {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RemoteRepository").field("decl", &self.decl).finish()
    }
}

impl RemoteRepository {
    pub fn new(decl: RepositoryDecl, transport: Arc<dyn Transport>) -> Self {
        RemoteRepository { decl, transport }
    }

    pub fn id(&self) -> &str {
        &self.decl.id
    }

    /// Base URL with a scheme added when the declaration has none.
    pub fn base_url(&self) -> String {
        with_default_scheme(self.decl.url.trim_end_matches('/'))
    }

    pub fn url_for(&self, relative: &str) -> String {
        format!("{}/{}", self.base_url(), relative.trim_start_matches('/'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Local,
    Remote(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Local => f.write_str("local"),
            Origin::Remote(id) => f.write_str(id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedArtifact {
    pub coordinate: ArtifactCoordinate,
    pub file: PathBuf,
    pub pom: Option<ProjectDescriptor>,
    pub origin: Origin,
}

/// Downloads `url` and checks it against `url.sha1` when the remote has one.
fn get_checked(repo: &RemoteRepository, url: &str) -> Result<Option<Vec<u8>>, RepositoryError> {
    let Some(bytes) = repo.transport.get(url)? else {
        return Ok(None);
    };
    let sum_url = format!("{url}{CHECKSUM_SUFFIX}");
    match repo.transport.get(&sum_url)? {
        Some(sum) => {
            let expected = parse_checksum(&sum);
            let actual = sha1_hex(&bytes);
            if expected != actual {
                return Err(RepositoryError::ChecksumMismatch {
                    path: url.to_string(),
                    expected,
                    actual,
                });
            }
        }
        None => log::warn!("{url} has no checksum on {}", repo.id()),
    }
    Ok(Some(bytes))
}

/// Returns a verified copy of `coord` in `local`, downloading it from the
/// first repository that has it. Non-snapshot versions already in `local`
/// never touch the network; snapshots always ask the remotes first and fall
/// back to the local copy.
pub fn fetch(
    coord: &ArtifactCoordinate,
    repos: &[RemoteRepository],
    local: &LocalRepository,
) -> Result<ResolvedArtifact, RepositoryError> {
    if !coord.is_snapshot() && local.contains(coord) {
        return local.resolved(coord, Origin::Local);
    }
    let mut tried = Vec::new();
    let mut failure: Option<RepositoryError> = None;
    let mut absent = 0;
    for repo in repos {
        let url = repo.url_for(&coord.artifact_path());
        tried.push(url.clone());
        match get_checked(repo, &url) {
            Ok(Some(bytes)) => {
                let pom_url = repo.url_for(&coord.pom_path());
                let pom = match get_checked(repo, &pom_url) {
                    Ok(p) => p,
                    Err(e @ RepositoryError::ChecksumMismatch { .. }) => return Err(e),
                    Err(e) => {
                        log::warn!("cannot fetch POM {pom_url}: {e}");
                        None
                    }
                };
                local.store(coord, &bytes, pom.as_deref())?;
                log::info!("fetched {coord} from {}", repo.id());
                return local.resolved(coord, Origin::Remote(repo.id().to_string()));
            }
            Ok(None) => absent += 1,
            Err(e @ RepositoryError::ChecksumMismatch { .. }) => return Err(e),
            Err(e) => {
                log::warn!("{}: {e}", repo.id());
                failure.get_or_insert(e);
            }
        }
    }
    if local.contains(coord) {
        return local.resolved(coord, Origin::Local);
    }
    match failure {
        // no repository answered at all: report the cause, not absence
        Some(e) if absent == 0 => Err(e),
        _ => Err(RepositoryError::NotFound {
            coordinate: Box::new(coord.clone()),
            tried,
        }),
    }
}

/// The project's coordinate, POM bytes and ontology bytes.
pub struct ProjectFiles {
    pub project: ProjectDescriptor,
    pub pom: Vec<u8>,
    pub ontology_path: PathBuf,
    pub ontology: Vec<u8>,
}

pub fn read_project(project_dir: &Path) -> Result<ProjectFiles, RepositoryError> {
    let pom_path = project_dir.join(POM_FILE);
    if !pom_path.is_file() {
        return Err(RepositoryError::MissingPom(project_dir.to_path_buf()));
    }
    let pom = fs::read(&pom_path).map_err(io_err(&pom_path))?;
    let parsed = parse_pom(&String::from_utf8_lossy(&pom))?;
    for w in &parsed.warnings {
        log::warn!("{}: {w}", pom_path.display());
    }
    let ontology_path = project_dir.join(parsed.project.ontology_file());
    if !ontology_path.is_file() {
        return Err(RepositoryError::MissingOntologyFile(ontology_path));
    }
    let ontology = fs::read(&ontology_path).map_err(io_err(&ontology_path))?;
    Ok(ProjectFiles {
        project: parsed.project,
        pom,
        ontology_path,
        ontology,
    })
}

/// Copies the project's ontology and POM into `local`.
pub fn install(project_dir: &Path, local: &LocalRepository) -> Result<ResolvedArtifact, RepositoryError> {
    let files = read_project(project_dir)?;
    let c = &files.project.coordinate;
    local.store(c, &files.ontology, Some(&files.pom))?;
    log::info!("installed {c} into {}", local.root().display());
    local.resolved(c, Origin::Local)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeployReceipt {
    pub urls: Vec<String>,
}

/// Uploads artifact, POM and both checksums.
pub fn deploy(project_dir: &Path, target: &RemoteRepository) -> Result<DeployReceipt, RepositoryError> {
    let files = read_project(project_dir)?;
    let c = &files.project.coordinate;
    let artifact_url = target.url_for(&c.artifact_path());
    let pom_url = target.url_for(&c.pom_path());
    let uploads: [(String, Vec<u8>); 4] = [
        (artifact_url.clone(), files.ontology.clone()),
        (
            format!("{artifact_url}{CHECKSUM_SUFFIX}"),
            sha1_hex(&files.ontology).into_bytes(),
        ),
        (pom_url.clone(), files.pom.clone()),
        (format!("{pom_url}{CHECKSUM_SUFFIX}"), sha1_hex(&files.pom).into_bytes()),
    ];
    let mut urls = Vec::new();
    for (url, body) in uploads {
        let status = target.transport.put(&url, &body)?;
        if !(200..300).contains(&status) {
            return Err(RepositoryError::RemoteRejected { url, status });
        }
        urls.push(url);
    }
    log::info!("deployed {c} to {}", target.id());
    Ok(DeployReceipt { urls })
}

#[cfg(test)]
mod tests {
    use super::*;
    fn decl(id: &str, url: &str) -> RepositoryDecl {
        RepositoryDecl {
            id: id.into(),
            name: None,
            url: url.into(),
            snapshots_enabled: false,
        }
    }

    fn camera() -> ArtifactCoordinate {
        ArtifactCoordinate::new("xfront.com.owl.ontologies", "Camera-OWL-Ontology", "1.0-SNAPSHOT").unwrap()
    }

    fn remote_with(c: &ArtifactCoordinate, body: &[u8]) -> (Arc<MemoryTransport>, RemoteRepository) {
        let t = Arc::new(MemoryTransport::default());
        let r = RemoteRepository::new(decl("central", "http://repo.test/maven"), t.clone());
        let url = r.url_for(&c.artifact_path());
        t.put(&url, body).unwrap();
        t.put(&format!("{url}.sha1"), sha1_hex(body).as_bytes()).unwrap();
        (t, r)
    }

    #[test]
    fn sha1_matches_known_vector() {
        assert_eq!(sha1_hex(b"abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
        assert_eq!(parse_checksum(b"A9993E36  file.owl\n"), "a9993e36");
    }

    #[test]
    fn fetch_stores_in_layout() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = camera();
        let (_, remote) = remote_with(&c, b"Ontology()");
        let got = fetch(&c, &[remote], &local).unwrap();
        assert_eq!(got.origin, Origin::Remote("central".into()));
        assert_eq!(
            got.file,
            dir.path().join(
                "xfront/com/owl/ontologies/Camera-OWL-Ontology/1.0-SNAPSHOT/Camera-OWL-Ontology-1.0-SNAPSHOT.owl"
            )
        );
        assert_eq!(
            fs::read(sidecar(&got.file)).unwrap(),
            sha1_hex(b"Ontology()").as_bytes()
        );
    }

    #[test]
    fn cached_release_needs_no_repositories() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = ArtifactCoordinate::new("de.onto.maven", "TimeOntologie", "1.0").unwrap();
        local.store(&c, b"x", None).unwrap();
        let got = fetch(&c, &[], &local).unwrap();
        assert_eq!(got.origin, Origin::Local);
        assert_eq!(got.origin.to_string(), "local");
    }

    #[test]
    fn cached_release_skips_network() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = ArtifactCoordinate::new("g", "a", "1").unwrap();
        let (mem, _) = remote_with(&c, b"x");
        let rec = RecordingTransport::new(mem);
        let remote = RemoteRepository::new(decl("central", "http://repo.test/maven"), Arc::new(rec.clone()));
        fetch(&c, std::slice::from_ref(&remote), &local).unwrap();
        let first = rec.count();
        assert!(first > 0);
        fetch(&c, &[remote], &local).unwrap();
        assert_eq!(rec.count(), first);
    }

    #[test]
    fn snapshots_recheck_remote() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = camera();
        let (mem, remote) = remote_with(&c, b"v1");
        fetch(&c, std::slice::from_ref(&remote), &local).unwrap();
        let url = remote.url_for(&c.artifact_path());
        mem.put(&url, b"v2").unwrap();
        mem.put(&format!("{url}.sha1"), sha1_hex(b"v2").as_bytes()).unwrap();
        let got = fetch(&c, &[remote], &local).unwrap();
        assert_eq!(fs::read(got.file).unwrap(), b"v2");
    }

    #[test]
    fn not_found_lists_urls_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = ArtifactCoordinate::new("g", "missing", "1").unwrap();
        let t: Arc<dyn Transport> = Arc::new(MemoryTransport::default());
        let repos = [
            RemoteRepository::new(decl("one", "http://one.test/r"), t.clone()),
            RemoteRepository::new(decl("two", "two.test/r/"), t),
        ];
        match fetch(&c, &repos, &local).unwrap_err() {
            RepositoryError::NotFound { tried, .. } => assert_eq!(
                tried,
                vec![
                    "http://one.test/r/g/missing/1/missing-1.owl",
                    "http://two.test/r/g/missing/1/missing-1.owl"
                ]
            ),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn remote_checksum_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = ArtifactCoordinate::new("g", "a", "1").unwrap();
        let (mem, remote) = remote_with(&c, b"good");
        mem.put(&remote.url_for(&c.artifact_path()), b"evil").unwrap();
        assert!(matches!(
            fetch(&c, &[remote], &local),
            Err(RepositoryError::ChecksumMismatch { .. })
        ));
        assert!(!local.contains(&c));
    }

    #[test]
    fn missing_remote_checksum_is_accepted() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = ArtifactCoordinate::new("g", "a", "1").unwrap();
        let mem = Arc::new(MemoryTransport::default());
        let remote = RemoteRepository::new(decl("r", "http://r.test"), mem.clone());
        mem.put(&remote.url_for(&c.artifact_path()), b"data").unwrap();
        let got = fetch(&c, &[remote], &local).unwrap();
        assert_eq!(local.read_verified(&got.file).unwrap(), b"data");
    }

    #[test]
    fn offline_transport_surfaces_error() {
        let dir = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(dir.path());
        let c = ArtifactCoordinate::new("g", "a", "1").unwrap();
        let remote = RemoteRepository::new(decl("r", "http://r.test"), Arc::new(OfflineTransport));
        assert!(matches!(
            fetch(&c, &[remote], &local),
            Err(RepositoryError::Transport(_))
        ));
    }

    fn project(dir: &Path, with_ontology: bool) {
        fs::write(
            dir.join("pom.xml"),
            "<project><modelVersion>4.0.0</modelVersion><groupId>de.onto.maven</groupId>\
             <artifactId>TimeOntologie</artifactId><version>1.0</version></project>",
        )
        .unwrap();
        if with_ontology {
            fs::create_dir_all(dir.join("src/main/owl")).unwrap();
            fs::write(dir.join("src/main/owl/TimeOntologie.owl"), "Ontology()\n").unwrap();
        }
    }

    #[test]
    fn install_layout_and_idempotence() {
        let proj = tempfile::tempdir().unwrap();
        let repo = tempfile::tempdir().unwrap();
        project(proj.path(), true);
        let local = LocalRepository::new(repo.path());
        let a = install(proj.path(), &local).unwrap();
        let b = install(proj.path(), &local).unwrap();
        assert_eq!(a, b);
        let dir = repo.path().join("de/onto/maven/TimeOntologie/1.0");
        for f in [
            "TimeOntologie-1.0.owl",
            "TimeOntologie-1.0.owl.sha1",
            "TimeOntologie-1.0.pom",
            "TimeOntologie-1.0.pom.sha1",
        ] {
            assert!(dir.join(f).is_file(), "{f}");
        }
        assert_eq!(a.pom.unwrap().coordinate.artifact_id, "TimeOntologie");
    }

    #[test]
    fn install_errors() {
        let proj = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(proj.path().join("repo"));
        assert!(matches!(
            install(proj.path(), &local),
            Err(RepositoryError::MissingPom(_))
        ));
        project(proj.path(), false);
        assert!(matches!(
            install(proj.path(), &local),
            Err(RepositoryError::MissingOntologyFile(_))
        ));
    }

    #[test]
    fn deploy_then_fetch_round_trip() {
        let proj = tempfile::tempdir().unwrap();
        project(proj.path(), true);
        let mem = Arc::new(MemoryTransport::default());
        let remote = RemoteRepository::new(decl("r", "http://r.test/repo"), mem);
        let receipt = deploy(proj.path(), &remote).unwrap();
        assert_eq!(receipt.urls.len(), 4);
        assert!(receipt.urls[1].ends_with("TimeOntologie-1.0.owl.sha1"));
        let repo = tempfile::tempdir().unwrap();
        let local = LocalRepository::new(repo.path());
        let c = ArtifactCoordinate::new("de.onto.maven", "TimeOntologie", "1.0").unwrap();
        let got = fetch(&c, &[remote], &local).unwrap();
        assert_eq!(fs::read(got.file).unwrap(), b"Ontology()\n");
        assert!(got.pom.is_some());
    }

    #[test]
    fn deploy_rejected() {
        struct Forbidden;
        impl Transport for Forbidden {
            fn get(&self, _: &str) -> Result<Option<Vec<u8>>, TransportError> {
                Ok(None)
            }
            fn put(&self, _: &str, _: &[u8]) -> Result<u16, TransportError> {
                Ok(403)
            }
        }
        let proj = tempfile::tempdir().unwrap();
        project(proj.path(), true);
        let remote = RemoteRepository::new(decl("r", "http://r.test"), Arc::new(Forbidden));
        assert!(matches!(
            deploy(proj.path(), &remote),
            Err(RepositoryError::RemoteRejected { status: 403, .. })
        ));
    }
}
