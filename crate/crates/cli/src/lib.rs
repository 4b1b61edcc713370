//! `ontomvn` command dispatch. The binary is a thin wrapper so tests can
//! drive commands in-process with their own transports.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand};

use ontomvn_core::ontology::parse_ontology_lenient;
use ontomvn_core::pom::{serialize_pom, ParsedPom, PomError, POM_FILE};
use ontomvn_core::reporting::{site, ReportKind, SiteOptions, SITE_DIR};
use ontomvn_core::repository::{
    deploy, install, serve_with, write_atomic, HttpTransport, LocalRepository, OfflineTransport, RemoteRepository,
    ServeOptions, Transport,
};
use ontomvn_core::resolver::{
    emit_catalog, Catalog, ImportRegistry, ResolutionResult, Resolver, CATALOG_FILE, REGISTRY_FILE,
};
use ontomvn_core::test_runner::{cases_from_pom, gate_cases, run_cases, ComplianceMode, TestContext, TestReport};
use ontomvn_core::versioning::{self, compare, load_ontology, load_repository_version, render_diff};
use ontomvn_core::{ArtifactCoordinate, ProjectDescriptor, RepositoryDecl};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ontomvn", version, about = "Lifecycle management for ontology artifacts")]
pub struct Cli {
    /// Project directory holding pom.xml.
    #[arg(short = 'C', long, global = true, default_value = ".")]
    pub project_dir: PathBuf,
    /// Local repository root.
    #[arg(long, env = "ONTOMVN_REPO", global = true)]
    pub local_repo: Option<PathBuf>,
    /// Never touch the network.
    #[arg(long, global = true)]
    pub offline: bool,
    /// Extra remote repository, tried after those in pom.xml.
    #[arg(long = "repo", value_name = "ID=URL", global = true)]
    pub repos: Vec<String>,
    /// More log output; repeat for debug.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scaffold a new project.
    Init {
        /// groupId:artifactId:version
        coordinate: String,
        /// Target directory; defaults to the project directory.
        dir: Option<PathBuf>,
    },
    /// Resolve dependencies and imports and write catalog.xml.
    Resolve,
    /// Map the ontology's imports to artifacts and cache them.
    Import {
        /// Ontology file; overrides the owlimport configuration.
        #[arg(long)]
        owlfile: Option<PathBuf>,
        /// Write catalog.xml (default true).
        #[arg(long)]
        local: Option<bool>,
    },
    /// Compare the working ontology with a repository version.
    Status {
        /// Version to compare with; defaults to the project's own.
        #[arg(long)]
        version: Option<String>,
        /// Exit 1 when changed.
        #[arg(long)]
        check: bool,
    },
    /// Syntactic and semantic difference to a repository version.
    Diff {
        #[arg(long)]
        version: Option<String>,
        /// Compare with this file instead of a repository version.
        #[arg(long)]
        base_file: Option<PathBuf>,
        /// Exit 1 when there are changes.
        #[arg(long)]
        check: bool,
    },
    /// Run the test cases declared in pom.xml.
    Test {
        /// strict or lax, for syntax tests.
        #[arg(long)]
        compliancemode: Option<String>,
    },
    /// Generate documentation into target/site.
    Site {
        /// Comma-separated subset of ontologyreport, technicalreport, visualizer.
        #[arg(long, value_delimiter = ',')]
        reports: Option<Vec<String>>,
        /// Number of concept groups in the visualization.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        groups: Option<u64>,
    },
    /// Check and copy the artifact into the local repository.
    Install,
    /// Install, then upload to a remote repository.
    Deploy {
        /// Repository id; defaults to the first configured one.
        #[arg(long)]
        repository: Option<String>,
    },
    /// Serve a directory as a repository over HTTP.
    Serve {
        root: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        #[arg(long)]
        read_only: bool,
    },
    /// Delete target/.
    Clean,
}

/// A usage or configuration problem; exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Transports used for remote access, chosen by `--offline`.
pub struct Context {
    pub online: Arc<dyn Transport>,
    pub offline: Arc<dyn Transport>,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            online: Arc::new(HttpTransport::new()),
            offline: Arc::new(OfflineTransport),
        }
    }
}

struct Env<'a> {
    cli: &'a Cli,
    transport: Arc<dyn Transport>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Env<'_> {
    fn dir(&self) -> &Path {
        &self.cli.project_dir
    }

    fn local(&self) -> LocalRepository {
        LocalRepository::new(
            self.cli
                .local_repo
                .clone()
                .unwrap_or_else(LocalRepository::default_root),
        )
    }

    fn project(&mut self) -> Result<ProjectDescriptor> {
        let path = self.dir().join(POM_FILE);
        if !path.exists() {
            return Err(config(format!("{} not found", path.display())));
        }
        let ParsedPom { project, warnings } = ProjectDescriptor::load(self.dir())?;
        for w in warnings {
            writeln!(self.err, "warning: {}: {w}", path.display())?;
        }
        Ok(project)
    }

    fn repos(&self, p: &ProjectDescriptor) -> Result<Vec<RemoteRepository>> {
        let mut decls = p.effective_repositories();
        for spec in &self.cli.repos {
            let (id, url) = spec
                .split_once('=')
                .filter(|(id, url)| !id.is_empty() && !url.is_empty())
                .ok_or_else(|| config(format!("--repo expects ID=URL, got {spec:?}")))?;
            decls.push(RepositoryDecl {
                id: id.to_string(),
                name: None,
                url: url.to_string(),
                snapshots_enabled: true,
            });
        }
        Ok(decls
            .into_iter()
            .map(|d| RemoteRepository::new(d, self.transport.clone()))
            .collect())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, ctx: &Context, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    run_cli(&cli, ctx, out, err)
}

pub fn run_cli(cli: &Cli, ctx: &Context, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let transport = if cli.offline {
        ctx.offline.clone()
    } else {
        ctx.online.clone()
    };
    let mut env = Env {
        cli,
        transport,
        out,
        err,
    };
    match dispatch(&mut env) {
        Ok(code) => code,
        Err(e) => {
            let usage = e.downcast_ref::<ConfigError>().is_some() || e.downcast_ref::<PomError>().is_some();
            let _ = writeln!(env.err, "error: {e:#}");
            if usage {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn dispatch(env: &mut Env<'_>) -> Result<i32> {
    match &env.cli.command {
        Command::Init { coordinate, dir } => init(env, coordinate, dir.clone()),
        Command::Resolve => resolve_cmd(env),
        Command::Import { owlfile, local } => import_cmd(env, owlfile.clone(), *local),
        Command::Status { version, check } => status_cmd(env, version.as_deref(), *check),
        Command::Diff {
            version,
            base_file,
            check,
        } => diff_cmd(env, version.as_deref(), base_file.as_deref(), *check),
        Command::Test { compliancemode } => test_cmd(env, compliancemode.as_deref()),
        Command::Site { reports, groups } => site_cmd(env, reports.as_deref(), *groups),
        Command::Install => install_cmd(env),
        Command::Deploy { repository } => deploy_cmd(env, repository.as_deref()),
        Command::Serve { root, bind, read_only } => serve_cmd(env, root, bind, *read_only),
        Command::Clean => clean_cmd(env),
    }
}

fn init(env: &mut Env<'_>, coordinate: &str, dir: Option<PathBuf>) -> Result<i32> {
    let coord: ArtifactCoordinate = coordinate
        .parse()
        .map_err(|e| config(format!("invalid coordinate {coordinate:?}: {e}")))?;
    let dir = dir.unwrap_or_else(|| env.dir().to_path_buf());
    if dir.exists() && fs::read_dir(&dir)?.next().is_some() {
        return Err(config(format!("{} is not empty", dir.display())));
    }
    let p = ProjectDescriptor::new(coord);
    let ontology = dir.join(p.ontology_file());
    write_atomic(&dir.join(POM_FILE), serialize_pom(&p).as_bytes())?;
    write_atomic(&ontology, b"Ontology()\n")?;
    write_atomic(&dir.join(REGISTRY_FILE), ImportRegistry::default().to_xml().as_bytes())?;
    writeln!(env.out, "created {} in {}", p.coordinate, dir.display())?;
    Ok(EXIT_OK)
}

/// Resolves the project, records new direct downloads in the registry and
/// optionally writes the catalog.
fn resolve_project(
    env: &mut Env<'_>,
    p: &ProjectDescriptor,
    owlfile: Option<&Path>,
    write_catalog: bool,
) -> Result<ResolutionResult> {
    let file = env
        .dir()
        .join(owlfile.map(Path::to_path_buf).unwrap_or_else(|| p.ontology_file()));
    let root = if file.exists() {
        let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
        let parsed = parse_ontology_lenient(&text).with_context(|| format!("parsing {}", file.display()))?;
        Some(parsed.ontology)
    } else {
        writeln!(
            env.err,
            "warning: {} not found; resolving POM dependencies only",
            file.display()
        )?;
        None
    };
    let registry_path = env.dir().join(REGISTRY_FILE);
    let mut registry = ImportRegistry::load_or_default(&registry_path)?;
    let repos = env.repos(p)?;
    let local = env.local();
    let result = Resolver {
        repos: &repos,
        local: &local,
        registry: &registry,
        transport: env.transport.as_ref(),
    }
    .resolve(p, root.as_ref())?;
    if !result.registrations.is_empty() {
        for (iri, c) in &result.registrations {
            registry.insert(iri, c.clone());
        }
        write_atomic(&registry_path, registry.to_xml().as_bytes())?;
    }
    if write_catalog {
        emit_catalog(&result, &env.dir().join(CATALOG_FILE))?;
    }
    for c in &result.conflicts {
        let newer = c.newer_losers();
        if !newer.is_empty() {
            writeln!(
                env.err,
                "warning: {} resolved to {} although newer {} was requested further away",
                c.key,
                c.winner,
                newer.join(", ")
            )?;
        }
    }
    Ok(result)
}

fn print_resolution(env: &mut Env<'_>, r: &ResolutionResult) -> Result<()> {
    writeln!(env.out, "{}", r.root)?;
    for n in r.ordered_nodes() {
        writeln!(env.out, "{}{} ({})", "  ".repeat(n.depth), n.coordinate, n.edge_kind)?;
    }
    for c in &r.conflicts {
        let losers: Vec<String> = c.losers.iter().map(|(v, d)| format!("{v} (depth {d})")).collect();
        writeln!(
            env.out,
            "conflict {}: selected {} (depth {}), omitted {}",
            c.key,
            c.winner,
            c.winner_depth,
            losers.join(", ")
        )?;
    }
    for cycle in &r.cycles {
        let path: Vec<String> = cycle.iter().map(|c| c.to_string()).collect();
        writeln!(env.out, "cycle: {}", path.join(" -> "))?;
    }
    Ok(())
}

fn resolve_cmd(env: &mut Env<'_>) -> Result<i32> {
    let p = env.project()?;
    let r = resolve_project(env, &p, None, true)?;
    print_resolution(env, &r)?;
    Ok(EXIT_OK)
}

fn import_cmd(env: &mut Env<'_>, owlfile: Option<PathBuf>, local: Option<bool>) -> Result<i32> {
    let p = env.project()?;
    let local = match local {
        Some(l) => l,
        None => match p.goal_config("owlimport", "local") {
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| config(format!("owlimport <local> must be true or false, got {v:?}")))?,
            None => true,
        },
    };
    let r = resolve_project(env, &p, owlfile.as_deref(), local)?;
    for edge in &r.imports {
        let file = r
            .node(&edge.target.key())
            .map(|n| n.file.display().to_string())
            .unwrap_or_default();
        writeln!(env.out, "{} -> {} ({file})", edge.iri, edge.target)?;
    }
    if local {
        writeln!(env.out, "wrote {}", env.dir().join(CATALOG_FILE).display())?;
    }
    Ok(EXIT_OK)
}

fn compared_coordinate(p: &ProjectDescriptor, version: Option<&str>) -> Result<ArtifactCoordinate> {
    match version {
        Some(v) => p
            .coordinate
            .with_version(v)
            .map_err(|e| config(format!("invalid version {v:?}: {e}"))),
        None => Ok(p.coordinate.clone()),
    }
}

fn status_cmd(env: &mut Env<'_>, version: Option<&str>, check: bool) -> Result<i32> {
    let p = env.project()?;
    let coord = compared_coordinate(&p, version)?;
    let working = load_ontology(&env.dir().join(p.ontology_file()))?;
    let base = load_repository_version(&coord, &env.repos(&p)?, &env.local())?;
    let verdict = compare(&working.ontology, &base.ontology);
    writeln!(env.out, "{} (compared with {coord})", verdict.message())?;
    Ok(if check && verdict == versioning::Verdict::Changed {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}

fn diff_cmd(env: &mut Env<'_>, version: Option<&str>, base_file: Option<&Path>, check: bool) -> Result<i32> {
    let p = env.project()?;
    let working = load_ontology(&env.dir().join(p.ontology_file()))?;
    let base = match base_file {
        Some(f) => load_ontology(f)?,
        None => load_repository_version(&compared_coordinate(&p, version)?, &env.repos(&p)?, &env.local())?,
    };
    let mut report = versioning::diff(&working, &base);
    report.ontology_file = p.ontology_file();
    let text = render_diff(&report);
    env.out.write_all(text.as_bytes())?;
    write_atomic(&env.dir().join("target/diff/diff.txt"), text.as_bytes())?;
    Ok(if check && !report.is_empty() {
        EXIT_FAILURE
    } else {
        EXIT_OK
    })
}

fn test_context_run(env: &mut Env<'_>, cases: &[ontomvn_core::test_runner::TestCase]) -> Result<TestReport> {
    let catalog = Catalog::load_or_default(&env.dir().join(CATALOG_FILE))?;
    let ctx = TestContext {
        project_dir: env.dir(),
        catalog: &catalog,
        transport: env.transport.as_ref(),
    };
    Ok(run_cases(cases, &ctx))
}

fn test_cmd(env: &mut Env<'_>, mode: Option<&str>) -> Result<i32> {
    let p = env.project()?;
    let mode: Option<ComplianceMode> = mode.map(str::parse).transpose().map_err(config)?;
    let cases = cases_from_pom(&p, mode).map_err(|e| config(e.to_string()))?;
    let report = test_context_run(env, &cases)?;
    let path = report.write_xml(env.dir())?;
    env.out.write_all(report.to_text().as_bytes())?;
    writeln!(env.out, "report: {}", path.display())?;
    Ok(if report.failed() { EXIT_FAILURE } else { EXIT_OK })
}

fn site_cmd(env: &mut Env<'_>, reports: Option<&[String]>, groups: Option<u64>) -> Result<i32> {
    let p = env.project()?;
    let reports = reports
        .map(|rs| {
            rs.iter()
                .map(|r| ReportKind::parse(r))
                .collect::<Result<BTreeSet<_>, _>>()
        })
        .transpose()
        .map_err(|e| config(e.to_string()))?;
    let options = SiteOptions {
        reports,
        groups: groups.map(|g| g as usize),
    };
    for f in site(env.dir(), &p, &options)? {
        writeln!(env.out, "wrote {}", f.display())?;
    }
    Ok(EXIT_OK)
}

/// Resolve, then the syntax and consistency gate. Returns false when the
/// gate failed.
fn prepare_release(env: &mut Env<'_>, p: &ProjectDescriptor) -> Result<bool> {
    resolve_project(env, p, None, true)?;
    let report = test_context_run(env, &gate_cases(p))?;
    if report.failed() {
        env.out.write_all(report.to_text().as_bytes())?;
        writeln!(env.err, "error: {} failed its checks; nothing installed", p.coordinate)?;
        return Ok(false);
    }
    Ok(true)
}

fn install_cmd(env: &mut Env<'_>) -> Result<i32> {
    let p = env.project()?;
    if !prepare_release(env, &p)? {
        return Ok(EXIT_FAILURE);
    }
    let local = env.local();
    let a = install(env.dir(), &local)?;
    writeln!(env.out, "installed {} to {}", a.coordinate, a.file.display())?;
    Ok(EXIT_OK)
}

fn deploy_cmd(env: &mut Env<'_>, id: Option<&str>) -> Result<i32> {
    let p = env.project()?;
    let repos = env.repos(&p)?;
    let target = match id {
        Some(id) => repos
            .iter()
            .find(|r| r.id() == id)
            .ok_or_else(|| config(format!("no repository with id {id:?}")))?,
        None => repos
            .first()
            .ok_or_else(|| config("no remote repository configured; add one to pom.xml or pass --repo"))?,
    }
    .clone();
    if !prepare_release(env, &p)? {
        return Ok(EXIT_FAILURE);
    }
    install(env.dir(), &env.local())?;
    let receipt = deploy(env.dir(), &target)?;
    for url in receipt.urls {
        writeln!(env.out, "uploaded {url}")?;
    }
    Ok(EXIT_OK)
}

fn serve_cmd(env: &mut Env<'_>, root: &Path, bind: &str, read_only: bool) -> Result<i32> {
    if !root.is_dir() {
        return Err(config(format!("{} is not a directory", root.display())));
    }
    let handle = serve_with(root, bind, ServeOptions { read_only })?;
    writeln!(env.out, "serving {} at {}", root.display(), handle.base_url())?;
    env.out.flush()?;
    loop {
        std::thread::park();
    }
}

fn clean_cmd(env: &mut Env<'_>) -> Result<i32> {
    let target = env.dir().join("target");
    if target.exists() {
        fs::remove_dir_all(&target).with_context(|| format!("removing {}", target.display()))?;
        writeln!(env.out, "removed {}", target.display())?;
    }
    Ok(EXIT_OK)
}

/// Site directory of a project, for callers that want to inspect output.
pub fn site_dir(project_dir: &Path) -> PathBuf {
    project_dir.join(SITE_DIR)
}
