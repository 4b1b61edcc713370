//! Syntax, consistency and entailment test cases declared in the POM.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::ontology::{check_profile_with_skipped, parse_ontology_lenient, LenientParse, Ontology};
use crate::pom::{PluginConfig, ProjectDescriptor};
use crate::reasoner::{consistent, entails_axioms, AxiomEntailment, Consistency};
use crate::repository::Transport;
use crate::resolver::{load_with_catalog, Catalog};
use crate::xml::XmlWriter;

pub const GOAL_SYNTAX: &str = "test-syntax";
pub const GOAL_CONSISTENCY: &str = "owltest";
pub const GOAL_ENTAILMENT: &str = "owlentailment";
pub const REPORT_DIR: &str = "target/test-reports";
pub const REPORT_FILE: &str = "report.xml";

#[derive(Debug, Error)]
pub enum TestError {
    #[error("plugin {plugin}, goal {goal}: {message}")]
    Config {
        plugin: String,
        goal: String,
        message: String,
    },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Syntax,
    Consistency,
    Entailment,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::Syntax => "syntax",
            TestKind::Consistency => "consistency",
            TestKind::Entailment => "entailment",
        }
    }

    pub fn for_goal(goal: &str) -> Option<TestKind> {
        match goal {
            GOAL_SYNTAX => Some(TestKind::Syntax),
            GOAL_CONSISTENCY => Some(TestKind::Consistency),
            GOAL_ENTAILMENT => Some(TestKind::Entailment),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplianceMode {
    #[default]
    Strict,
    Lax,
}

impl FromStr for ComplianceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "strict" => Ok(ComplianceMode::Strict),
            "lax" => Ok(ComplianceMode::Lax),
            other => Err(format!("compliancemode must be strict or lax, not {other:?}")),
        }
    }
}

impl fmt::Display for ComplianceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplianceMode::Strict => "strict",
            ComplianceMode::Lax => "lax",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestInputs {
    Single {
        owlfile: PathBuf,
    },
    Pair {
        premise_file: PathBuf,
        conclusion_file: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub kind: TestKind,
    pub inputs: TestInputs,
    pub compliancemode: ComplianceMode,
    /// Plugin artifactId and goal the case was declared with.
    pub origin: String,
}

impl TestCase {
    pub fn syntax(owlfile: impl Into<PathBuf>, mode: ComplianceMode) -> Self {
        TestCase {
            kind: TestKind::Syntax,
            inputs: TestInputs::Single {
                owlfile: owlfile.into(),
            },
            compliancemode: mode,
            origin: GOAL_SYNTAX.into(),
        }
    }

    pub fn consistency(owlfile: impl Into<PathBuf>) -> Self {
        TestCase {
            kind: TestKind::Consistency,
            inputs: TestInputs::Single {
                owlfile: owlfile.into(),
            },
            compliancemode: ComplianceMode::Strict,
            origin: GOAL_CONSISTENCY.into(),
        }
    }

    pub fn entailment(premise: impl Into<PathBuf>, conclusion: impl Into<PathBuf>) -> Self {
        TestCase {
            kind: TestKind::Entailment,
            inputs: TestInputs::Pair {
                premise_file: premise.into(),
                conclusion_file: conclusion.into(),
            },
            compliancemode: ComplianceMode::Strict,
            origin: GOAL_ENTAILMENT.into(),
        }
    }

    pub fn name(&self) -> String {
        match &self.inputs {
            TestInputs::Single { owlfile } => format!("{} {}", self.kind.as_str(), owlfile.display()),
            TestInputs::Pair {
                premise_file,
                conclusion_file,
            } => format!(
                "{} {} => {}",
                self.kind.as_str(),
                premise_file.display(),
                conclusion_file.display()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Syntax: the profile the document falls in.
    Profile(String),
    /// Syntax: the document does not parse.
    SyntaxError,
    Consistent,
    Inconsistent,
    Entailment,
    NoEntailment,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &str {
        match self {
            Verdict::Profile(p) => p,
            Verdict::SyntaxError => "syntax error",
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Entailment => "Entailment",
            Verdict::NoEntailment => "NoEntailment",
            Verdict::Unknown => "unknown",
        }
    }

    pub fn fits(&self, kind: TestKind) -> bool {
        match kind {
            TestKind::Syntax => matches!(self, Verdict::Profile(_) | Verdict::SyntaxError | Verdict::Unknown),
            TestKind::Consistency => matches!(self, Verdict::Consistent | Verdict::Inconsistent | Verdict::Unknown),
            TestKind::Entailment => matches!(self, Verdict::Entailment | Verdict::NoEntailment | Verdict::Unknown),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
    /// Undecided; does not fail the suite.
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Passed => "passed",
            Status::Failed => "failed",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestOutcome {
    pub case: TestCase,
    pub verdict: Verdict,
    pub status: Status,
    pub details: Vec<String>,
    pub duration: Duration,
}

/// Where imports come from while testing.
pub struct TestContext<'a> {
    pub project_dir: &'a Path,
    pub catalog: &'a Catalog,
    pub transport: &'a dyn Transport,
}

impl TestContext<'_> {
    fn path(&self, p: &Path) -> PathBuf {
        self.project_dir.join(p)
    }
}

enum Loaded {
    Parsed(LenientParse),
    Failed(Verdict, String),
}

fn load(ctx: &TestContext<'_>, file: &Path) -> Loaded {
    let path = ctx.path(file);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return Loaded::Failed(Verdict::Unknown, format!("{}: {e}", path.display())),
    };
    match parse_ontology_lenient(&text) {
        Ok(p) => Loaded::Parsed(p),
        Err(e) => Loaded::Failed(Verdict::SyntaxError, format!("{}: {e}", path.display())),
    }
}

fn skipped_notes(p: &LenientParse, file: &Path) -> Vec<String> {
    p.skipped
        .iter()
        .map(|s| {
            format!(
                "{}:{}:{}: {} is outside the EL subset",
                file.display(),
                s.line,
                s.column,
                s.construct
            )
        })
        .collect()
}

/// The document merged with its import closure. Returns the merged ontology
/// and whether any part of it was dropped.
fn with_imports(
    ctx: &TestContext<'_>,
    p: &LenientParse,
    file: &Path,
    details: &mut Vec<String>,
) -> Option<(Ontology, bool)> {
    details.extend(skipped_notes(p, file));
    let mut partial = !p.skipped.is_empty();
    match load_with_catalog(&p.ontology, ctx.catalog, ctx.project_dir, ctx.transport) {
        Ok(imports) => {
            for i in &imports {
                if !i.skipped.is_empty() {
                    partial = true;
                    details.push(format!(
                        "import {}: {} axioms outside the EL subset skipped",
                        i.iri,
                        i.skipped.len()
                    ));
                }
            }
            Some((p.ontology.merged_with(imports.iter().map(|i| &i.ontology)), partial))
        }
        Err(e) => {
            details.push(e.to_string());
            None
        }
    }
}

fn outcome(case: &TestCase, verdict: Verdict, status: Status, details: Vec<String>, start: Instant) -> TestOutcome {
    debug_assert!(verdict.fits(case.kind));
    TestOutcome {
        case: case.clone(),
        verdict,
        status,
        details,
        duration: start.elapsed(),
    }
}

fn single(case: &TestCase) -> &Path {
    match &case.inputs {
        TestInputs::Single { owlfile } => owlfile,
        TestInputs::Pair { premise_file, .. } => premise_file,
    }
}

/// Parse plus profile check. Strict mode fails on any construct outside the
/// subset; lax mode passes with warnings.
pub fn run_syntax(case: &TestCase, ctx: &TestContext<'_>) -> TestOutcome {
    let start = Instant::now();
    let file = single(case);
    let p = match load(ctx, file) {
        Loaded::Parsed(p) => p,
        Loaded::Failed(v, msg) => {
            let status = if v == Verdict::Unknown {
                Status::Unknown
            } else {
                Status::Failed
            };
            return outcome(case, v, status, vec![msg], start);
        }
    };
    let report = check_profile_with_skipped(&p.ontology, &p.skipped);
    let mut details: Vec<String> = report
        .violations
        .iter()
        .map(|v| format!("{}: axiom {}: {}", file.display(), v.axiom_index, v.reason))
        .collect();
    let status = if report.in_profile() {
        Status::Passed
    } else if case.compliancemode == ComplianceMode::Lax {
        details.iter_mut().for_each(|d| d.insert_str(0, "warning: "));
        Status::Passed
    } else {
        Status::Failed
    };
    outcome(
        case,
        Verdict::Profile(report.profile_name.to_string()),
        status,
        details,
        start,
    )
}

/// Consistency of the document together with its imports.
pub fn run_consistency(case: &TestCase, ctx: &TestContext<'_>) -> TestOutcome {
    let start = Instant::now();
    let file = single(case);
    let p = match load(ctx, file) {
        Loaded::Parsed(p) => p,
        Loaded::Failed(_, msg) => return outcome(case, Verdict::Unknown, Status::Unknown, vec![msg], start),
    };
    let mut details = Vec::new();
    let Some((merged, partial)) = with_imports(ctx, &p, file, &mut details) else {
        return outcome(case, Verdict::Unknown, Status::Unknown, details, start);
    };
    let v = consistent(&merged);
    details.extend(v.witnesses.iter().map(|w| w.to_string()));
    details.extend(v.reason.clone());
    // dropped axioms can only add contradictions
    let (verdict, status) = match v.status {
        Consistency::Inconsistent => (Verdict::Inconsistent, Status::Failed),
        Consistency::Consistent if !partial => (Verdict::Consistent, Status::Passed),
        _ => (Verdict::Unknown, Status::Unknown),
    };
    outcome(case, verdict, status, details, start)
}

/// Every conclusion axiom must follow from the premise and its imports.
pub fn run_entailment(case: &TestCase, ctx: &TestContext<'_>) -> TestOutcome {
    let start = Instant::now();
    let TestInputs::Pair {
        premise_file,
        conclusion_file,
    } = &case.inputs
    else {
        return outcome(
            case,
            Verdict::Unknown,
            Status::Unknown,
            vec!["entailment needs two files".into()],
            start,
        );
    };
    let (premise, conclusion) = match (load(ctx, premise_file), load(ctx, conclusion_file)) {
        (Loaded::Parsed(p), Loaded::Parsed(c)) => (p, c),
        (Loaded::Failed(_, m), _) | (_, Loaded::Failed(_, m)) => {
            return outcome(case, Verdict::Unknown, Status::Unknown, vec![m], start)
        }
    };
    let mut details = Vec::new();
    if !conclusion.skipped.is_empty() {
        details.extend(skipped_notes(&conclusion, conclusion_file));
        return outcome(case, Verdict::Unknown, Status::Unknown, details, start);
    }
    let Some((merged, partial)) = with_imports(ctx, &premise, premise_file, &mut details) else {
        return outcome(case, Verdict::Unknown, Status::Unknown, details, start);
    };
    let axiom_text = |i: usize| crate::ontology::axiom_to_string(&conclusion.ontology.axioms[i]);
    match entails_axioms(&merged, &conclusion.ontology) {
        AxiomEntailment::Entailed => outcome(case, Verdict::Entailment, Status::Passed, details, start),
        // what was dropped from the premise might have entailed it
        AxiomEntailment::NotEntailed { axiom_index } if partial => {
            details.push(format!("not entailed by the EL part: {}", axiom_text(axiom_index)));
            outcome(case, Verdict::Unknown, Status::Unknown, details, start)
        }
        AxiomEntailment::NotEntailed { axiom_index } => {
            details.push(format!("not entailed: {}", axiom_text(axiom_index)));
            outcome(case, Verdict::NoEntailment, Status::Failed, details, start)
        }
        AxiomEntailment::Unknown { axiom_index, reason } => {
            match axiom_index {
                Some(i) => details.push(format!("{}: {reason}", axiom_text(i))),
                None => details.push(reason),
            }
            outcome(case, Verdict::Unknown, Status::Unknown, details, start)
        }
    }
}

pub fn run_case(case: &TestCase, ctx: &TestContext<'_>) -> TestOutcome {
    match case.kind {
        TestKind::Syntax => run_syntax(case, ctx),
        TestKind::Consistency => run_consistency(case, ctx),
        TestKind::Entailment => run_entailment(case, ctx),
    }
}

/// Path values may be wrapped across lines in hand-edited POMs.
fn path_value(plugin: &PluginConfig, goal: &str, key: &str) -> Result<PathBuf, TestError> {
    let v = plugin.configuration.get(key).ok_or_else(|| TestError::Config {
        plugin: plugin.artifact_id.clone(),
        goal: goal.into(),
        message: format!("missing <{key}> in <configuration>"),
    })?;
    let joined: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    if joined.is_empty() {
        return Err(TestError::Config {
            plugin: plugin.artifact_id.clone(),
            goal: goal.into(),
            message: format!("empty <{key}>"),
        });
    }
    Ok(PathBuf::from(joined))
}

/// Test cases of all plugin executions, in declaration order. A mode given
/// as `mode_override` beats the POM's `compliancemode`.
pub fn cases_from_pom(
    p: &ProjectDescriptor,
    mode_override: Option<ComplianceMode>,
) -> Result<Vec<TestCase>, TestError> {
    let mut cases = Vec::new();
    for plugin in &p.plugins {
        for goal in &plugin.goals {
            let Some(kind) = TestKind::for_goal(goal) else { continue };
            let origin = format!("{}:{goal}", plugin.artifact_id);
            let mut case = match kind {
                TestKind::Syntax | TestKind::Consistency => TestCase {
                    kind,
                    inputs: TestInputs::Single {
                        owlfile: path_value(plugin, goal, "owlfile")?,
                    },
                    compliancemode: ComplianceMode::Strict,
                    origin,
                },
                TestKind::Entailment => TestCase {
                    kind,
                    inputs: TestInputs::Pair {
                        premise_file: path_value(plugin, goal, "premise_file")?,
                        conclusion_file: path_value(plugin, goal, "conclusion_file")?,
                    },
                    compliancemode: ComplianceMode::Strict,
                    origin,
                },
            };
            if kind == TestKind::Syntax {
                let pom_mode = match plugin.configuration.get("compliancemode") {
                    Some(m) => m.parse().map_err(|message| TestError::Config {
                        plugin: plugin.artifact_id.clone(),
                        goal: goal.clone(),
                        message,
                    })?,
                    None => ComplianceMode::default(),
                };
                case.compliancemode = mode_override.unwrap_or(pom_mode);
            }
            cases.push(case);
        }
    }
    Ok(cases)
}

/// Syntax and consistency of the project's own ontology; the checks that
/// gate install and deploy.
pub fn gate_cases(p: &ProjectDescriptor) -> Vec<TestCase> {
    let file = p.ontology_file();
    vec![
        TestCase::syntax(file.clone(), ComplianceMode::Strict),
        TestCase::consistency(file),
    ]
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TestReport {
    pub outcomes: Vec<TestOutcome>,
    pub summary: Summary,
}

impl TestReport {
    pub fn from_outcomes(outcomes: Vec<TestOutcome>) -> Self {
        let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
        let summary = Summary {
            total: outcomes.len(),
            passed: count(Status::Passed),
            failed: count(Status::Failed),
            unknown: count(Status::Unknown),
        };
        TestReport { outcomes, summary }
    }

    pub fn failed(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        format!(
            "Tests run: {}, Passed: {}, Failures: {}, Unknown: {}",
            s.total, s.passed, s.failed, s.unknown
        )
    }

    /// Human-readable listing, one line per case plus indented details.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&format!(
                "[{}] {} -> {} ({:.1} ms)\n",
                o.status.as_str(),
                o.case.name(),
                o.verdict,
                o.duration.as_secs_f64() * 1000.0
            ));
            for d in &o.details {
                out.push_str(&format!("    {d}\n"));
            }
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn to_xml(&self) -> String {
        let mut w = XmlWriter::new();
        let s = &self.summary;
        let (total, failures, unknown) = (s.total.to_string(), s.failed.to_string(), s.unknown.to_string());
        w.open_with(
            "testsuite",
            &[
                ("name", "ontomvn"),
                ("tests", &total),
                ("failures", &failures),
                ("unknown", &unknown),
            ],
        );
        for o in &self.outcomes {
            let name = o.case.name();
            let time = format!("{:.3}", o.duration.as_secs_f64());
            let mode = o.case.compliancemode.to_string();
            let mut attrs = vec![
                ("name", name.as_str()),
                ("kind", o.case.kind.as_str()),
                ("verdict", o.verdict.as_str()),
                ("status", o.status.as_str()),
                ("origin", o.case.origin.as_str()),
                ("time", time.as_str()),
            ];
            if o.case.kind == TestKind::Syntax {
                attrs.push(("compliancemode", mode.as_str()));
            }
            if o.details.is_empty() {
                w.empty("testcase", &attrs);
            } else {
                w.open_with("testcase", &attrs);
                for d in &o.details {
                    w.leaf("detail", d);
                }
                w.close();
            }
        }
        w.close();
        w.finish()
    }

    pub fn write_xml(&self, project_dir: &Path) -> Result<PathBuf, TestError> {
        let path = project_dir.join(REPORT_DIR).join(REPORT_FILE);
        crate::repository::write_atomic(&path, self.to_xml().as_bytes()).map_err(|e| TestError::Io {
            path: path.clone(),
            source: std::io::Error::other(e.to_string()),
        })?;
        Ok(path)
    }
}

/// Runs cases concurrently; outcomes keep the order of `cases`.
pub fn run_cases(cases: &[TestCase], ctx: &TestContext<'_>) -> TestReport {
    let outcomes = std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|c| s.spawn(move || run_case(c, ctx))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("test case panicked"))
            .collect()
    });
    TestReport::from_outcomes(outcomes)
}

pub fn run_suite(
    p: &ProjectDescriptor,
    ctx: &TestContext<'_>,
    mode_override: Option<ComplianceMode>,
) -> Result<TestReport, TestError> {
    Ok(run_cases(&cases_from_pom(p, mode_override)?, ctx))
}
