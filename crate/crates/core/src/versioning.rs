//! Status and semantic diff between a working-copy ontology and a version
//! stored in a repository.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::coordinate::ArtifactCoordinate;
use crate::iri::Iri;
use crate::ontology::{axiom_to_string, parse_ontology_lenient, signature, Axiom, EntityKind, Ontology, ParseError};
use crate::reasoner::{classify_ontology, Subsumer, SubsumptionSet};
use crate::repository::{fetch, LocalRepository, RemoteRepository, RepositoryError};

#[derive(Debug, Error)]
pub enum VersionError {
    #[error(transparent)]
    Repository(#[from] RepositoryError),
    #[error("{path}: {source}")]
    Syntax {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Identical,
    Changed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Identical => "identical",
            Verdict::Changed => "changed",
        }
    }

    /// The console message for this verdict.
    pub fn message(self) -> &'static str {
        match self {
            Verdict::Identical => "ontology is up-to-date",
            Verdict::Changed => "ontology changed",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionStatus {
    pub verdict: Verdict,
    pub compared_version: ArtifactCoordinate,
}

/// A parsed document with the axioms lenient parsing had to drop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedOntology {
    pub path: PathBuf,
    pub ontology: Ontology,
    pub skipped: Vec<String>,
}

pub fn load_ontology(path: &Path) -> Result<LoadedOntology, VersionError> {
    let text = fs::read_to_string(path).map_err(|source| VersionError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed = parse_ontology_lenient(&text).map_err(|source| VersionError::Syntax {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(LoadedOntology {
        path: path.to_path_buf(),
        ontology: parsed.ontology,
        skipped: parsed
            .skipped
            .iter()
            .map(|s| format!("{} at {}:{}", s.construct, s.line, s.column))
            .collect(),
    })
}

/// Fetches `coord` (through the local cache) and parses it.
pub fn load_repository_version(
    coord: &ArtifactCoordinate,
    repos: &[RemoteRepository],
    local: &LocalRepository,
) -> Result<LoadedOntology, VersionError> {
    let artifact = fetch(coord, repos, local)?;
    load_ontology(&artifact.file)
}

fn multiset(axioms: &[Axiom]) -> BTreeMap<&Axiom, usize> {
    let mut m = BTreeMap::new();
    for ax in axioms {
        *m.entry(ax).or_insert(0) += 1;
    }
    m
}

/// Identical iff the axiom multisets and the import sets agree.
pub fn compare(working: &Ontology, base: &Ontology) -> Verdict {
    let imports = |o: &Ontology| o.imports.iter().cloned().collect::<BTreeSet<_>>();
    if multiset(&working.axioms) == multiset(&base.axioms) && imports(working) == imports(base) {
        Verdict::Identical
    } else {
        Verdict::Changed
    }
}

pub fn status(
    working: &Path,
    coord: &ArtifactCoordinate,
    repos: &[RemoteRepository],
    local: &LocalRepository,
) -> Result<VersionStatus, VersionError> {
    let w = load_ontology(working)?;
    let base = load_repository_version(coord, repos, local)?;
    Ok(VersionStatus {
        verdict: compare(&w.ontology, &base.ontology),
        compared_version: coord.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NoteKind {
    DataPropertyDomain,
    EquivalentClasses,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    SubClassOf,
}

impl NoteKind {
    pub fn label(self) -> &'static str {
        match self {
            NoteKind::DataPropertyDomain => "DataProperty (Domain)",
            NoteKind::EquivalentClasses => "EquivalentClasses",
            NoteKind::ObjectPropertyDomain => "ObjectProperty (Domain)",
            NoteKind::ObjectPropertyRange => "ObjectProperty (Range)",
            NoteKind::SubClassOf => "SubClassOf",
        }
    }
}

/// `entity` is a changed class; `related` is the property or class of an
/// unchanged axiom that refers to it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyNote {
    pub entity: Iri,
    pub axiom_kind: NoteKind,
    pub related: Iri,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub ontology_file: PathBuf,
    /// Present in the working copy, absent from the base.
    pub added_axioms: Vec<Axiom>,
    pub removed_axioms: Vec<Axiom>,
    pub added_entailments: SubsumptionSet,
    pub removed_entailments: SubsumptionSet,
    pub dependency_notes: Vec<DependencyNote>,
    /// Skipped constructs and reasoner limits; these parts were not diffed
    /// semantically.
    pub warnings: Vec<String>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.added_axioms.is_empty()
            && self.removed_axioms.is_empty()
            && self.added_entailments.is_empty()
            && self.removed_entailments.is_empty()
    }
}

fn multiset_minus(a: &[Axiom], b: &[Axiom]) -> Vec<Axiom> {
    let mut remaining = multiset(b);
    let mut out = Vec::new();
    for ax in a {
        match remaining.get_mut(ax) {
            Some(n) if *n > 0 => *n -= 1,
            _ => out.push(ax.clone()),
        }
    }
    out.sort();
    out
}

/// Syntactic delta by axiom multiset, semantic delta by atomic subsumptions
/// over the union of both class signatures.
pub fn semantic_diff(working: &Ontology, base: &Ontology) -> DiffReport {
    let mut report = DiffReport {
        added_axioms: multiset_minus(&working.axioms, &base.axioms),
        removed_axioms: multiset_minus(&base.axioms, &working.axioms),
        ..Default::default()
    };
    if report.added_axioms.is_empty() && report.removed_axioms.is_empty() {
        return report;
    }
    let mut classes = signature(working).classes;
    classes.extend(signature(base).classes);
    let (w, b) = std::thread::scope(|s| {
        let w = s.spawn(|| classify_ontology(working));
        let b = classify_ontology(base);
        (w.join().expect("classification thread panicked"), b)
    });
    match (w, b) {
        (Ok(w), Ok(b)) => {
            let ws = SubsumptionSet::compute(&w, &classes);
            let bs = SubsumptionSet::compute(&b, &classes);
            report.added_entailments = ws.difference(&bs);
            report.removed_entailments = bs.difference(&ws);
        }
        (Err(e), _) | (_, Err(e)) => report.warnings.push(format!("semantic difference not computed: {e}")),
    }
    report
}

/// Fills `dependency_notes`: for each class in a changed axiom, the
/// unchanged domain, range and subclass axioms of either version that
/// mention it.
pub fn dependency_analysis(mut report: DiffReport, working: &Ontology, base: &Ontology) -> DiffReport {
    let changed: BTreeSet<&Axiom> = report.added_axioms.iter().chain(&report.removed_axioms).collect();
    let classes: BTreeSet<Iri> = changed
        .iter()
        .flat_map(|ax| ax.entities())
        .filter(|(k, _)| *k == EntityKind::Class)
        .map(|(_, i)| i.clone())
        .collect();
    let mut notes = BTreeSet::new();
    for ax in working.axioms.iter().chain(&base.axioms) {
        if changed.contains(ax) {
            continue;
        }
        match ax {
            Axiom::DataPropertyDomain { property, domain } => {
                for c in domain.named_classes() {
                    notes.insert((c.clone(), NoteKind::DataPropertyDomain, property.clone()));
                }
            }
            Axiom::ObjectPropertyDomain { property, domain } => {
                for c in domain.named_classes() {
                    notes.insert((c.clone(), NoteKind::ObjectPropertyDomain, property.clone()));
                }
            }
            Axiom::ObjectPropertyRange { property, range } => {
                for c in range.named_classes() {
                    notes.insert((c.clone(), NoteKind::ObjectPropertyRange, property.clone()));
                }
            }
            Axiom::SubClassOf { sub: a, sup: b } | Axiom::EquivalentClasses(a, b) => {
                let kind = if matches!(ax, Axiom::SubClassOf { .. }) {
                    NoteKind::SubClassOf
                } else {
                    NoteKind::EquivalentClasses
                };
                let (left, right) = (a.named_classes(), b.named_classes());
                for x in &left {
                    for y in &right {
                        if x != y {
                            notes.insert(((*x).clone(), kind, (*y).clone()));
                            notes.insert(((*y).clone(), kind, (*x).clone()));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    report.dependency_notes = notes
        .into_iter()
        .filter(|(c, _, _)| classes.contains(c))
        .map(|(entity, axiom_kind, related)| DependencyNote {
            entity,
            axiom_kind,
            related,
        })
        .collect();
    report
}

/// Diff plus dependency analysis, with skipped constructs of either side
/// flagged as warnings.
pub fn diff(working: &LoadedOntology, base: &LoadedOntology) -> DiffReport {
    let mut report = semantic_diff(&working.ontology, &base.ontology);
    report.ontology_file = working.path.clone();
    for (side, loaded) in [("working copy", working), ("base version", base)] {
        for s in &loaded.skipped {
            report.warnings.push(format!("{side}: {s} skipped, not diffed"));
        }
    }
    dependency_analysis(report, &working.ontology, &base.ontology)
}

/// Logical axioms first, then declarations, each sorted by their text.
fn sorted_lines(axioms: &[Axiom]) -> Vec<String> {
    let mut keyed: Vec<(bool, String)> = axioms
        .iter()
        .map(|ax| (matches!(ax, Axiom::Declaration(..)), axiom_to_string(ax)))
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, s)| s).collect()
}

fn subsumption_lines(set: &SubsumptionSet) -> Vec<String> {
    set.pairs
        .iter()
        .map(|(sub, sup)| format!("SubClassOf(<{sub}> {sup})"))
        .collect()
}

fn local_name(iri: &Iri) -> &str {
    let s = iri.as_str();
    let cut = s.rfind(['#', '/', ':']).map(|i| i + 1).unwrap_or(0);
    if cut < s.len() {
        &s[cut..]
    } else {
        s
    }
}

pub const DIFF_HEADER: &str = "-------------------------- DIFF INFORMATION --------------------";
pub const CHANGES_HEADER: &str = "================== ACTUAL CHANGES ==========================";
pub const SEMANTIC_HEADER: &str = "================== SEMANTIC CHANGES ========================";
pub const MORE_INFO_HEADER: &str = "--------- MORE INFO --------------------------------";
const SECTION_END: &str = "=======================================================================";
const FOOTER: &str = "--------------------------------------------------------------------";

/// Text form of a report. Related entities print by local name unless two
/// of them share one.
pub fn render_diff(report: &DiffReport) -> String {
    let mut out = String::new();
    let mut line = |s: &str| {
        out.push_str(s);
        out.push('\n');
    };
    line(DIFF_HEADER);
    line(&format!("Ontology File : {}", report.ontology_file.display()));
    for w in &report.warnings {
        line(&format!("Warning: {w}"));
    }
    line(CHANGES_HEADER);
    if report.added_axioms.is_empty() && report.removed_axioms.is_empty() {
        line("no changes");
    }
    if !report.added_axioms.is_empty() {
        line("Axioms present only in the working copy:");
        sorted_lines(&report.added_axioms).iter().for_each(|s| line(s));
    }
    if !report.removed_axioms.is_empty() {
        line("Axioms present only in the repository version:");
        sorted_lines(&report.removed_axioms).iter().for_each(|s| line(s));
    }
    line(SECTION_END);
    if !report.added_entailments.is_empty() || !report.removed_entailments.is_empty() {
        line(SEMANTIC_HEADER);
        if !report.added_entailments.is_empty() {
            line("Entailed only by the working copy:");
            subsumption_lines(&report.added_entailments)
                .iter()
                .for_each(|s| line(s));
        }
        if !report.removed_entailments.is_empty() {
            line("Entailed only by the repository version:");
            subsumption_lines(&report.removed_entailments)
                .iter()
                .for_each(|s| line(s));
        }
        line(SECTION_END);
    }
    line(MORE_INFO_HEADER);
    if report.dependency_notes.is_empty() {
        line("The changed classes have no dependent axioms.");
    } else {
        line("The changed classes are referenced by these axioms:");
        let mut by_name: BTreeMap<&str, BTreeSet<&Iri>> = BTreeMap::new();
        for n in &report.dependency_notes {
            by_name.entry(local_name(&n.related)).or_default().insert(&n.related);
        }
        let mut notes: Vec<&DependencyNote> = report.dependency_notes.iter().collect();
        notes.sort_by(|a, b| {
            (&a.entity, a.axiom_kind.label(), &a.related).cmp(&(&b.entity, b.axiom_kind.label(), &b.related))
        });
        let mut current: Option<&Iri> = None;
        for n in notes {
            if current != Some(&n.entity) {
                line(&format!("<{}>", n.entity));
                current = Some(&n.entity);
            }
            let name = local_name(&n.related);
            let shown = if by_name[name].len() == 1 {
                name.to_string()
            } else {
                format!("<{}>", n.related)
            };
            line(&format!("{shown} <------ {}", n.axiom_kind.label()));
        }
    }
    line(FOOTER);
    out
}

/// Lines of `render_diff` output that carry content: axioms and notes.
pub fn content_lines(rendered: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut in_body = false;
    for l in rendered.lines() {
        if l == CHANGES_HEADER || l == SEMANTIC_HEADER || l == MORE_INFO_HEADER {
            in_body = true;
            continue;
        }
        if l == SECTION_END || l == FOOTER {
            in_body = false;
            continue;
        }
        let prose =
            l.ends_with(':') || (l.starts_with('<') && l.ends_with('>')) || l == "no changes" || l.ends_with('.');
        if in_body && !prose {
            out.push(l);
        }
    }
    out
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_diff(self))
    }
}

/// One-line summary for logs.
pub fn summary(report: &DiffReport) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{} added, {} removed axioms; {} gained, {} lost entailments",
        report.added_axioms.len(),
        report.removed_axioms.len(),
        report.added_entailments.len(),
        report.removed_entailments.len()
    );
    s
}

/// `(A, ⊥)` pairs of a subsumption set.
pub fn unsatisfiable_classes(set: &SubsumptionSet) -> BTreeSet<&Iri> {
    set.pairs
        .iter()
        .filter(|(_, s)| *s == Subsumer::Nothing)
        .map(|(c, _)| c)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    fn o(text: &str) -> Ontology {
        parse_ontology(text).unwrap()
    }

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn identity_is_empty() {
        let x = o("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>))");
        let r = semantic_diff(&x, &x);
        assert!(r.is_empty());
        assert!(render_diff(&r).contains("no changes"));
    }

    #[test]
    fn reordering_is_identical() {
        let a = o("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>))");
        let b = o("Ontology(\n  SubClassOf(<a:B>   <a:C>)\n SubClassOf(<a:A> <a:B>))");
        assert_eq!(compare(&a, &b), Verdict::Identical);
        let c = o("Ontology(SubClassOf(<a:A> <a:B>))");
        assert_eq!(compare(&a, &c), Verdict::Changed);
        let d = o("Ontology(Import(<a:x>) SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>))");
        assert_eq!(compare(&a, &d), Verdict::Changed);
    }

    #[test]
    fn duplicates_count() {
        let a = o("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:A> <a:B>))");
        let b = o("Ontology(SubClassOf(<a:A> <a:B>))");
        assert_eq!(compare(&a, &b), Verdict::Changed);
        let r = semantic_diff(&a, &b);
        assert_eq!(r.added_axioms.len(), 1);
        assert!(r.added_entailments.is_empty());
    }

    #[test]
    fn transitive_entailments_appear() {
        let base = o("Ontology(SubClassOf(<a:A> <a:B>))");
        let working = o("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>))");
        let r = semantic_diff(&working, &base);
        assert_eq!(r.added_axioms.len(), 1);
        assert!(r.removed_axioms.is_empty());
        for (x, y) in [("a:A", "a:C"), ("a:B", "a:C")] {
            assert!(r.added_entailments.pairs.contains(&(iri(x), Subsumer::Class(iri(y)))));
        }
        let swapped = semantic_diff(&base, &working);
        assert_eq!(swapped.removed_entailments, r.added_entailments);
        assert_eq!(swapped.removed_axioms, r.added_axioms);
    }

    #[test]
    fn unsatisfiability_is_reported() {
        let base = o("Ontology(Declaration(Class(<a:A>)))");
        let working = o("Ontology(Declaration(Class(<a:A>)) SubClassOf(<a:A> owl:Nothing))");
        let r = semantic_diff(&working, &base);
        assert_eq!(unsatisfiable_classes(&r.added_entailments), [&iri("a:A")].into());
        assert!(render_diff(&r).contains("SubClassOf(<a:A> owl:Nothing)"));
    }

    #[test]
    fn notes_for_domain_and_range() {
        let base = o("Ontology(DataPropertyDomain(<c:currency> <c:Money>) ObjectPropertyRange(<c:cost> <c:Money>))");
        let working = o(
            "Ontology(DataPropertyDomain(<c:currency> <c:Money>) ObjectPropertyRange(<c:cost> <c:Money>) \
                         Declaration(Class(<c:Money>)))",
        );
        let r = dependency_analysis(semantic_diff(&working, &base), &working, &base);
        let kinds: Vec<_> = r
            .dependency_notes
            .iter()
            .map(|n| (n.axiom_kind, local_name(&n.related)))
            .collect();
        assert_eq!(
            kinds,
            [
                (NoteKind::DataPropertyDomain, "currency"),
                (NoteKind::ObjectPropertyRange, "cost")
            ]
        );
        let text = render_diff(&r);
        assert_eq!(
            content_lines(&text),
            [
                "Declaration(Class(<c:Money>))",
                "currency <------ DataProperty (Domain)",
                "cost <------ ObjectProperty (Range)"
            ]
        );
    }

    #[test]
    fn unreferenced_change_has_no_notes() {
        let base = o("Ontology(SubClassOf(<a:X> <a:Y>))");
        let working = o("Ontology(SubClassOf(<a:X> <a:Y>) Declaration(Class(<a:Lonely>)))");
        let r = dependency_analysis(semantic_diff(&working, &base), &working, &base);
        assert!(r.dependency_notes.is_empty());
    }

    #[test]
    fn clashing_local_names_print_in_full() {
        let base = o("Ontology(ObjectPropertyRange(<a:p> <a:M>) ObjectPropertyRange(<b:p> <a:M>))");
        let working = o(
            "Ontology(ObjectPropertyRange(<a:p> <a:M>) ObjectPropertyRange(<b:p> <a:M>) SubClassOf(<a:M> owl:Thing))",
        );
        let r = dependency_analysis(semantic_diff(&working, &base), &working, &base);
        let text = render_diff(&r);
        assert!(text.contains("<a:p> <------ ObjectProperty (Range)"));
        assert!(text.contains("<b:p> <------ ObjectProperty (Range)"));
    }

    #[test]
    fn declarations_render_after_logical_axioms() {
        let r = DiffReport {
            added_axioms: o("Ontology(Declaration(Class(<a:M>)) SubClassOf(<a:M> owl:Thing))").axioms,
            ..Default::default()
        };
        assert_eq!(
            content_lines(&render_diff(&r)),
            ["SubClassOf(<a:M> owl:Thing)", "Declaration(Class(<a:M>))"]
        );
    }
}
