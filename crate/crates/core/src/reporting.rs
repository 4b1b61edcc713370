//! Static documentation: project page, ontology summary, technical report
//! and a DOT visualization with concept groups.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use thiserror::Error;

use crate::iri::Iri;
use crate::ontology::{
    axiom_to_string, check_profile_with_skipped, class_expression_to_string, parse_ontology_lenient, signature, Axiom,
    ClassExpression, Ontology, ParseError, SkippedConstruct,
};
use crate::pom::ProjectDescriptor;
use crate::reasoner::{classify_ontology, entails};
use crate::xml::XmlWriter;

pub const SITE_DIR: &str = "target/site";
pub const FORMAT_NAME: &str = "OWL 2 Functional-Style Syntax subset";
const XHTML_NS: &str = "http://www.w3.org/1999/xhtml";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Syntax {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("unknown report {0:?}; expected ontologyreport, technicalreport or visualizer")]
    UnknownReport(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReportKind {
    OntologyReport,
    TechnicalReport,
    Visualizer,
}

impl ReportKind {
    pub const ALL: [ReportKind; 3] = [
        ReportKind::OntologyReport,
        ReportKind::TechnicalReport,
        ReportKind::Visualizer,
    ];

    pub fn goal(self) -> &'static str {
        match self {
            ReportKind::OntologyReport => "ontologyreport",
            ReportKind::TechnicalReport => "technicalreport",
            ReportKind::Visualizer => "visualizer",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            ReportKind::OntologyReport => "ontology-report.html",
            ReportKind::TechnicalReport => "technical-report.html",
            ReportKind::Visualizer => "visualization.dot",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ReportKind::OntologyReport => "Ontology Report",
            ReportKind::TechnicalReport => "Technical Report",
            ReportKind::Visualizer => "Visualization",
        }
    }

    pub fn parse(s: &str) -> Result<ReportKind, ReportError> {
        ReportKind::ALL
            .into_iter()
            .find(|k| k.goal() == s.trim())
            .ok_or_else(|| ReportError::UnknownReport(s.to_string()))
    }
}

/// Reports selected by the POM's reporting section; all of them when the
/// POM has none.
pub fn pom_reports(p: &ProjectDescriptor) -> Result<BTreeSet<ReportKind>, ReportError> {
    if p.report_plugins.is_empty() {
        return Ok(ReportKind::ALL.into());
    }
    p.report_plugins
        .iter()
        .flat_map(|rp| rp.reports.iter())
        .map(|r| ReportKind::parse(r))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyStats {
    pub class_count: usize,
    pub object_property_count: usize,
    pub data_property_count: usize,
    pub individual_count: usize,
    pub axiom_count: usize,
    pub imports: Vec<Iri>,
    pub profile: String,
    pub description: Option<String>,
    /// Constructs outside the subset, which the counts do not include.
    pub skipped: usize,
}

pub fn ontology_stats(o: &Ontology, skipped: &[SkippedConstruct]) -> OntologyStats {
    let sig = signature(o);
    OntologyStats {
        class_count: sig.classes.len(),
        object_property_count: sig.object_properties.len(),
        data_property_count: sig.data_properties.len(),
        individual_count: sig.individuals.len(),
        axiom_count: o.axioms.len(),
        imports: o.imports.clone(),
        profile: check_profile_with_skipped(o, skipped).profile_name.to_string(),
        description: o.description.clone(),
        skipped: skipped.len(),
    }
}

fn local_name(iri: &Iri) -> &str {
    let s = iri.as_str();
    match s.rfind(['#', '/', ':']) {
        Some(i) if i + 1 < s.len() => &s[i + 1..],
        _ => s,
    }
}

/// XHTML page skeleton with the site menu.
struct Page {
    w: XmlWriter,
}

impl Page {
    fn new(title: &str, nav: &[(&str, &str)]) -> Page {
        let mut w = XmlWriter::new();
        w.open_with("html", &[("xmlns", XHTML_NS), ("lang", "en")]);
        w.open("head");
        w.leaf("title", title);
        w.leaf(
            "style",
            "body{font-family:sans-serif;margin:0}#nav{float:left;width:14em;padding:1em}\
             #main{margin-left:16em;padding:1em}table{border-collapse:collapse}\
             td,th{border:1px solid #999;padding:.2em .5em;text-align:left}",
        );
        w.close();
        w.open("body");
        w.open_with("div", &[("id", "nav")]);
        w.open("ul");
        for (href, label) in nav {
            w.open("li");
            w.leaf_with("a", &[("href", href)], label);
            w.close();
        }
        w.close();
        w.close();
        w.open_with("div", &[("id", "main")]);
        w.leaf("h1", title);
        Page { w }
    }

    fn finish(self) -> String {
        self.w.finish()
    }

    fn table(&mut self, rows: &[(&str, String)]) {
        self.w.open("table");
        for (k, v) in rows {
            self.w.open("tr");
            self.w.leaf("th", k);
            self.w.leaf("td", v);
            self.w.close();
        }
        self.w.close();
    }

    fn list(&mut self, items: &[String], empty: &str) {
        if items.is_empty() {
            self.w.leaf("p", empty);
            return;
        }
        self.w.open("ul");
        for i in items {
            self.w.leaf("li", i);
        }
        self.w.close();
    }
}

fn nav_for(reports: &BTreeSet<ReportKind>) -> Vec<(&'static str, &'static str)> {
    let mut nav = vec![("index.html", "Project Documentation")];
    nav.extend(reports.iter().map(|k| (k.file_name(), k.title())));
    nav
}

/// Project metadata page. `reports` fills the menu.
pub fn project_documentation(p: &ProjectDescriptor, reports: &BTreeSet<ReportKind>) -> String {
    let mut page = Page::new(&format!("Project {}", p.coordinate), &nav_for(reports));
    let m = &p.metadata;
    let w = &mut page.w;
    w.leaf("p", &format!("Coordinate: {}", p.coordinate));
    if let Some(d) = &m.description {
        w.leaf("h2", "Description");
        w.leaf("p", d);
    }
    if let Some(org) = &m.organization {
        w.leaf("h2", "Organization");
        w.open("p");
        w.opt_leaf("span", org.name.as_deref());
        if let Some(url) = &org.url {
            w.leaf_with("a", &[("href", url)], url);
        }
        w.close();
    }
    if let Some(y) = &m.inception_year {
        w.leaf("h2", "Inception Year");
        w.leaf("p", y);
    }
    if !m.licenses.is_empty() {
        w.leaf("h2", "Licenses");
        w.open("ul");
        for l in &m.licenses {
            w.open("li");
            w.opt_leaf("span", l.name.as_deref());
            if let Some(url) = &l.url {
                w.leaf_with("a", &[("href", url)], url);
            }
            w.close();
        }
        w.close();
    }
    if !m.developers.is_empty() {
        w.leaf("h2", "Developers");
        w.open("table");
        w.open("tr");
        for h in ["Name", "Email", "Organization", "Organization URL", "Roles"] {
            w.leaf("th", h);
        }
        w.close();
        for d in &m.developers {
            w.open("tr");
            for cell in [&d.name, &d.email, &d.organization, &d.organization_url] {
                w.leaf("td", cell.as_deref().unwrap_or(""));
            }
            w.leaf("td", &d.roles.join(", "));
            w.close();
        }
        w.close();
    }
    if !p.dependencies.is_empty() {
        w.leaf("h2", "Dependencies");
        w.open("ul");
        for d in &p.dependencies {
            w.leaf("li", &d.coordinate.to_string());
        }
        w.close();
    }
    page.finish()
}

pub fn ontology_report(o: &Ontology, skipped: &[SkippedConstruct], reports: &BTreeSet<ReportKind>) -> String {
    let stats = ontology_stats(o, skipped);
    let title = match &o.iri {
        Some(i) => format!("Ontology {i}"),
        None => "Ontology".to_string(),
    };
    let mut page = Page::new(&title, &nav_for(reports));
    page.w.leaf("h2", "Description");
    page.w
        .leaf("p", stats.description.as_deref().unwrap_or("No description."));
    page.w.leaf("h2", "Format");
    page.w.leaf("p", FORMAT_NAME);
    page.w.leaf("h2", "Profile");
    page.w.leaf("p", &stats.profile);
    if stats.skipped > 0 {
        page.w.leaf(
            "p",
            &format!("{} axioms outside the subset were skipped.", stats.skipped),
        );
    }
    page.w.leaf("h2", "Imports");
    let imports: Vec<String> = stats.imports.iter().map(|i| i.to_string()).collect();
    page.list(&imports, "No imports.");
    page.w.leaf("h2", "Statistics");
    page.table(&[
        ("Classes", stats.class_count.to_string()),
        ("Object properties", stats.object_property_count.to_string()),
        ("Datatype properties", stats.data_property_count.to_string()),
        ("Individuals", stats.individual_count.to_string()),
        ("Axioms", stats.axiom_count.to_string()),
    ]);
    page.finish()
}

fn named_sups(ax: &Axiom, class: &Iri) -> Vec<Iri> {
    let conjuncts = |ce: &ClassExpression| -> Vec<Iri> {
        match ce {
            ClassExpression::Named(i) => vec![i.clone()],
            ClassExpression::IntersectionOf(ops) => ops.iter().filter_map(|o| o.as_named().cloned()).collect(),
            _ => Vec::new(),
        }
    };
    match ax {
        Axiom::SubClassOf {
            sub: ClassExpression::Named(s),
            sup,
        } if s == class => conjuncts(sup),
        Axiom::EquivalentClasses(ClassExpression::Named(s), other)
        | Axiom::EquivalentClasses(other, ClassExpression::Named(s))
            if s == class =>
        {
            conjuncts(other)
        }
        _ => Vec::new(),
    }
    .into_iter()
    .filter(|i| i != class)
    .collect()
}

/// Class and property index with a detail section per entity.
pub fn technical_report(o: &Ontology, reports: &BTreeSet<ReportKind>) -> String {
    let sig = signature(o);
    let classified = classify_ontology(o).ok();
    let mut page = Page::new("Technical Report", &nav_for(reports));
    let sections: [(&str, &str, &BTreeSet<Iri>); 3] = [
        ("Classes", "class", &sig.classes),
        ("Object Properties", "oprop", &sig.object_properties),
        ("Datatype Properties", "dprop", &sig.data_properties),
    ];
    let anchor = |prefix: &str, n: usize| format!("{prefix}-{n}");

    page.w.leaf("h2", "Index");
    for (title, prefix, set) in &sections {
        page.w.leaf("h3", title);
        if set.is_empty() {
            page.w.leaf("p", "None.");
            continue;
        }
        page.w.open("ul");
        for (n, iri) in set.iter().enumerate() {
            page.w.open("li");
            page.w
                .leaf_with("a", &[("href", &format!("#{}", anchor(prefix, n)))], local_name(iri));
            page.w.close();
        }
        page.w.close();
    }

    let referencing = |iri: &Iri| -> Vec<String> {
        let mut v: Vec<String> = o
            .axioms
            .iter()
            .filter(|a| a.mentions(iri))
            .map(axiom_to_string)
            .collect();
        v.sort();
        v.dedup();
        v
    };

    for (title, prefix, set) in &sections {
        if set.is_empty() {
            continue;
        }
        page.w.leaf("h2", &format!("{title} in Detail"));
        for (n, iri) in set.iter().enumerate() {
            page.w
                .open_with("div", &[("id", &anchor(prefix, n)), ("class", "entity")]);
            page.w.leaf("h3", local_name(iri));
            page.w.leaf("p", &format!("IRI: {iri}"));
            if *prefix == "class" {
                let asserted: BTreeSet<Iri> = o.axioms.iter().flat_map(|a| named_sups(a, iri)).collect();
                page.w.leaf("h4", "Asserted superclasses");
                page.list(
                    &asserted.iter().map(|i| local_name(i).to_string()).collect::<Vec<_>>(),
                    "None.",
                );
                page.w.leaf("h4", "Inferred superclasses");
                match &classified {
                    Some(r) => {
                        let inferred: Vec<String> = sig
                            .classes
                            .iter()
                            .filter(|c| *c != iri && !asserted.contains(*c) && entails(r, iri, c))
                            .map(|c| local_name(c).to_string())
                            .collect();
                        page.list(&inferred, "None.");
                    }
                    None => {
                        page.w
                            .leaf("p", "Not available: the ontology is outside the reasoner's subset.");
                    }
                };
            } else {
                let mut domains = BTreeSet::new();
                let mut ranges = BTreeSet::new();
                for ax in &o.axioms {
                    match ax {
                        Axiom::ObjectPropertyDomain { property, domain }
                        | Axiom::DataPropertyDomain { property, domain }
                            if property == iri =>
                        {
                            domains.insert(class_expression_to_string(domain));
                        }
                        Axiom::ObjectPropertyRange { property, range } if property == iri => {
                            ranges.insert(class_expression_to_string(range));
                        }
                        _ => {}
                    }
                }
                page.w.leaf("h4", "Domain");
                page.list(&domains.into_iter().collect::<Vec<_>>(), "None.");
                if *prefix == "oprop" {
                    page.w.leaf("h4", "Range");
                    page.list(&ranges.into_iter().collect::<Vec<_>>(), "None.");
                }
            }
            page.w.leaf("h4", "Referencing axioms");
            page.list(&referencing(iri), "None.");
            page.w.close();
        }
    }
    page.finish()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptGroup {
    pub seed: Iri,
    pub members: BTreeSet<Iri>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptGrouping {
    pub groups: Vec<ConceptGroup>,
    pub ungrouped: BTreeSet<Iri>,
}

/// Undirected class graph: named-named subclass axioms, classes sharing an
/// intersection, and domain to range through a property.
pub fn class_graph(o: &Ontology) -> (Vec<Iri>, BTreeSet<(usize, usize)>) {
    let classes: Vec<Iri> = signature(o).classes.into_iter().collect();
    let idx = |i: &Iri| classes.binary_search(i).ok();
    let mut edges = BTreeSet::new();
    let mut link = |a: &Iri, b: &Iri| {
        if let (Some(x), Some(y)) = (idx(a), idx(b)) {
            if x != y {
                edges.insert((x.min(y), x.max(y)));
            }
        }
    };
    fn intersections<'a>(ce: &'a ClassExpression, out: &mut Vec<&'a [ClassExpression]>) {
        match ce {
            ClassExpression::IntersectionOf(ops) => {
                out.push(ops);
                ops.iter().for_each(|o| intersections(o, out));
            }
            ClassExpression::SomeValuesFrom { filler, .. } => intersections(filler, out),
            _ => {}
        }
    }
    let mut domains: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    let mut ranges: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    for ax in &o.axioms {
        if let Axiom::SubClassOf {
            sub: ClassExpression::Named(a),
            sup: ClassExpression::Named(b),
        } = ax
        {
            link(a, b);
        }
        let mut groups = Vec::new();
        for ce in ax.class_expressions() {
            intersections(ce, &mut groups);
        }
        for ops in groups {
            let named: Vec<&Iri> = ops.iter().filter_map(|o| o.as_named()).collect();
            for (i, a) in named.iter().enumerate() {
                for b in &named[i + 1..] {
                    link(a, b);
                }
            }
        }
        match ax {
            Axiom::ObjectPropertyDomain { property, domain } => {
                domains.entry(property).or_default().extend(domain.named_classes())
            }
            Axiom::ObjectPropertyRange { property, range } => {
                ranges.entry(property).or_default().extend(range.named_classes())
            }
            _ => {}
        }
    }
    for (p, ds) in &domains {
        for d in ds {
            for r in ranges.get(p).into_iter().flatten() {
                link(d, r);
            }
        }
    }
    (classes, edges)
}

/// Partition around the `k` highest-degree classes by shortest path
/// distance. Ties go to the lexicographically smaller seed.
pub fn concept_grouping(o: &Ontology, k: usize) -> ConceptGrouping {
    let (classes, edges) = class_graph(o);
    let mut g: UnGraph<(), ()> = UnGraph::new_undirected();
    let nodes: Vec<NodeIndex> = classes.iter().map(|_| g.add_node(())).collect();
    for (a, b) in &edges {
        g.add_edge(nodes[*a], nodes[*b], ());
    }
    let mut by_degree: Vec<usize> = (0..classes.len()).collect();
    by_degree.sort_by(|a, b| {
        g.neighbors(nodes[*b])
            .count()
            .cmp(&g.neighbors(nodes[*a]).count())
            .then(a.cmp(b))
    });
    let mut seeds: Vec<usize> = by_degree.into_iter().take(k).collect();
    seeds.sort();
    let dist: Vec<_> = seeds
        .iter()
        .map(|s| dijkstra(&g, nodes[*s], None, |_| 1usize))
        .collect();
    let mut members: Vec<BTreeSet<Iri>> = vec![BTreeSet::new(); seeds.len()];
    let mut ungrouped = BTreeSet::new();
    for (i, c) in classes.iter().enumerate() {
        // seeds are sorted, so the first minimum is the smaller IRI
        let best = dist
            .iter()
            .enumerate()
            .filter_map(|(s, d)| d.get(&nodes[i]).map(|d| (*d, s)))
            .min();
        match best {
            Some((_, s)) => {
                members[s].insert(c.clone());
            }
            None => {
                ungrouped.insert(c.clone());
            }
        }
    }
    ConceptGrouping {
        groups: seeds
            .iter()
            .zip(members)
            .map(|(s, members)| ConceptGroup {
                seed: classes[*s].clone(),
                members,
            })
            .collect(),
        ungrouped,
    }
}

pub fn default_group_count(o: &Ontology) -> usize {
    signature(o).classes.len().min(5)
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph: one node per class, a cluster per group, subclass edges and
/// property edges from domain to range.
pub fn visualize(o: &Ontology, grouping: &ConceptGrouping) -> String {
    let (classes, _) = class_graph(o);
    let mut out = String::from("digraph ontology {\n");
    let node = |out: &mut String, indent: &str, c: &Iri| {
        let _ = writeln!(out, "{indent}{} [label={}];", dot_id(c.as_str()), dot_id(local_name(c)));
    };
    for (n, g) in grouping.groups.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{n} {{");
        let _ = writeln!(out, "    label={};", dot_id(local_name(&g.seed)));
        for m in &g.members {
            node(&mut out, "    ", m);
        }
        out.push_str("  }\n");
    }
    let grouped: BTreeSet<&Iri> = grouping.groups.iter().flat_map(|g| g.members.iter()).collect();
    for c in classes.iter().filter(|c| !grouped.contains(c)) {
        node(&mut out, "  ", c);
    }
    let mut edges: BTreeSet<(String, String, String, bool)> = BTreeSet::new();
    let mut domains: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    let mut ranges: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    for ax in &o.axioms {
        match ax {
            Axiom::SubClassOf {
                sub: ClassExpression::Named(a),
                sup: ClassExpression::Named(b),
            } => {
                edges.insert((a.to_string(), b.to_string(), "subClassOf".into(), false));
            }
            Axiom::ObjectPropertyDomain { property, domain } => {
                domains.entry(property).or_default().extend(domain.named_classes())
            }
            Axiom::ObjectPropertyRange { property, range } => {
                ranges.entry(property).or_default().extend(range.named_classes())
            }
            _ => {}
        }
    }
    for (p, ds) in &domains {
        for d in ds {
            for r in ranges.get(p).into_iter().flatten() {
                edges.insert((d.to_string(), r.to_string(), local_name(p).to_string(), true));
            }
        }
    }
    for (a, b, label, dashed) in edges {
        let style = if dashed { ", style=dashed" } else { "" };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}{style}];",
            dot_id(&a),
            dot_id(&b),
            dot_id(&label)
        );
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Default)]
pub struct SiteOptions {
    /// Overrides the POM's report selection.
    pub reports: Option<BTreeSet<ReportKind>>,
    pub groups: Option<usize>,
}

fn write(path: &Path, text: &str) -> Result<(), ReportError> {
    crate::repository::write_atomic(path, text.as_bytes()).map_err(|e| ReportError::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e.to_string()),
    })
}

/// Writes the selected documents to `target/site` and returns their paths.
pub fn site(project_dir: &Path, p: &ProjectDescriptor, options: &SiteOptions) -> Result<Vec<PathBuf>, ReportError> {
    let reports = match &options.reports {
        Some(r) => r.clone(),
        None => pom_reports(p)?,
    };
    let dir = project_dir.join(SITE_DIR);
    let mut written = Vec::new();
    let index = dir.join("index.html");
    write(&index, &project_documentation(p, &reports))?;
    written.push(index);
    if reports.is_empty() {
        return Ok(written);
    }
    let file = project_dir.join(p.ontology_file());
    let text = fs::read_to_string(&file).map_err(|source| ReportError::Io {
        path: file.clone(),
        source,
    })?;
    let parsed = parse_ontology_lenient(&text).map_err(|source| ReportError::Syntax { path: file, source })?;
    let o = &parsed.ontology;
    for kind in &reports {
        let text = match kind {
            ReportKind::OntologyReport => ontology_report(o, &parsed.skipped, &reports),
            ReportKind::TechnicalReport => technical_report(o, &reports),
            ReportKind::Visualizer => {
                let k = options.groups.unwrap_or_else(|| default_group_count(o));
                visualize(o, &concept_grouping(o, k))
            }
        };
        let path = dir.join(kind.file_name());
        write(&path, &text)?;
        written.push(path);
    }
    Ok(written)
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

    fn all() -> BTreeSet<ReportKind> {
        ReportKind::ALL.into()
    }

    #[test]
    fn empty_ontology_stats() {
        let s = ontology_stats(&Ontology::default(), &[]);
        assert_eq!((s.class_count, s.object_property_count, s.axiom_count), (0, 0, 0));
        assert!(s.imports.is_empty());
        roxmltree::Document::parse(&ontology_report(&Ontology::default(), &[], &all())).unwrap();
    }

    #[test]
    fn technical_report_lists_inferred() {
        let html = technical_report(&o("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>))"), &all());
        let doc = roxmltree::Document::parse(&html).unwrap();
        let detail = doc
            .descendants()
            .find(|n| n.attribute("id") == Some("class-0"))
            .unwrap();
        let text: String = detail
            .descendants()
            .filter_map(|n| n.text())
            .collect::<Vec<_>>()
            .join("|");
        let asserted = text.find("Asserted superclasses").unwrap();
        let inferred = text.find("Inferred superclasses").unwrap();
        assert!(text[asserted..inferred].contains("|B|"));
        assert!(text[inferred..].contains("|C|"));
    }

    #[test]
    fn property_range_in_detail() {
        let html = technical_report(&o("Ontology(ObjectPropertyRange(<c:cost> <c:Money>))"), &all());
        assert!(html.contains("Range"));
        assert!(html.contains("&lt;c:Money&gt;"));
    }

    #[test]
    fn single_seed_covers_connected_graph() {
        let x = o("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>) SubClassOf(<a:D> <a:C>))");
        let g = concept_grouping(&x, 1);
        assert_eq!(g.groups.len(), 1);
        assert_eq!(g.groups[0].members.len(), 4);
        assert!(g.ungrouped.is_empty());
    }

    #[test]
    fn components_and_ungrouped() {
        let x = o("Ontology(SubClassOf(<a:A> <a:Hub1>) SubClassOf(<a:B> <a:Hub1>) \
                   SubClassOf(<b:A> <b:Hub2>) SubClassOf(<b:B> <b:Hub2>) Declaration(Class(<c:Alone>)))");
        let g = concept_grouping(&x, 2);
        assert_eq!(
            g.groups.iter().map(|g| g.seed.as_str()).collect::<Vec<_>>(),
            ["a:Hub1", "b:Hub2"]
        );
        assert_eq!(g.groups[0].members.len(), 3);
        assert_eq!(g.ungrouped, [iri("c:Alone")].into());
    }

    #[test]
    fn intersections_and_properties_link_classes() {
        let x = o("Ontology(SubClassOf(<a:X> ObjectIntersectionOf(<a:A> <a:B>)) \
                   ObjectPropertyDomain(<a:p> <a:B>) ObjectPropertyRange(<a:p> <a:C>))");
        let (classes, edges) = class_graph(&x);
        let names: Vec<_> = edges
            .iter()
            .map(|(a, b)| (classes[*a].as_str(), classes[*b].as_str()))
            .collect();
        assert_eq!(names, [("a:A", "a:B"), ("a:B", "a:C")]);
    }

    #[test]
    fn dot_output() {
        let empty = visualize(&Ontology::default(), &ConceptGrouping::default());
        assert_eq!(empty, "digraph ontology {\n}\n");
        let x = o("Ontology(SubClassOf(<a:A> <a:B>))");
        let dot = visualize(&x, &concept_grouping(&x, 1));
        assert!(dot.contains("\"a:A\" -> \"a:B\" [label=\"subClassOf\"];"));
        assert!(dot.contains("subgraph cluster_0"));
    }

    #[test]
    fn report_selection() {
        assert_eq!(ReportKind::parse("visualizer").unwrap(), ReportKind::Visualizer);
        assert!(ReportKind::parse("frob").is_err());
    }
}
