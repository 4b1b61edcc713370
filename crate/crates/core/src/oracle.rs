//! Independent reference implementations used by tests: exhaustive
//! countermodel search for the reasoner and all-pairs shortest paths for
//! dependency mediation. Slow by design and only built with `test-oracle`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::iri::{Iri, OWL_NS};
use crate::ontology::{Axiom, ClassExpression, EntityKind, Ontology};

/// A finite interpretation over `{0, .., size-1}`. Concept extensions are
/// bitmasks over elements, role extensions bitmasks over `x * size + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub size: usize,
    pub concepts: BTreeMap<Iri, u8>,
    pub roles: BTreeMap<Iri, u16>,
    pub individuals: BTreeMap<Iri, usize>,
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems = |mask: u32, n: usize| -> Vec<usize> { (0..n).filter(|i| mask & (1 << i) != 0).collect() };
        write!(f, "domain size {}", self.size)?;
        for (c, m) in &self.concepts {
            write!(f, "; {} = {:?}", c.local_name(), elems(*m as u32, self.size))?;
        }
        for (r, m) in &self.roles {
            let pairs: Vec<(usize, usize)> = elems(*m as u32, self.size * self.size)
                .into_iter()
                .map(|i| (i / self.size, i % self.size))
                .collect();
            write!(f, "; {} = {:?}", r.local_name(), pairs)?;
        }
        for (a, x) in &self.individuals {
            write!(f, "; {} -> {x}", a.local_name())?;
        }
        Ok(())
    }
}

/// What the search must additionally satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    /// Any model.
    Model,
    /// A model where element 0 is in `sub` and not in `sup`; `sup = None`
    /// only asks for `sub` to be non-empty.
    NonSubsumption { sub: Iri, sup: Option<Iri> },
}

#[derive(Clone)]
struct Partial {
    c_known: Vec<u8>,
    c_val: Vec<u8>,
    r_known: Vec<u16>,
    r_val: Vec<u16>,
    ind: Vec<usize>,
}

/// Class expression over signature indices.
enum Ce {
    Top,
    Bot,
    C(usize),
    And(Vec<Ce>),
    Some(usize, Box<Ce>),
}

enum Ax {
    Sub(Ce, Ce),
    Role(usize, usize),
    Range(usize, Ce),
    Assert(Ce, usize),
}

struct Problem {
    n: usize,
    concepts: Vec<Iri>,
    roles: Vec<Iri>,
    individuals: Vec<Iri>,
    axioms: Vec<Ax>,
}

fn is_thing(i: &Iri) -> Option<bool> {
    match i.as_str().strip_prefix(OWL_NS) {
        Some("Thing") => Some(true),
        Some("Nothing") => Some(false),
        _ => None,
    }
}

fn index_of(v: &[Iri], i: &Iri) -> usize {
    v.binary_search(i).expect("name in signature")
}

impl Problem {
    fn compile_ce(&self, ce: &ClassExpression) -> Ce {
        match ce {
            ClassExpression::Thing => Ce::Top,
            ClassExpression::Nothing => Ce::Bot,
            ClassExpression::Named(c) => match is_thing(c) {
                Some(true) => Ce::Top,
                Some(false) => Ce::Bot,
                None => Ce::C(index_of(&self.concepts, c)),
            },
            ClassExpression::IntersectionOf(ops) => Ce::And(ops.iter().map(|o| self.compile_ce(o)).collect()),
            ClassExpression::SomeValuesFrom { property, filler } => {
                Ce::Some(index_of(&self.roles, property), Box::new(self.compile_ce(filler)))
            }
        }
    }

    fn compile(&mut self, axioms: &[Axiom]) {
        let mut out = Vec::new();
        for ax in axioms {
            match ax {
                Axiom::SubClassOf { sub, sup } => out.push(Ax::Sub(self.compile_ce(sub), self.compile_ce(sup))),
                Axiom::EquivalentClasses(a, b) => {
                    out.push(Ax::Sub(self.compile_ce(a), self.compile_ce(b)));
                    out.push(Ax::Sub(self.compile_ce(b), self.compile_ce(a)));
                }
                Axiom::ObjectPropertyDomain { property, domain } => out.push(Ax::Sub(
                    Ce::Some(index_of(&self.roles, property), Box::new(Ce::Top)),
                    self.compile_ce(domain),
                )),
                Axiom::ObjectPropertyRange { property, range } => {
                    out.push(Ax::Range(index_of(&self.roles, property), self.compile_ce(range)))
                }
                Axiom::SubObjectPropertyOf { sub, sup } => {
                    out.push(Ax::Role(index_of(&self.roles, sub), index_of(&self.roles, sup)))
                }
                Axiom::ClassAssertion { class, individual } => out.push(Ax::Assert(
                    self.compile_ce(class),
                    index_of(&self.individuals, individual),
                )),
                Axiom::DataPropertyDomain { .. } | Axiom::Declaration(..) => {}
            }
        }
        self.axioms = out;
    }

    fn role_at(&self, p: &Partial, r: usize, x: usize, y: usize) -> Option<bool> {
        let bit = 1u16 << (x * self.n + y);
        (p.r_known[r] & bit != 0).then(|| p.r_val[r] & bit != 0)
    }

    fn eval(&self, p: &Partial, ce: &Ce, x: usize) -> Option<bool> {
        match ce {
            Ce::Top => Some(true),
            Ce::Bot => Some(false),
            Ce::C(k) => (p.c_known[*k] & (1 << x) != 0).then(|| p.c_val[*k] & (1 << x) != 0),
            Ce::And(ops) => {
                let mut all = Some(true);
                for op in ops {
                    match self.eval(p, op, x) {
                        Some(false) => return Some(false),
                        None => all = None,
                        Some(true) => {}
                    }
                }
                all
            }
            Ce::Some(r, filler) => {
                let mut any = Some(false);
                for y in 0..self.n {
                    match (self.role_at(p, *r, x, y), self.eval(p, filler, y)) {
                        (Some(true), Some(true)) => return Some(true),
                        (Some(false), _) | (_, Some(false)) => {}
                        _ => any = None,
                    }
                }
                any
            }
        }
    }

    fn violated(&self, p: &Partial) -> bool {
        let n = self.n;
        self.axioms.iter().any(|ax| match ax {
            Ax::Sub(sub, sup) => {
                (0..n).any(|x| self.eval(p, sub, x) == Some(true) && self.eval(p, sup, x) == Some(false))
            }
            Ax::Range(r, range) => (0..n).any(|x| {
                (0..n).any(|y| self.role_at(p, *r, x, y) == Some(true) && self.eval(p, range, y) == Some(false))
            }),
            Ax::Role(r, s) => (0..n).any(|x| {
                (0..n).any(|y| self.role_at(p, *r, x, y) == Some(true) && self.role_at(p, *s, x, y) == Some(false))
            }),
            Ax::Assert(class, a) => self.eval(p, class, p.ind[*a]) == Some(false),
        })
    }

    /// Sets `ce` true at `x` where that is forced; reports any change.
    fn force_true(&self, p: &mut Partial, ce: &Ce, x: usize) -> bool {
        match ce {
            Ce::C(k) if p.c_known[*k] & (1 << x) == 0 => {
                p.c_known[*k] |= 1 << x;
                p.c_val[*k] |= 1 << x;
                true
            }
            Ce::And(ops) => ops.iter().fold(false, |acc, op| self.force_true(p, op, x) | acc),
            Ce::Some(r, filler) => {
                // a single remaining candidate successor must be used
                let mut candidate = None;
                for y in 0..self.n {
                    match (self.role_at(p, *r, x, y), self.eval(p, filler, y)) {
                        (Some(true), Some(true)) => return false,
                        (Some(false), _) | (_, Some(false)) => {}
                        _ if candidate.is_some() => return false,
                        _ => candidate = Some(y),
                    }
                }
                match candidate {
                    Some(y) => self.force_role(p, *r, x, y, true) | self.force_true(p, filler, y),
                    None => false,
                }
            }
            _ => false,
        }
    }

    fn force_false(&self, p: &mut Partial, ce: &Ce, x: usize) -> bool {
        match ce {
            Ce::C(k) if p.c_known[*k] & (1 << x) == 0 => {
                p.c_known[*k] |= 1 << x;
                true
            }
            Ce::And(ops) => {
                // all other conjuncts hold, so the open one must fail
                let mut open = None;
                for op in ops {
                    match self.eval(p, op, x) {
                        Some(true) => {}
                        Some(false) => return false,
                        None if open.is_some() => return false,
                        None => open = Some(op),
                    }
                }
                open.is_some_and(|op| self.force_false(p, op, x))
            }
            Ce::Some(r, filler) => {
                let mut changed = false;
                for y in 0..self.n {
                    match (self.role_at(p, *r, x, y), self.eval(p, filler, y)) {
                        (Some(true), None) => changed |= self.force_false(p, filler, y),
                        (None, Some(true)) => changed |= self.force_role(p, *r, x, y, false),
                        _ => {}
                    }
                }
                changed
            }
            _ => false,
        }
    }

    fn force_role(&self, p: &mut Partial, r: usize, x: usize, y: usize, value: bool) -> bool {
        let bit = 1u16 << (x * self.n + y);
        if p.r_known[r] & bit != 0 {
            return false;
        }
        p.r_known[r] |= bit;
        if value {
            p.r_val[r] |= bit;
        }
        true
    }

    /// Applies forced assignments until nothing changes. Only consequences
    /// every model shares are drawn, so the search stays exhaustive.
    fn propagate(&self, p: &mut Partial) {
        let n = self.n;
        loop {
            let mut changed = false;
            for ax in &self.axioms {
                match ax {
                    Ax::Sub(sub, sup) => {
                        for x in 0..n {
                            let (s, t) = (self.eval(p, sub, x), self.eval(p, sup, x));
                            if s == Some(true) && t.is_none() {
                                changed |= self.force_true(p, sup, x);
                            } else if t == Some(false) && s.is_none() {
                                changed |= self.force_false(p, sub, x);
                            }
                        }
                    }
                    Ax::Role(r, s) => {
                        for x in 0..n {
                            for y in 0..n {
                                match (self.role_at(p, *r, x, y), self.role_at(p, *s, x, y)) {
                                    (Some(true), None) => changed |= self.force_role(p, *s, x, y, true),
                                    (None, Some(false)) => changed |= self.force_role(p, *r, x, y, false),
                                    _ => {}
                                }
                            }
                        }
                    }
                    Ax::Range(r, range) => {
                        for x in 0..n {
                            for y in 0..n {
                                if self.role_at(p, *r, x, y) == Some(true) {
                                    changed |= self.force_true(p, range, y);
                                }
                            }
                        }
                    }
                    Ax::Assert(class, a) => changed |= self.force_true(p, class, p.ind[*a]),
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Depth-first assignment of concept bits, then role bits.
    fn search(&self, p: &mut Partial, var: usize) -> bool {
        self.propagate(p);
        if self.violated(p) {
            return false;
        }
        let n = self.n;
        let concept_vars = self.concepts.len() * n;
        let total = concept_vars + self.roles.len() * n * n;
        let mut var = var;
        while var < total && self.is_known(p, var) {
            var += 1;
        }
        if var == total {
            return true;
        }
        for value in [false, true] {
            let saved = p.clone();
            if var < concept_vars {
                let (k, x) = (var / n, var % n);
                p.c_known[k] |= 1 << x;
                if value {
                    p.c_val[k] |= 1 << x;
                }
            } else {
                let v = var - concept_vars;
                let (r, bit) = (v / (n * n), v % (n * n));
                p.r_known[r] |= 1 << bit;
                if value {
                    p.r_val[r] |= 1 << bit;
                }
            }
            if self.search(p, var + 1) {
                return true;
            }
            *p = saved;
        }
        false
    }

    fn is_known(&self, p: &Partial, var: usize) -> bool {
        let n = self.n;
        let concept_vars = self.concepts.len() * n;
        if var < concept_vars {
            p.c_known[var / n] & (1 << (var % n)) != 0
        } else {
            let v = var - concept_vars;
            p.r_known[v / (n * n)] & (1 << (v % (n * n))) != 0
        }
    }
}

fn collect_signature(o: &Ontology, goal: &Goal) -> (Vec<Iri>, Vec<Iri>, Vec<Iri>) {
    let mut concepts = BTreeSet::new();
    let mut roles = BTreeSet::new();
    let mut individuals = BTreeSet::new();
    for ax in &o.axioms {
        for (kind, iri) in ax.entities() {
            match kind {
                EntityKind::Class if is_thing(iri).is_none() => {
                    concepts.insert(iri.clone());
                }
                EntityKind::ObjectProperty => {
                    roles.insert(iri.clone());
                }
                EntityKind::NamedIndividual => {
                    individuals.insert(iri.clone());
                }
                _ => {}
            }
        }
    }
    if let Goal::NonSubsumption { sub, sup } = goal {
        for c in std::iter::once(sub).chain(sup) {
            if is_thing(c).is_none() {
                concepts.insert(c.clone());
            }
        }
    }
    (
        concepts.into_iter().collect(),
        roles.into_iter().collect(),
        individuals.into_iter().collect(),
    )
}

/// Searches for a model of `o` with exactly `size` elements meeting `goal`.
/// Sizes above 3 are rejected because roles are stored in 16-bit masks.
pub fn find_model(o: &Ontology, size: usize, goal: &Goal) -> Option<Interpretation> {
    assert!((1..=3).contains(&size), "domain size must be 1..=3");
    let (concepts, roles, individuals) = collect_signature(o, goal);
    let mut problem = Problem {
        n: size,
        concepts,
        roles,
        individuals,
        axioms: Vec::new(),
    };
    problem.compile(&o.axioms);
    let mut start = Partial {
        c_known: vec![0; problem.concepts.len()],
        c_val: vec![0; problem.concepts.len()],
        r_known: vec![0; problem.roles.len()],
        r_val: vec![0; problem.roles.len()],
        ind: vec![0; problem.individuals.len()],
    };
    if let Goal::NonSubsumption { sub, sup } = goal {
        match is_thing(sub) {
            Some(false) => return None,
            Some(true) => {}
            None => {
                let k = index_of(&problem.concepts, sub);
                start.c_known[k] |= 1;
                start.c_val[k] |= 1;
            }
        }
        if let Some(sup) = sup {
            match is_thing(sup) {
                Some(true) => return None,
                Some(false) => {}
                None => {
                    let k = index_of(&problem.concepts, sup);
                    if start.c_val[k] & 1 != 0 {
                        return None;
                    }
                    start.c_known[k] |= 1;
                }
            }
        }
    }
    // every mapping of individuals to elements
    let count = problem.individuals.len();
    for code in 0..size.pow(count as u32) {
        let mut p = start.clone();
        let mut c = code;
        for slot in p.ind.iter_mut() {
            *slot = c % size;
            c /= size;
        }
        if problem.search(&mut p, 0) {
            return Some(Interpretation {
                size,
                concepts: problem.concepts.iter().cloned().zip(p.c_val.iter().copied()).collect(),
                roles: problem.roles.iter().cloned().zip(p.r_val.iter().copied()).collect(),
                individuals: problem.individuals.iter().cloned().zip(p.ind.iter().copied()).collect(),
            });
        }
    }
    None
}

/// Smallest countermodel up to `max_size` elements.
pub fn countermodel(o: &Ontology, goal: &Goal, max_size: usize) -> Option<Interpretation> {
    (1..=max_size.min(3)).find_map(|n| find_model(o, n, goal))
}

/// One reasoner/oracle comparison for a named pair. `sup = None` stands
/// for `owl:Nothing`.
#[derive(Debug, Clone)]
pub struct PairCheck {
    pub sub: Iri,
    pub sup: Option<Iri>,
    pub entailed: bool,
    pub countermodel: Option<Interpretation>,
}

impl PairCheck {
    pub fn agrees(&self) -> bool {
        self.entailed == self.countermodel.is_none()
    }
}

/// Compares `entails` against exhaustive search for every ordered pair of
/// named classes in `o`, plus each class against `owl:Nothing`, and the
/// consistency verdict against a plain model search.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub pairs: Vec<PairCheck>,
    pub consistent_by_reasoner: bool,
    pub model_found: bool,
}

impl OracleReport {
    pub fn disagreements(&self) -> Vec<&PairCheck> {
        self.pairs.iter().filter(|p| !p.agrees()).collect()
    }

    pub fn agrees(&self) -> bool {
        self.disagreements().is_empty() && self.consistent_by_reasoner == self.model_found
    }
}

pub fn check_against_reasoner(o: &Ontology) -> Result<OracleReport, crate::reasoner::ReasonerError> {
    use crate::reasoner::{classify_ontology, consistent, entails, Consistency};
    let result = classify_ontology(o)?;
    let classes: Vec<Iri> = crate::ontology::signature(o)
        .classes
        .into_iter()
        .filter(|c| is_thing(c).is_none())
        .collect();
    let nothing = Iri::new(format!("{OWL_NS}Nothing")).expect("owl:Nothing");
    let mut pairs = Vec::new();
    for sub in &classes {
        let sups = classes
            .iter()
            .filter(|c| *c != sub)
            .map(|c| Some(c.clone()))
            .chain([None]);
        for sup in sups {
            let entailed = entails(&result, sub, sup.as_ref().unwrap_or(&nothing));
            let goal = Goal::NonSubsumption {
                sub: sub.clone(),
                sup: sup.clone(),
            };
            pairs.push(PairCheck {
                sub: sub.clone(),
                sup,
                entailed,
                countermodel: countermodel(o, &goal, 3),
            });
        }
    }
    Ok(OracleReport {
        pairs,
        consistent_by_reasoner: consistent(o).status == Consistency::Consistent,
        model_found: countermodel(o, &Goal::Model, 3).is_some(),
    })
}

/// Floyd–Warshall over a directed graph with unit edge weights. Returns the
/// shortest distance from `root` to every reachable node.
pub fn shortest_depths<N: Ord + Clone>(root: &N, edges: &[(N, N)]) -> BTreeMap<N, usize> {
    let mut nodes: BTreeSet<N> = BTreeSet::new();
    nodes.insert(root.clone());
    for (a, b) in edges {
        nodes.insert(a.clone());
        nodes.insert(b.clone());
    }
    let nodes: Vec<N> = nodes.into_iter().collect();
    let idx = |n: &N| nodes.binary_search(n).unwrap();
    let k = nodes.len();
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; k]; k];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (a, b) in edges {
        let (i, j) = (idx(a), idx(b));
        if i != j {
            d[i][j] = d[i][j].min(1);
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let r = idx(root);
    nodes
        .iter()
        .enumerate()
        .filter(|(j, _)| d[r][*j] < INF)
        .map(|(j, n)| (n.clone(), d[r][j]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn non_sub(a: &str, b: Option<&str>) -> Goal {
        Goal::NonSubsumption {
            sub: iri(a),
            sup: b.map(iri),
        }
    }

    #[test]
    fn transitivity_has_no_countermodel() {
        let o = parse_ontology("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>))").unwrap();
        assert!(countermodel(&o, &non_sub("a:A", Some("a:C")), 3).is_none());
        let m = countermodel(&o, &non_sub("a:C", Some("a:A")), 3).unwrap();
        assert_eq!(m.size, 1);
    }

    #[test]
    fn existential_into_empty_filler() {
        let o = parse_ontology(
            "Ontology(SubClassOf(<a:A> ObjectSomeValuesFrom(<a:r> <a:B>)) SubClassOf(<a:B> owl:Nothing))",
        )
        .unwrap();
        assert!(countermodel(&o, &non_sub("a:A", None), 3).is_none());
    }

    #[test]
    fn needs_two_elements() {
        // A ⊑ ∃r.B with A, B disjoint forces a second element
        let o = parse_ontology(
            "Ontology(SubClassOf(<a:A> ObjectSomeValuesFrom(<a:r> <a:B>)) \
             SubClassOf(ObjectIntersectionOf(<a:A> <a:B>) owl:Nothing))",
        )
        .unwrap();
        assert!(find_model(&o, 1, &non_sub("a:A", None)).is_none());
        assert_eq!(countermodel(&o, &non_sub("a:A", None), 3).unwrap().size, 2);
    }

    #[test]
    fn assertion_into_empty_class() {
        let o = parse_ontology("Ontology(ClassAssertion(<a:A> <a:a>) SubClassOf(<a:A> owl:Nothing))").unwrap();
        assert!(countermodel(&o, &Goal::Model, 3).is_none());
    }

    #[test]
    fn floyd_warshall_depths() {
        let edges = vec![("r", "a"), ("r", "b"), ("a", "c"), ("b", "d"), ("d", "c"), ("x", "y")];
        let d = shortest_depths(&"r", &edges);
        assert_eq!(d[&"c"], 2);
        assert_eq!(d[&"d"], 2);
        assert!(!d.contains_key(&"x"));
    }
}
