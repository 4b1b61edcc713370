//! Completion-rule saturation over a normalized TBox.
//!
//! Rules, applied until nothing changes:
//!
//! - CR1 `A′ ∈ S(A)`, `A′ ⊑ B` ⇒ `B ∈ S(A)`
//! - CR2 `A1, A2 ∈ S(A)`, `A1 ⊓ A2 ⊑ B` ⇒ `B ∈ S(A)`
//! - CR3 `A′ ∈ S(A)`, `A′ ⊑ ∃r.B` ⇒ `(A, B) ∈ R(r)`
//! - CR4 `(A, B) ∈ R(r)`, `B′ ∈ S(B)`, `∃r.B′ ⊑ C` ⇒ `C ∈ S(A)`
//! - CR5 `(A, B) ∈ R(r)`, `⊥ ∈ S(B)` ⇒ `⊥ ∈ S(A)`
//! - CR6 `(A, B) ∈ R(r)`, `r ⊑* s` ⇒ `(A, B) ∈ R(s)`
//!
//! CR6 is folded into CR4/CR5 by looking up NF4 axioms for every super-role
//! of a link's role instead of materializing the extra links.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use super::normalize::{Atom, NormalAxiom, NormalizedTBox};
use crate::iri::Iri;

const TOP: usize = 0;
const BOTTOM: usize = 1;

/// Subsumers and role successors computed by saturation.
#[derive(Debug, Clone)]
pub struct ClassificationResult {
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
    subsumers: Vec<HashSet<usize>>,
    roles: Vec<Iri>,
    /// Links `(A, r, B)` as derived by CR3, before role-hierarchy closure.
    links: HashSet<(usize, usize, usize)>,
    /// Reflexive-transitive super-roles per role index.
    role_supers: Vec<Vec<usize>>,
    tbox: NormalizedTBox,
}

struct Indexes {
    nf1: Vec<Vec<usize>>,
    nf2: Vec<Vec<(usize, usize)>>,
    nf3: Vec<Vec<(usize, usize)>>,
    /// `nf4[(s, filler)]` = conclusions of `∃s.filler ⊑ C`.
    nf4: HashMap<(usize, usize), Vec<usize>>,
}

fn role_closure(roles: &[Iri], role_idx: &HashMap<Iri, usize>, incl: &BTreeSet<(Iri, Iri)>) -> Vec<Vec<usize>> {
    let mut direct: Vec<Vec<usize>> = vec![Vec::new(); roles.len()];
    for (r, s) in incl {
        direct[role_idx[r]].push(role_idx[s]);
    }
    (0..roles.len())
        .map(|r| {
            let mut seen = vec![false; roles.len()];
            let mut stack = vec![r];
            let mut out = Vec::new();
            while let Some(x) = stack.pop() {
                if seen[x] {
                    continue;
                }
                seen[x] = true;
                out.push(x);
                stack.extend(direct[x].iter().copied());
            }
            out.sort_unstable();
            out
        })
        .collect()
}

/// Saturates `tbox` and returns the least fixpoint of the completion rules.
pub fn classify(tbox: &NormalizedTBox) -> ClassificationResult {
    let mut atoms = vec![Atom::Top, Atom::Bottom];
    atoms.extend(tbox.concept_names().into_iter().map(Atom::Name));
    let index: HashMap<Atom, usize> = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();

    let mut role_set: BTreeSet<Iri> = BTreeSet::new();
    for ax in &tbox.axioms {
        if let NormalAxiom::SubSome(_, r, _) | NormalAxiom::SomeSub(r, _, _) = ax {
            role_set.insert(r.clone());
        }
    }
    for (r, s) in &tbox.role_inclusions {
        role_set.insert(r.clone());
        role_set.insert(s.clone());
    }
    let roles: Vec<Iri> = role_set.into_iter().collect();
    let role_idx: HashMap<Iri, usize> = roles.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let role_supers = role_closure(&roles, &role_idx, &tbox.role_inclusions);

    let n = atoms.len();
    let mut ix = Indexes {
        nf1: vec![Vec::new(); n],
        nf2: vec![Vec::new(); n],
        nf3: vec![Vec::new(); n],
        nf4: HashMap::new(),
    };
    for ax in &tbox.axioms {
        match ax {
            NormalAxiom::Sub(a, b) => ix.nf1[index[a]].push(index[b]),
            NormalAxiom::Conj(a1, a2, b) => {
                let (a1, a2, b) = (index[a1], index[a2], index[b]);
                ix.nf2[a1].push((a2, b));
                if a1 != a2 {
                    ix.nf2[a2].push((a1, b));
                }
            }
            NormalAxiom::SubSome(a, r, b) => ix.nf3[index[a]].push((role_idx[r], index[b])),
            NormalAxiom::SomeSub(r, a, b) => ix.nf4.entry((role_idx[r], index[a])).or_default().push(index[b]),
        }
    }

    let mut state = Saturation {
        ix: &ix,
        role_supers: &role_supers,
        subsumers: vec![HashSet::new(); n],
        preds: vec![Vec::new(); n],
        links: HashSet::new(),
        queue: VecDeque::new(),
    };
    for a in 0..n {
        state.queue.push_back(Event::Sub(a, a));
        state.queue.push_back(Event::Sub(a, TOP));
    }
    state.run();

    ClassificationResult {
        atoms,
        index,
        subsumers: state.subsumers,
        roles,
        links: state.links,
        role_supers,
        tbox: tbox.clone(),
    }
}

enum Event {
    /// `x ∈ S(a)`
    Sub(usize, usize),
    /// `(a, b) ∈ R(r)`
    Link(usize, usize, usize),
}

struct Saturation<'a> {
    ix: &'a Indexes,
    role_supers: &'a [Vec<usize>],
    subsumers: Vec<HashSet<usize>>,
    /// Incoming links per target: `(source, role)`.
    preds: Vec<Vec<(usize, usize)>>,
    links: HashSet<(usize, usize, usize)>,
    queue: VecDeque<Event>,
}

impl Saturation<'_> {
    /// CR4/CR5 for a link `(a, r, b)` and one member `x` of `S(b)`.
    fn propagate_back(&mut self, a: usize, r: usize, x: usize) {
        if x == BOTTOM {
            self.queue.push_back(Event::Sub(a, BOTTOM));
        }
        for &s in &self.role_supers[r] {
            if let Some(cs) = self.ix.nf4.get(&(s, x)) {
                for &c in cs {
                    self.queue.push_back(Event::Sub(a, c));
                }
            }
        }
    }

    fn run(&mut self) {
        while let Some(ev) = self.queue.pop_front() {
            match ev {
                Event::Sub(a, x) => {
                    if !self.subsumers[a].insert(x) {
                        continue;
                    }
                    for &b in &self.ix.nf1[x] {
                        self.queue.push_back(Event::Sub(a, b));
                    }
                    for &(other, b) in &self.ix.nf2[x] {
                        if self.subsumers[a].contains(&other) {
                            self.queue.push_back(Event::Sub(a, b));
                        }
                    }
                    for &(r, b) in &self.ix.nf3[x] {
                        self.queue.push_back(Event::Link(a, r, b));
                    }
                    for i in 0..self.preds[a].len() {
                        let (p, r) = self.preds[a][i];
                        self.propagate_back(p, r, x);
                    }
                }
                Event::Link(a, r, b) => {
                    if !self.links.insert((a, r, b)) {
                        continue;
                    }
                    self.preds[b].push((a, r));
                    let members: Vec<usize> = self.subsumers[b].iter().copied().collect();
                    for x in members {
                        self.propagate_back(a, r, x);
                    }
                }
            }
        }
    }
}

impl ClassificationResult {
    pub fn tbox(&self) -> &NormalizedTBox {
        &self.tbox
    }

    fn idx(&self, atom: &Atom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    /// `S(atom)`, or `None` when the atom was not part of the classified TBox.
    pub fn subsumers_of(&self, atom: &Atom) -> Option<BTreeSet<Atom>> {
        let i = self.idx(atom)?;
        Some(self.subsumers[i].iter().map(|&j| self.atoms[j].clone()).collect())
    }

    pub fn contains(&self, sub: &Atom, sup: &Atom) -> bool {
        match (self.idx(sub), self.idx(sup)) {
            (Some(a), Some(b)) => self.subsumers[a].contains(&b),
            _ => false,
        }
    }

    pub fn is_unsatisfiable(&self, atom: &Atom) -> bool {
        self.idx(atom).is_some_and(|i| self.subsumers[i].contains(&BOTTOM))
    }

    /// `⊥ ∈ S(⊤)`: the TBox has no model.
    pub fn top_unsatisfiable(&self) -> bool {
        self.subsumers[TOP].contains(&BOTTOM)
    }

    /// The full `S` map keyed by atom.
    pub fn subsumer_map(&self) -> BTreeMap<Atom, BTreeSet<Atom>> {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                (
                    a.clone(),
                    self.subsumers[i].iter().map(|&j| self.atoms[j].clone()).collect(),
                )
            })
            .collect()
    }

    /// `R(r)` for every role, including links inherited through the role
    /// hierarchy (CR6).
    pub fn role_map(&self) -> BTreeMap<Iri, BTreeSet<(Atom, Atom)>> {
        let mut out: BTreeMap<Iri, BTreeSet<(Atom, Atom)>> =
            self.roles.iter().map(|r| (r.clone(), BTreeSet::new())).collect();
        for &(a, r, b) in &self.links {
            for &s in &self.role_supers[r] {
                out.get_mut(&self.roles[s])
                    .unwrap()
                    .insert((self.atoms[a].clone(), self.atoms[b].clone()));
            }
        }
        out
    }

    /// Concept names (input and fresh) whose subsumers contain `⊥`.
    pub fn unsatisfiable(&self) -> BTreeSet<Iri> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| self.subsumers[*i].contains(&BOTTOM))
            .filter_map(|(_, a)| a.as_name().cloned())
            .collect()
    }

    /// Whether `r ⊑* s` holds in the asserted role hierarchy.
    pub fn role_subsumed(&self, r: &Iri, s: &Iri) -> bool {
        if r == s {
            return true;
        }
        let (Some(ri), Some(si)) = (
            self.roles.iter().position(|x| x == r),
            self.roles.iter().position(|x| x == s),
        ) else {
            return false;
        };
        self.role_supers[ri].contains(&si)
    }

    /// Checks every completion rule against the stored sets and returns
    /// whether any would add something new.
    pub fn is_closed(&self) -> bool {
        for a in 0..self.atoms.len() {
            let s = &self.subsumers[a];
            if !s.contains(&a) || !s.contains(&TOP) {
                return false;
            }
            for ax in &self.tbox.axioms {
                match ax {
                    NormalAxiom::Sub(x, b) => {
                        if s.contains(&self.index[x]) && !s.contains(&self.index[b]) {
                            return false;
                        }
                    }
                    NormalAxiom::Conj(x, y, b) => {
                        if s.contains(&self.index[x]) && s.contains(&self.index[y]) && !s.contains(&self.index[b]) {
                            return false;
                        }
                    }
                    NormalAxiom::SubSome(x, r, b) => {
                        let r = self.roles.iter().position(|q| q == r).unwrap();
                        if s.contains(&self.index[x]) && !self.links.contains(&(a, r, self.index[b])) {
                            return false;
                        }
                    }
                    NormalAxiom::SomeSub(..) => {}
                }
            }
        }
        for &(a, r, b) in &self.links {
            if self.subsumers[b].contains(&BOTTOM) && !self.subsumers[a].contains(&BOTTOM) {
                return false;
            }
            for &s in &self.role_supers[r] {
                for &x in &self.subsumers[b] {
                    if let Some(cs) = self.ix_nf4(s, x) {
                        if cs.iter().any(|c| !self.subsumers[a].contains(c)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn ix_nf4(&self, role: usize, filler: usize) -> Option<Vec<usize>> {
        let role = &self.roles[role];
        let cs: Vec<usize> = self
            .tbox
            .axioms
            .iter()
            .filter_map(|ax| match ax {
                NormalAxiom::SomeSub(r, a, c) if r == role && self.index[a] == filler => Some(self.index[c]),
                _ => None,
            })
            .collect();
        (!cs.is_empty()).then_some(cs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;
    use crate::reasoner::normalize;

    fn name(s: &str) -> Atom {
        Atom::Name(Iri::new(s).unwrap())
    }

    fn run(text: &str) -> ClassificationResult {
        classify(&normalize(&parse_ontology(text).unwrap()).unwrap())
    }

    #[test]
    fn empty_tbox_single_name() {
        let r = run("Ontology(Declaration(Class(<a:A>)))");
        assert_eq!(
            r.subsumers_of(&name("a:A")).unwrap(),
            [name("a:A"), Atom::Top].into_iter().collect()
        );
    }

    #[test]
    fn transitivity() {
        let r = run("Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:B> <a:C>))");
        assert!(r.contains(&name("a:A"), &name("a:C")));
        assert!(!r.contains(&name("a:C"), &name("a:A")));
    }

    #[test]
    fn bottom_propagates_backwards_over_links() {
        let r = run("Ontology(SubClassOf(<a:A> ObjectSomeValuesFrom(<a:r> <a:B>)) SubClassOf(<a:B> owl:Nothing))");
        assert!(r.is_unsatisfiable(&name("a:A")));
        assert!(r.unsatisfiable().contains(&Iri::new("a:A").unwrap()));
    }

    #[test]
    fn conjunction_rule() {
        let r = run(
            "Ontology(SubClassOf(<a:A> <a:B>) SubClassOf(<a:A> <a:C>) SubClassOf(ObjectIntersectionOf(<a:B> <a:C>) <a:D>))",
        );
        assert!(r.contains(&name("a:A"), &name("a:D")));
        assert!(!r.contains(&name("a:B"), &name("a:D")));
    }

    #[test]
    fn existential_rule_and_role_hierarchy() {
        let r = run(
            "Ontology(SubClassOf(<a:A> ObjectSomeValuesFrom(<a:r> <a:B>)) SubObjectPropertyOf(<a:r> <a:s>) \
             SubClassOf(ObjectSomeValuesFrom(<a:s> <a:B>) <a:C>))",
        );
        assert!(r.contains(&name("a:A"), &name("a:C")));
        let roles = r.role_map();
        assert!(roles[&Iri::new("a:s").unwrap()].contains(&(name("a:A"), name("a:B"))));
        assert!(r.role_subsumed(&Iri::new("a:r").unwrap(), &Iri::new("a:s").unwrap()));
        assert!(!r.role_subsumed(&Iri::new("a:s").unwrap(), &Iri::new("a:r").unwrap()));
    }

    #[test]
    fn domain_fires_for_any_successor() {
        let r = run(
            "Ontology(SubClassOf(<a:Camera> ObjectSomeValuesFrom(<a:cost> <a:Money>)) ObjectPropertyDomain(<a:cost> <a:PurchaseableItem>))",
        );
        assert!(r.contains(&name("a:Camera"), &name("a:PurchaseableItem")));
    }

    #[test]
    fn top_unsatisfiable_detected() {
        let r = run("Ontology(SubClassOf(owl:Thing <a:A>) SubClassOf(<a:A> owl:Nothing))");
        assert!(r.top_unsatisfiable());
    }

    #[test]
    fn result_is_a_fixpoint() {
        let r = run(
            "Ontology(SubClassOf(<a:A> ObjectSomeValuesFrom(<a:r> ObjectIntersectionOf(<a:B> <a:C>))) \
             SubClassOf(ObjectSomeValuesFrom(<a:r> <a:B>) <a:D>) SubClassOf(<a:D> <a:E>) SubObjectPropertyOf(<a:r> <a:s>) \
             SubClassOf(ObjectSomeValuesFrom(<a:s> <a:C>) <a:F>))",
        );
        assert!(r.is_closed());
        assert!(r.contains(&name("a:A"), &name("a:E")));
        assert!(r.contains(&name("a:A"), &name("a:F")));
    }
}
