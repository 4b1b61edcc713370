//! Rewrites EL axioms into the four normal forms consumed by the completion
//! rules:
//!
//! | form | shape           |
//! |------|-----------------|
//! | NF1  | `A ⊑ B`         |
//! | NF2  | `A1 ⊓ A2 ⊑ B`   |
//! | NF3  | `A ⊑ ∃r.B`      |
//! | NF4  | `∃r.A ⊑ B`      |
//!
//! where `A`, `B` are concept names, `⊤` or `⊥`. Complex subexpressions are
//! replaced by fresh names `urn:ontomvn:nnf#X{n}`, numbered in first-encounter
//! order so that output is reproducible.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::iri::{Iri, RESERVED_NS};
use crate::ontology::{check_profile, Axiom, ClassExpression, EntityKind, Ontology};

use super::ReasonerError;

pub const FRESH_PREFIX: &str = "urn:ontomvn:nnf#X";
pub const INDIVIDUAL_PREFIX: &str = "urn:ontomvn:ind#";
pub const ASSERTION_PREFIX: &str = "urn:ontomvn:assert#";

/// A concept name, `⊤` or `⊥`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Top,
    Bottom,
    Name(Iri),
}

impl Atom {
    pub fn as_name(&self) -> Option<&Iri> {
        match self {
            Atom::Name(iri) => Some(iri),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Top => f.write_str("owl:Thing"),
            Atom::Bottom => f.write_str("owl:Nothing"),
            Atom::Name(iri) => write!(f, "<{iri}>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalAxiom {
    /// NF1 `A ⊑ B`
    Sub(Atom, Atom),
    /// NF2 `A1 ⊓ A2 ⊑ B`
    Conj(Atom, Atom, Atom),
    /// NF3 `A ⊑ ∃r.B`
    SubSome(Atom, Iri, Atom),
    /// NF4 `∃r.A ⊑ B`
    SomeSub(Iri, Atom, Atom),
}

/// A class assertion mapped onto concept names: `individual_name ⊑
/// assertion_name ⊑ class`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertionName {
    pub individual: Iri,
    pub class: ClassExpression,
    pub name: Iri,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizedTBox {
    pub axioms: Vec<NormalAxiom>,
    /// Asserted `r ⊑ s`.
    pub role_inclusions: BTreeSet<(Iri, Iri)>,
    /// Named classes of the input.
    pub input_classes: BTreeSet<Iri>,
    pub fresh_names: BTreeSet<Iri>,
    /// Concept name standing for each asserted individual.
    pub individuals: BTreeMap<Iri, Iri>,
    pub assertions: Vec<AssertionName>,
    /// Indices of axioms that carry no classification semantics here
    /// (ranges, data property domains).
    pub not_internalized: Vec<usize>,
}

impl NormalizedTBox {
    /// Every concept name mentioned, input and fresh.
    pub fn concept_names(&self) -> BTreeSet<Iri> {
        let mut out = self.input_classes.clone();
        out.extend(self.fresh_names.iter().cloned());
        out.extend(self.individuals.values().cloned());
        out.extend(self.assertions.iter().map(|a| a.name.clone()));
        for ax in &self.axioms {
            let atoms: Vec<&Atom> = match ax {
                NormalAxiom::Sub(a, b) => vec![a, b],
                NormalAxiom::Conj(a, b, c) => vec![a, b, c],
                NormalAxiom::SubSome(a, _, b) | NormalAxiom::SomeSub(_, a, b) => vec![a, b],
            };
            out.extend(atoms.into_iter().filter_map(|a| a.as_name().cloned()));
        }
        out
    }
}

#[derive(Default)]
pub(super) struct Normalizer {
    pub(super) out: NormalizedTBox,
    counter: usize,
    /// Fresh names for complex expressions on the left (`C ⊑ X`) and on the
    /// right (`X ⊑ C`); never shared between the two sides.
    lhs_cache: HashMap<ClassExpression, Atom>,
    rhs_cache: HashMap<ClassExpression, Atom>,
}

fn atom_of(ce: &ClassExpression) -> Option<Atom> {
    match ce {
        ClassExpression::Named(iri) => Some(Atom::Name(iri.clone())),
        ClassExpression::Thing => Some(Atom::Top),
        ClassExpression::Nothing => Some(Atom::Bottom),
        _ => None,
    }
}

fn flatten_conjuncts(ce: &ClassExpression, out: &mut Vec<ClassExpression>) {
    match ce {
        ClassExpression::IntersectionOf(ops) => {
            for op in ops {
                flatten_conjuncts(op, out);
            }
        }
        ClassExpression::Thing => {}
        other => {
            if !out.contains(other) {
                out.push(other.clone());
            }
        }
    }
}

impl Normalizer {
    fn fresh(&mut self) -> Atom {
        let iri = Iri::new(format!("{FRESH_PREFIX}{}", self.counter)).expect("fresh IRI");
        self.counter += 1;
        self.out.fresh_names.insert(iri.clone());
        Atom::Name(iri)
    }

    fn emit(&mut self, ax: NormalAxiom) {
        if let NormalAxiom::Sub(a, b) = &ax {
            if a == b || *a == Atom::Bottom || *b == Atom::Top {
                return;
            }
        }
        if !self.out.axioms.contains(&ax) {
            self.out.axioms.push(ax);
        }
    }

    /// Name `X` with `ce ⊑ X`, for use on a left-hand side.
    pub(super) fn lhs_name(&mut self, ce: &ClassExpression) -> Atom {
        if let Some(a) = atom_of(ce) {
            return a;
        }
        if let Some(a) = self.lhs_cache.get(ce) {
            return a.clone();
        }
        let x = self.fresh();
        self.lhs_cache.insert(ce.clone(), x.clone());
        self.gci(ce, &ClassExpression::Named(x.as_name().unwrap().clone()));
        x
    }

    /// Name `X` with `X ⊑ ce`, for use on a right-hand side.
    pub(super) fn rhs_name(&mut self, ce: &ClassExpression) -> Atom {
        if let Some(a) = atom_of(ce) {
            return a;
        }
        if let Some(a) = self.rhs_cache.get(ce) {
            return a.clone();
        }
        let x = self.fresh();
        self.rhs_cache.insert(ce.clone(), x.clone());
        self.gci(&ClassExpression::Named(x.as_name().unwrap().clone()), ce);
        x
    }

    fn gci(&mut self, lhs: &ClassExpression, rhs: &ClassExpression) {
        if *lhs == ClassExpression::Nothing || *rhs == ClassExpression::Thing {
            return;
        }
        match (atom_of(lhs), atom_of(rhs)) {
            (Some(a), Some(b)) => self.emit(NormalAxiom::Sub(a, b)),
            (None, Some(b)) => self.complex_lhs(lhs, b),
            (Some(a), None) => self.complex_rhs(a, rhs),
            (None, None) => {
                let x = self.rhs_name(rhs);
                self.complex_lhs(lhs, x);
            }
        }
    }

    fn complex_lhs(&mut self, lhs: &ClassExpression, b: Atom) {
        match lhs {
            ClassExpression::IntersectionOf(_) => {
                let mut conjuncts = Vec::new();
                flatten_conjuncts(lhs, &mut conjuncts);
                if conjuncts.contains(&ClassExpression::Nothing) {
                    return;
                }
                let atoms: Vec<Atom> = conjuncts.iter().map(|c| self.lhs_name(c)).collect();
                match atoms.as_slice() {
                    [] => self.emit(NormalAxiom::Sub(Atom::Top, b)),
                    [a] => self.emit(NormalAxiom::Sub(a.clone(), b)),
                    [first, rest @ ..] => {
                        let mut acc = first.clone();
                        for (i, next) in rest.iter().enumerate() {
                            let target = if i + 1 == rest.len() { b.clone() } else { self.fresh() };
                            self.emit(NormalAxiom::Conj(acc, next.clone(), target.clone()));
                            acc = target;
                        }
                    }
                }
            }
            ClassExpression::SomeValuesFrom { property, filler } => {
                let a = self.lhs_name(filler);
                self.emit(NormalAxiom::SomeSub(property.clone(), a, b));
            }
            _ => unreachable!("atomic expressions handled by caller"),
        }
    }

    fn complex_rhs(&mut self, a: Atom, rhs: &ClassExpression) {
        match rhs {
            ClassExpression::IntersectionOf(ops) => {
                for op in ops {
                    let lhs = match &a {
                        Atom::Top => ClassExpression::Thing,
                        Atom::Bottom => ClassExpression::Nothing,
                        Atom::Name(iri) => ClassExpression::Named(iri.clone()),
                    };
                    self.gci(&lhs, op);
                }
            }
            ClassExpression::SomeValuesFrom { property, filler } => {
                let b = self.rhs_name(filler);
                self.emit(NormalAxiom::SubSome(a, property.clone(), b));
            }
            _ => unreachable!("atomic expressions handled by caller"),
        }
    }
}

fn reserved(ns: &str, n: usize) -> Iri {
    Iri::new(format!("{ns}{n}")).expect("reserved IRI")
}

/// Normalizes every EL axiom of `o`.
pub fn normalize(o: &Ontology) -> Result<NormalizedTBox, ReasonerError> {
    Ok(normalizer_for(o)?.out)
}

pub(super) fn normalizer_for(o: &Ontology) -> Result<Normalizer, ReasonerError> {
    let profile = check_profile(o);
    if let Some(v) = profile.violations.first() {
        return Err(ReasonerError::Unsupported(format!(
            "axiom {}: {}",
            v.axiom_index, v.reason
        )));
    }
    let mut n = Normalizer::default();
    for ax in &o.axioms {
        for (kind, iri) in ax.entities() {
            if kind == EntityKind::Class {
                n.out.input_classes.insert(iri.clone());
            }
        }
    }
    for (idx, ax) in o.axioms.iter().enumerate() {
        match ax {
            Axiom::SubClassOf { sub, sup } => n.gci(sub, sup),
            Axiom::EquivalentClasses(a, b) => {
                n.gci(a, b);
                n.gci(b, a);
            }
            Axiom::SubObjectPropertyOf { sub, sup } => {
                n.out.role_inclusions.insert((sub.clone(), sup.clone()));
            }
            Axiom::ObjectPropertyDomain { property, domain } => {
                n.gci(&ClassExpression::some(property, ClassExpression::Thing), domain);
            }
            Axiom::ClassAssertion { class, individual } => {
                let count = n.out.individuals.len();
                let ind = n
                    .out
                    .individuals
                    .entry(individual.clone())
                    .or_insert_with(|| reserved(INDIVIDUAL_PREFIX, count))
                    .clone();
                let name = reserved(ASSERTION_PREFIX, n.out.assertions.len());
                n.out.assertions.push(AssertionName {
                    individual: individual.clone(),
                    class: class.clone(),
                    name: name.clone(),
                });
                n.emit(NormalAxiom::Sub(Atom::Name(ind), Atom::Name(name.clone())));
                n.gci(&ClassExpression::Named(name), class);
            }
            Axiom::ObjectPropertyRange { .. } | Axiom::DataPropertyDomain { .. } => {
                n.out.not_internalized.push(idx);
            }
            Axiom::Declaration(..) => {}
        }
    }
    debug_assert!(n.out.input_classes.iter().all(|c| !c.as_str().starts_with(RESERVED_NS)));
    Ok(n)
}
