//! Entailment of arbitrary EL axioms against a premise ontology.
//!
//! A query `C ⊑ D` is answered by extending the premise with `X ⊑ C` and
//! `D ⊑ Y` for names `X`, `Y` not in the premise and checking `Y ∈ S(X)`.
//! Any countermodel of `C ⊑ D` extends to one of `X ⊑ Y` by taking
//! `Xᴵ = {x}` for a witness `x ∈ Cᴵ \ Dᴵ` and `Yᴵ = Dᴵ`.

use crate::iri::Iri;
use crate::ontology::{check_profile, Axiom, ClassExpression, Ontology};

use super::normalize::normalizer_for;
use super::saturate::classify;
use super::{Atom, ReasonerError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomEntailment {
    Entailed,
    /// Index of the first conclusion axiom that does not follow.
    NotEntailed {
        axiom_index: usize,
    },
    Unknown {
        axiom_index: Option<usize>,
        reason: String,
    },
}

enum Query {
    Sub(ClassExpression, ClassExpression),
    Instance(Iri, ClassExpression),
    Role(Iri, Iri),
    Range(Iri, ClassExpression),
    DataDomain(Iri, ClassExpression),
    Trivial,
}

fn queries_for(ax: &Axiom) -> Vec<Query> {
    match ax {
        Axiom::SubClassOf { sub, sup } => vec![Query::Sub(sub.clone(), sup.clone())],
        Axiom::EquivalentClasses(a, b) => vec![Query::Sub(a.clone(), b.clone()), Query::Sub(b.clone(), a.clone())],
        Axiom::ObjectPropertyDomain { property, domain } => vec![Query::Sub(
            ClassExpression::some(property, ClassExpression::Thing),
            domain.clone(),
        )],
        Axiom::ClassAssertion { class, individual } => vec![Query::Instance(individual.clone(), class.clone())],
        Axiom::SubObjectPropertyOf { sub, sup } => vec![Query::Role(sub.clone(), sup.clone())],
        Axiom::ObjectPropertyRange { property, range } => vec![Query::Range(property.clone(), range.clone())],
        Axiom::DataPropertyDomain { property, domain } => vec![Query::DataDomain(property.clone(), domain.clone())],
        Axiom::Declaration(..) => vec![Query::Trivial],
    }
}

/// Does `premise` entail `sub ⊑ sup`?
pub fn entails_expression(
    premise: &Ontology,
    sub: &ClassExpression,
    sup: &ClassExpression,
) -> Result<bool, ReasonerError> {
    let conclusion = Ontology::with_axioms([Axiom::SubClassOf {
        sub: sub.clone(),
        sup: sup.clone(),
    }]);
    match entails_axioms(premise, &conclusion) {
        AxiomEntailment::Entailed => Ok(true),
        AxiomEntailment::NotEntailed { .. } => Ok(false),
        AxiomEntailment::Unknown { reason, .. } => Err(ReasonerError::Unsupported(reason)),
    }
}

/// Checks every axiom of `conclusion` against `premise`, stopping at the
/// first one that fails. Range and data-property-domain conclusions are
/// decided only through matching premise axioms; anything else about them
/// is `Unknown`.
pub fn entails_axioms(premise: &Ontology, conclusion: &Ontology) -> AxiomEntailment {
    if let Some(v) = check_profile(conclusion).violations.first() {
        return AxiomEntailment::Unknown {
            axiom_index: Some(v.axiom_index),
            reason: v.reason.clone(),
        };
    }
    let mut n = match normalizer_for(premise) {
        Ok(n) => n,
        Err(e) => {
            return AxiomEntailment::Unknown {
                axiom_index: None,
                reason: e.to_string(),
            }
        }
    };
    let per_axiom: Vec<Vec<Query>> = conclusion.axioms.iter().map(queries_for).collect();
    // name every query before saturating once
    let mut pairs: Vec<Vec<Option<(Atom, Atom)>>> = Vec::new();
    for qs in &per_axiom {
        let mut row = Vec::new();
        for q in qs {
            row.push(match q {
                Query::Sub(c, d) => Some((n.rhs_name(c), n.lhs_name(d))),
                Query::Instance(ind, c) => n
                    .out
                    .individuals
                    .get(ind)
                    .cloned()
                    .map(|i| (Atom::Name(i), n.lhs_name(c))),
                Query::Range(_, c) | Query::DataDomain(_, c) => Some((Atom::Bottom, n.lhs_name(c))),
                _ => None,
            });
        }
        pairs.push(row);
    }
    let tbox = n.out;
    let result = classify(&tbox);
    if super::is_inconsistent(&result) {
        return AxiomEntailment::Entailed;
    }
    let holds = |sub: &Atom, sup: &Atom| {
        sub == sup || *sup == Atom::Top || result.contains(sub, sup) || result.is_unsatisfiable(sub)
    };

    for (idx, (qs, row)) in per_axiom.iter().zip(&pairs).enumerate() {
        for (q, pair) in qs.iter().zip(row) {
            let ok = match q {
                Query::Trivial => true,
                Query::Sub(..) => {
                    let (a, b) = pair.as_ref().expect("named query");
                    holds(a, b)
                }
                Query::Instance(_, c) => match pair {
                    Some((a, b)) => holds(a, b),
                    None => *c == ClassExpression::Thing,
                },
                Query::Role(r, s) => r == s || result.role_subsumed(r, s),
                Query::Range(r, _) => {
                    let (_, goal) = pair.as_ref().expect("named query");
                    let decided = premise.axioms.iter().any(|ax| match ax {
                        Axiom::ObjectPropertyRange { property, range } => {
                            (property == r || result.role_subsumed(r, property)) && named_entails(&result, range, goal)
                        }
                        _ => false,
                    });
                    if !decided {
                        return AxiomEntailment::Unknown {
                            axiom_index: Some(idx),
                            reason: "range conclusions are decided only by premise range axioms".into(),
                        };
                    }
                    true
                }
                Query::DataDomain(p, _) => {
                    let (_, goal) = pair.as_ref().expect("named query");
                    let decided = premise.axioms.iter().any(|ax| match ax {
                        Axiom::DataPropertyDomain { property, domain } => {
                            property == p && named_entails(&result, domain, goal)
                        }
                        _ => false,
                    });
                    if !decided {
                        return AxiomEntailment::Unknown {
                            axiom_index: Some(idx),
                            reason: "data property domains are decided only by premise domain axioms".into(),
                        };
                    }
                    true
                }
            };
            if !ok {
                return AxiomEntailment::NotEntailed { axiom_index: idx };
            }
        }
    }
    AxiomEntailment::Entailed
}

/// `ce ⊑ goal` where `goal` names the query's right-hand side. Only atomic
/// `ce` is checked; a complex premise range counts as not deciding.
fn named_entails(result: &super::ClassificationResult, ce: &ClassExpression, goal: &Atom) -> bool {
    let atom = match ce {
        ClassExpression::Named(i) => Atom::Name(i.clone()),
        ClassExpression::Thing => Atom::Top,
        ClassExpression::Nothing => return true,
        _ => return false,
    };
    atom == *goal || *goal == Atom::Top || result.contains(&atom, goal) || result.is_unsatisfiable(&atom)
}
