//! OWL 2 EL classification by normalization and completion rules, with
//! entailment, satisfiability and consistency checks built on top.

mod normalize;
mod query;
mod saturate;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::iri::{Iri, OWL_NS};
use crate::ontology::{parse_ontology, ClassExpression, Ontology};

pub use normalize::{
    normalize, AssertionName, Atom, NormalAxiom, NormalizedTBox, ASSERTION_PREFIX, FRESH_PREFIX, INDIVIDUAL_PREFIX,
};
pub use query::{entails_axioms, entails_expression, AxiomEntailment};
pub use saturate::{classify, ClassificationResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("unsupported construct: {0}")]
    Unsupported(String),
}

/// Normalizes and classifies in one step.
pub fn classify_ontology(o: &Ontology) -> Result<ClassificationResult, ReasonerError> {
    Ok(classify(&normalize(o)?))
}

fn atom_for_iri(iri: &Iri) -> Atom {
    match iri.as_str().strip_prefix(OWL_NS) {
        Some("Thing") => Atom::Top,
        Some("Nothing") => Atom::Bottom,
        _ => Atom::Name(iri.clone()),
    }
}

/// True when no model exists at all: `⊤` is unsatisfiable or some named
/// individual cannot be placed.
pub fn is_inconsistent(result: &ClassificationResult) -> bool {
    result.top_unsatisfiable()
        || result
            .tbox()
            .individuals
            .values()
            .any(|c| result.is_unsatisfiable(&Atom::Name(c.clone())))
}

/// Named subsumption `sub ⊑ sup`. `owl:Thing` and `owl:Nothing` given by IRI
/// are read as `⊤` and `⊥`. A `sub` outside the classified signature is
/// treated as a fresh name. An inconsistent ontology entails everything.
pub fn entails(result: &ClassificationResult, sub: &Iri, sup: &Iri) -> bool {
    let (a, b) = (atom_for_iri(sub), atom_for_iri(sup));
    if a == b || b == Atom::Top || is_inconsistent(result) {
        return true;
    }
    match result.subsumers_of(&a) {
        Some(s) => s.contains(&b) || s.contains(&Atom::Bottom),
        None => a == Atom::Bottom,
    }
}

/// Right-hand side of an atomic subsumption: a named class or `⊥`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subsumer {
    Class(Iri),
    Nothing,
}

impl fmt::Display for Subsumer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsumer::Class(iri) => write!(f, "<{iri}>"),
            Subsumer::Nothing => f.write_str("owl:Nothing"),
        }
    }
}

/// Entailed atomic subsumptions between named classes, without reflexive
/// and `⊤`-target pairs. Unsatisfiable classes show up as `(A, ⊥)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubsumptionSet {
    pub pairs: BTreeSet<(Iri, Subsumer)>,
}

impl SubsumptionSet {
    pub fn compute(result: &ClassificationResult, signature: &BTreeSet<Iri>) -> Self {
        let mut pairs = BTreeSet::new();
        for sub in signature {
            for sup in signature {
                if sub != sup && entails(result, sub, sup) {
                    pairs.insert((sub.clone(), Subsumer::Class(sup.clone())));
                }
            }
            if entails(result, sub, &Iri::new(format!("{OWL_NS}Nothing")).unwrap()) {
                pairs.insert((sub.clone(), Subsumer::Nothing));
            }
        }
        SubsumptionSet { pairs }
    }

    pub fn difference(&self, other: &SubsumptionSet) -> SubsumptionSet {
        SubsumptionSet {
            pairs: self.pairs.difference(&other.pairs).cloned().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent,
    Unknown,
}

impl Consistency {
    pub fn as_str(self) -> &'static str {
        match self {
            Consistency::Consistent => "consistent",
            Consistency::Inconsistent => "inconsistent",
            Consistency::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `owl:Thing` itself is unsatisfiable.
    Top,
    UnsatisfiableClass(Iri),
    /// An assertion that contributes to an individual having no model.
    Assertion {
        individual: Iri,
        class: ClassExpression,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Top => f.write_str("owl:Thing is unsatisfiable"),
            Witness::UnsatisfiableClass(c) => write!(f, "unsatisfiable class <{c}>"),
            Witness::Assertion { individual, class } => write!(
                f,
                "ClassAssertion({} <{individual}>) cannot be satisfied",
                crate::ontology::class_expression_to_string(class)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyVerdict {
    pub status: Consistency,
    pub witnesses: Vec<Witness>,
    pub reason: Option<String>,
}

impl ConsistencyVerdict {
    pub fn unknown(reason: impl Into<String>) -> Self {
        ConsistencyVerdict {
            status: Consistency::Unknown,
            witnesses: Vec::new(),
            reason: Some(reason.into()),
        }
    }
}

/// Consistency of a parsed ontology. Unsatisfiable classes are listed as
/// witnesses even when the ontology as a whole is consistent.
pub fn consistent(o: &Ontology) -> ConsistencyVerdict {
    let result = match classify_ontology(o) {
        Ok(r) => r,
        Err(e) => return ConsistencyVerdict::unknown(e.to_string()),
    };
    let tbox = result.tbox();
    let mut witnesses = Vec::new();
    let inconsistent;
    if result.top_unsatisfiable() {
        witnesses.push(Witness::Top);
        inconsistent = true;
    } else {
        let mut bad = false;
        for (individual, concept) in &tbox.individuals {
            if !result.is_unsatisfiable(&Atom::Name(concept.clone())) {
                continue;
            }
            bad = true;
            let own: Vec<_> = tbox.assertions.iter().filter(|a| &a.individual == individual).collect();
            let unsat: Vec<_> = own
                .iter()
                .filter(|a| result.is_unsatisfiable(&Atom::Name(a.name.clone())))
                .collect();
            // a single unsatisfiable assertion explains it, otherwise the
            // combination does
            let culprits: Vec<_> = if unsat.is_empty() { own.iter().collect() } else { unsat };
            witnesses.extend(culprits.into_iter().map(|a| Witness::Assertion {
                individual: individual.clone(),
                class: a.class.clone(),
            }));
        }
        inconsistent = bad;
    }
    for c in &tbox.input_classes {
        if result.is_unsatisfiable(&Atom::Name(c.clone())) && !result.top_unsatisfiable() {
            witnesses.push(Witness::UnsatisfiableClass(c.clone()));
        }
    }
    ConsistencyVerdict {
        status: if inconsistent {
            Consistency::Inconsistent
        } else {
            Consistency::Consistent
        },
        witnesses,
        reason: None,
    }
}

/// Consistency of a document; parse failures yield `unknown`.
pub fn consistent_text(text: &str) -> ConsistencyVerdict {
    match parse_ontology(text) {
        Ok(o) => consistent(&o),
        Err(e) => ConsistencyVerdict::unknown(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn classified(text: &str) -> ClassificationResult {
        classify_ontology(&parse_ontology(text).unwrap()).unwrap()
    }

    #[test]
    fn reflexive_entailment_for_unknown_names() {
        let r = classified("Ontology()");
        assert!(entails(&r, &iri("a:A"), &iri("a:A")));
        assert!(entails(&r, &iri("a:A"), &iri("http://www.w3.org/2002/07/owl#Thing")));
        assert!(!entails(&r, &iri("a:A"), &iri("a:B")));
    }

    #[test]
    fn money_is_a_thing() {
        let r = classified(
            "Ontology(Declaration(Class(<www.xfront.com/owl/ontologies/camera/#Money>)) \
             SubClassOf(<www.xfront.com/owl/ontologies/camera/#Money> owl:Thing))",
        );
        assert!(entails(
            &r,
            &iri("www.xfront.com/owl/ontologies/camera/#Money"),
            &iri("http://www.w3.org/2002/07/owl#Thing")
        ));
    }

    #[test]
    fn no_converse() {
        let r = classified("Ontology(SubClassOf(<a:A> <a:B>))");
        assert!(entails(&r, &iri("a:A"), &iri("a:B")));
        assert!(!entails(&r, &iri("a:B"), &iri("a:A")));
    }

    #[test]
    fn unsatisfiable_sub_entails_everything() {
        let r = classified("Ontology(SubClassOf(<a:A> owl:Nothing) Declaration(Class(<a:B>)))");
        assert!(entails(&r, &iri("a:A"), &iri("a:B")));
        let sig: BTreeSet<Iri> = [iri("a:A"), iri("a:B")].into();
        let set = SubsumptionSet::compute(&r, &sig);
        assert!(set.pairs.contains(&(iri("a:A"), Subsumer::Nothing)));
        assert!(set.pairs.contains(&(iri("a:A"), Subsumer::Class(iri("a:B")))));
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn empty_ontology_consistent() {
        assert_eq!(consistent(&Ontology::default()).status, Consistency::Consistent);
    }

    #[test]
    fn assertion_into_empty_class_is_inconsistent() {
        let v =
            consistent(&parse_ontology("Ontology(ClassAssertion(<a:A> <a:a>) SubClassOf(<a:A> owl:Nothing))").unwrap());
        assert_eq!(v.status, Consistency::Inconsistent);
        assert_eq!(
            v.witnesses[0],
            Witness::Assertion {
                individual: iri("a:a"),
                class: ClassExpression::Named(iri("a:A"))
            }
        );
    }

    #[test]
    fn combined_assertions_can_clash() {
        let v = consistent(
            &parse_ontology(
                "Ontology(ClassAssertion(<a:A> <a:x>) ClassAssertion(<a:B> <a:x>) \
                 SubClassOf(ObjectIntersectionOf(<a:A> <a:B>) owl:Nothing))",
            )
            .unwrap(),
        );
        assert_eq!(v.status, Consistency::Inconsistent);
        assert_eq!(v.witnesses.len(), 2);
    }

    #[test]
    fn unsatisfiable_class_without_instances_is_consistent() {
        let v = consistent(&parse_ontology("Ontology(SubClassOf(<a:A> owl:Nothing))").unwrap());
        assert_eq!(v.status, Consistency::Consistent);
        assert_eq!(v.witnesses, vec![Witness::UnsatisfiableClass(iri("a:A"))]);
    }

    #[test]
    fn unsupported_text_is_unknown() {
        let v = consistent_text("Ontology(SubClassOf(<a:A> ObjectUnionOf(<a:B> <a:C>)))");
        assert_eq!(v.status, Consistency::Unknown);
        assert!(v.reason.unwrap().contains("ObjectUnionOf"));
    }
}
