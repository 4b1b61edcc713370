use std::collections::{BTreeMap, BTreeSet};

use super::model::{Axiom, ClassExpression, EntityKind, Ontology};
use super::parser::SkippedConstruct;
use crate::iri::Iri;

pub const EL_PROFILE: &str = "OWL 2 EL (tool subset)";
pub const OUTSIDE_PROFILE: &str = "outside subset";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileViolation {
    pub axiom_index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileReport {
    pub profile_name: &'static str,
    pub violations: Vec<ProfileViolation>,
}

impl ProfileReport {
    pub fn in_profile(&self) -> bool {
        self.violations.is_empty()
    }

    fn from_violations(violations: Vec<ProfileViolation>) -> Self {
        let profile_name = if violations.is_empty() {
            EL_PROFILE
        } else {
            OUTSIDE_PROFILE
        };
        ProfileReport {
            profile_name,
            violations,
        }
    }
}

/// Checks structural conditions the parser cannot see on its own: values
/// built in code, and names in the tool's reserved namespace.
pub fn check_profile(o: &Ontology) -> ProfileReport {
    let mut violations = Vec::new();
    for (idx, ax) in o.axioms.iter().enumerate() {
        for ce in ax.class_expressions() {
            if let Some(reason) = malformed(ce) {
                violations.push(ProfileViolation {
                    axiom_index: idx,
                    reason,
                });
            }
        }
        for (_, iri) in ax.entities() {
            if iri.is_reserved() {
                violations.push(ProfileViolation {
                    axiom_index: idx,
                    reason: format!("IRI {iri} uses the reserved urn:ontomvn: namespace"),
                });
                break;
            }
        }
    }
    ProfileReport::from_violations(violations)
}

/// Profile check that also counts axioms dropped by lenient parsing.
pub fn check_profile_with_skipped(o: &Ontology, skipped: &[SkippedConstruct]) -> ProfileReport {
    let mut report = check_profile(o);
    let mut violations: Vec<ProfileViolation> = skipped
        .iter()
        .map(|s| ProfileViolation {
            axiom_index: s.axiom_index,
            reason: format!("{} at {}:{} is not in the EL subset", s.construct, s.line, s.column),
        })
        .collect();
    violations.append(&mut report.violations);
    violations.sort_by_key(|v| v.axiom_index);
    ProfileReport::from_violations(violations)
}

fn malformed(ce: &ClassExpression) -> Option<String> {
    match ce {
        ClassExpression::IntersectionOf(ops) => {
            if ops.len() < 2 {
                return Some("ObjectIntersectionOf with fewer than two operands".into());
            }
            let distinct: BTreeSet<_> = ops.iter().collect();
            if distinct.len() != ops.len() {
                return Some("ObjectIntersectionOf with duplicate operands".into());
            }
            ops.iter().find_map(malformed)
        }
        ClassExpression::SomeValuesFrom { filler, .. } => malformed(filler),
        _ => None,
    }
}

/// Entities of an ontology partitioned by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub classes: BTreeSet<Iri>,
    pub object_properties: BTreeSet<Iri>,
    pub data_properties: BTreeSet<Iri>,
    pub individuals: BTreeSet<Iri>,
    /// IRIs used in positions of more than one kind.
    pub warnings: Vec<String>,
}

impl Signature {
    pub fn len(&self) -> usize {
        self.classes.len() + self.object_properties.len() + self.data_properties.len() + self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind_of(&self, iri: &Iri) -> Option<EntityKind> {
        if self.classes.contains(iri) {
            Some(EntityKind::Class)
        } else if self.object_properties.contains(iri) {
            Some(EntityKind::ObjectProperty)
        } else if self.data_properties.contains(iri) {
            Some(EntityKind::DataProperty)
        } else if self.individuals.contains(iri) {
            Some(EntityKind::NamedIndividual)
        } else {
            None
        }
    }
}

pub fn signature(o: &Ontology) -> Signature {
    let mut assigned: BTreeMap<&Iri, EntityKind> = BTreeMap::new();
    let mut warnings = Vec::new();

    // Declarations first, in document order.
    for ax in &o.axioms {
        if let Axiom::Declaration(kind, iri) = ax {
            match assigned.get(iri) {
                Some(existing) if existing != kind => warnings.push(format!(
                    "{iri} declared as both {} and {}",
                    existing.keyword(),
                    kind.keyword()
                )),
                Some(_) => {}
                None => {
                    assigned.insert(iri, *kind);
                }
            }
        }
    }
    for ax in &o.axioms {
        if matches!(ax, Axiom::Declaration(..)) {
            continue;
        }
        for (kind, iri) in ax.entities() {
            match assigned.get(iri) {
                Some(existing) if *existing != kind => {
                    let msg = format!(
                        "{iri} used as {} but classified as {}",
                        kind.keyword(),
                        existing.keyword()
                    );
                    if !warnings.contains(&msg) {
                        warnings.push(msg);
                    }
                }
                Some(_) => {}
                None => {
                    assigned.insert(iri, kind);
                }
            }
        }
    }

    let mut sig = Signature {
        warnings,
        ..Default::default()
    };
    for (iri, kind) in assigned {
        let set = match kind {
            EntityKind::Class => &mut sig.classes,
            EntityKind::ObjectProperty => &mut sig.object_properties,
            EntityKind::DataProperty => &mut sig.data_properties,
            EntityKind::NamedIndividual => &mut sig.individuals,
        };
        set.insert(iri.clone());
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    #[test]
    fn empty_ontology_is_el() {
        let r = check_profile(&Ontology::default());
        assert_eq!(r.profile_name, EL_PROFILE);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn el_constructors_pass() {
        let o =
            parse_ontology("Ontology(SubClassOf(<a:A> ObjectSomeValuesFrom(<a:r> ObjectIntersectionOf(<a:B> <a:C>))))")
                .unwrap();
        assert!(check_profile(&o).in_profile());
    }

    #[test]
    fn hand_built_degenerate_intersection_flagged() {
        let a = ClassExpression::Named(Iri::new("a:A").unwrap());
        let o = Ontology::with_axioms([Axiom::SubClassOf {
            sub: ClassExpression::IntersectionOf(vec![a.clone()]),
            sup: a,
        }]);
        let r = check_profile(&o);
        assert_eq!(r.profile_name, OUTSIDE_PROFILE);
        assert_eq!(r.violations[0].axiom_index, 0);
    }

    #[test]
    fn reserved_namespace_flagged() {
        let o = parse_ontology("Ontology(SubClassOf(<urn:ontomvn:nnf#X0> <a:B>))").unwrap();
        assert!(!check_profile(&o).in_profile());
    }

    #[test]
    fn empty_signature() {
        assert!(signature(&Ontology::default()).is_empty());
    }

    #[test]
    fn positional_inference() {
        let o =
            parse_ontology("Ontology(SubClassOf(<a:A> ObjectSomeValuesFrom(<a:r> <a:B>)) ClassAssertion(<a:A> <a:i>))")
                .unwrap();
        let s = signature(&o);
        assert_eq!(s.classes.len(), 2);
        assert!(s.object_properties.contains(&Iri::new("a:r").unwrap()));
        assert!(s.individuals.contains(&Iri::new("a:i").unwrap()));
    }

    #[test]
    fn declarations_take_precedence() {
        let o = parse_ontology("Ontology(SubClassOf(<a:X> <a:B>) Declaration(NamedIndividual(<a:X>)))").unwrap();
        let s = signature(&o);
        assert!(s.individuals.contains(&Iri::new("a:X").unwrap()));
        assert!(!s.classes.contains(&Iri::new("a:X").unwrap()));
        assert_eq!(s.warnings.len(), 1);
    }
}
