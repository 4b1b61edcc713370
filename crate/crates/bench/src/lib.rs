//! Synthetic ontologies for the benchmarks.

use ontomvn_core::ontology::parse_ontology;
use ontomvn_core::Ontology;

/// A taxonomy of `n` classes, each with a parent, an existential to a
/// sibling part, and a defined class per ten nodes.
pub fn taxonomy(n: usize) -> Ontology {
    let mut text = String::from("Prefix(:=<http://example.org/bench#>)\nOntology(<http://example.org/bench>\n");
    text.push_str("SubObjectPropertyOf(:hasPart :relatedTo)\n");
    for i in 1..n {
        let parent = (i - 1) / 3;
        text.push_str(&format!("SubClassOf(:C{i} :C{parent})\n"));
        if i % 4 == 0 {
            text.push_str(&format!(
                "SubClassOf(:C{i} ObjectSomeValuesFrom(:hasPart :C{}))\n",
                i / 2
            ));
        }
        if i % 10 == 0 {
            text.push_str(&format!(
                "EquivalentClasses(:D{i} ObjectIntersectionOf(:C{parent} ObjectSomeValuesFrom(:relatedTo :C{})))\n",
                i / 4
            ));
        }
    }
    text.push_str(")\n");
    parse_ontology(&text).expect("generated ontology parses")
}

/// `base` with one extra subsumption near the root, so a diff has both
/// syntactic and entailment changes.
pub fn perturbed(base: &Ontology) -> Ontology {
    let mut o = base.clone();
    let extra = parse_ontology("Ontology(SubClassOf(<http://example.org/bench#C1> <http://example.org/bench#C2>))")
        .expect("axiom parses");
    o.axioms.extend(extra.axioms);
    o
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_sizes() {
        let o = taxonomy(100);
        assert!(o.axioms.len() > 100);
        assert_eq!(perturbed(&o).axioms.len(), o.axioms.len() + 1);
    }
}
