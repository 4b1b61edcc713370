use std::fmt::Write;

use super::model::{Axiom, ClassExpression, Ontology};
use crate::iri::Iri;

/// Serializes with full IRIs, one item per line.
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut out = String::from("Ontology(");
    if let Some(iri) = &o.iri {
        write_iri(&mut out, iri);
    }
    out.push('\n');
    for imp in &o.imports {
        out.push_str("Import(");
        write_iri(&mut out, imp);
        out.push_str(")\n");
    }
    if let Some(desc) = &o.description {
        let _ = writeln!(out, "Annotation(rdfs:comment \"{}\")", escape_literal(desc));
    }
    for ax in &o.axioms {
        out.push_str(&axiom_to_string(ax));
        out.push('\n');
    }
    out.push_str(")\n");
    out
}

pub fn axiom_to_string(ax: &Axiom) -> String {
    let mut s = String::new();
    write_axiom(&mut s, ax);
    s
}

pub fn class_expression_to_string(ce: &ClassExpression) -> String {
    let mut s = String::new();
    write_ce(&mut s, ce);
    s
}

fn escape_literal(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn write_iri(out: &mut String, iri: &Iri) {
    out.push('<');
    out.push_str(iri.as_str());
    out.push('>');
}

fn write_ce(out: &mut String, ce: &ClassExpression) {
    match ce {
        ClassExpression::Named(iri) => write_iri(out, iri),
        ClassExpression::Thing => out.push_str("owl:Thing"),
        ClassExpression::Nothing => out.push_str("owl:Nothing"),
        ClassExpression::IntersectionOf(ops) => {
            out.push_str("ObjectIntersectionOf(");
            for (i, op) in ops.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_ce(out, op);
            }
            out.push(')');
        }
        ClassExpression::SomeValuesFrom { property, filler } => {
            out.push_str("ObjectSomeValuesFrom(");
            write_iri(out, property);
            out.push(' ');
            write_ce(out, filler);
            out.push(')');
        }
    }
}

fn write_axiom(out: &mut String, ax: &Axiom) {
    out.push_str(ax.kind_name());
    out.push('(');
    match ax {
        Axiom::SubClassOf { sub, sup } => {
            write_ce(out, sub);
            out.push(' ');
            write_ce(out, sup);
        }
        Axiom::EquivalentClasses(a, b) => {
            write_ce(out, a);
            out.push(' ');
            write_ce(out, b);
        }
        Axiom::Declaration(kind, iri) => {
            out.push_str(kind.keyword());
            out.push('(');
            write_iri(out, iri);
            out.push(')');
        }
        Axiom::SubObjectPropertyOf { sub, sup } => {
            write_iri(out, sub);
            out.push(' ');
            write_iri(out, sup);
        }
        Axiom::ObjectPropertyDomain { property, domain: ce }
        | Axiom::ObjectPropertyRange { property, range: ce }
        | Axiom::DataPropertyDomain { property, domain: ce } => {
            write_iri(out, property);
            out.push(' ');
            write_ce(out, ce);
        }
        Axiom::ClassAssertion { class, individual } => {
            write_ce(out, class);
            out.push(' ');
            write_iri(out, individual);
        }
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::model::EntityKind;
    use crate::ontology::parse_ontology;

    #[test]
    fn empty_ontology_layout() {
        assert_eq!(serialize_ontology(&Ontology::default()), "Ontology(\n)\n");
    }

    #[test]
    fn declaration_line() {
        let money = Iri::new("www.xfront.com/owl/ontologies/camera/#Money").unwrap();
        let o = Ontology::with_axioms([Axiom::Declaration(EntityKind::Class, money)]);
        assert!(serialize_ontology(&o).contains("Declaration(Class(<www.xfront.com/owl/ontologies/camera/#Money>))"));
    }

    #[test]
    fn description_escaping_round_trips() {
        let o = Ontology {
            description: Some("a \"b\" \\ c".into()),
            ..Default::default()
        };
        assert_eq!(parse_ontology(&serialize_ontology(&o)).unwrap(), o);
    }
}
