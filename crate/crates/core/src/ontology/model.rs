use std::collections::BTreeSet;

use crate::iri::Iri;

/// EL class expressions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassExpression {
    Named(Iri),
    Thing,
    Nothing,
    /// At least two operands, no duplicate direct children.
    IntersectionOf(Vec<ClassExpression>),
    SomeValuesFrom {
        property: Iri,
        filler: Box<ClassExpression>,
    },
}

impl ClassExpression {
    pub fn named(iri: &Iri) -> Self {
        ClassExpression::Named(iri.clone())
    }

    pub fn some(property: &Iri, filler: ClassExpression) -> Self {
        ClassExpression::SomeValuesFrom {
            property: property.clone(),
            filler: Box::new(filler),
        }
    }

    /// Builds a conjunction, dropping duplicate operands. A single remaining
    /// operand is returned as-is.
    pub fn intersection(operands: impl IntoIterator<Item = ClassExpression>) -> Self {
        let mut out: Vec<ClassExpression> = Vec::new();
        for op in operands {
            if !out.contains(&op) {
                out.push(op);
            }
        }
        match out.len() {
            0 => ClassExpression::Thing,
            1 => out.pop().unwrap(),
            _ => ClassExpression::IntersectionOf(out),
        }
    }

    pub fn as_named(&self) -> Option<&Iri> {
        match self {
            ClassExpression::Named(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            ClassExpression::Named(_) | ClassExpression::Thing | ClassExpression::Nothing
        )
    }

    /// Visits every named class and every object property in the expression.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(EntityKind, &'a Iri)) {
        match self {
            ClassExpression::Named(iri) => f(EntityKind::Class, iri),
            ClassExpression::Thing | ClassExpression::Nothing => {}
            ClassExpression::IntersectionOf(ops) => {
                for op in ops {
                    op.visit(f);
                }
            }
            ClassExpression::SomeValuesFrom { property, filler } => {
                f(EntityKind::ObjectProperty, property);
                filler.visit(f);
            }
        }
    }

    pub fn named_classes(&self) -> BTreeSet<&Iri> {
        let mut out = BTreeSet::new();
        self.visit(&mut |kind, iri| {
            if kind == EntityKind::Class {
                out.insert(iri);
            }
        });
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    NamedIndividual,
}

impl EntityKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::Class => "Class",
            EntityKind::ObjectProperty => "ObjectProperty",
            EntityKind::DataProperty => "DataProperty",
            EntityKind::NamedIndividual => "NamedIndividual",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    SubClassOf { sub: ClassExpression, sup: ClassExpression },
    EquivalentClasses(ClassExpression, ClassExpression),
    Declaration(EntityKind, Iri),
    SubObjectPropertyOf { sub: Iri, sup: Iri },
    ObjectPropertyDomain { property: Iri, domain: ClassExpression },
    ObjectPropertyRange { property: Iri, range: ClassExpression },
    DataPropertyDomain { property: Iri, domain: ClassExpression },
    ClassAssertion { class: ClassExpression, individual: Iri },
}

impl Axiom {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Axiom::SubClassOf { .. } => "SubClassOf",
            Axiom::EquivalentClasses(..) => "EquivalentClasses",
            Axiom::Declaration(..) => "Declaration",
            Axiom::SubObjectPropertyOf { .. } => "SubObjectPropertyOf",
            Axiom::ObjectPropertyDomain { .. } => "ObjectPropertyDomain",
            Axiom::ObjectPropertyRange { .. } => "ObjectPropertyRange",
            Axiom::DataPropertyDomain { .. } => "DataPropertyDomain",
            Axiom::ClassAssertion { .. } => "ClassAssertion",
        }
    }

    /// The class expressions occurring directly in this axiom.
    pub fn class_expressions(&self) -> Vec<&ClassExpression> {
        match self {
            Axiom::SubClassOf { sub, sup } => vec![sub, sup],
            Axiom::EquivalentClasses(a, b) => vec![a, b],
            Axiom::ObjectPropertyDomain { domain, .. } | Axiom::DataPropertyDomain { domain, .. } => {
                vec![domain]
            }
            Axiom::ObjectPropertyRange { range, .. } => vec![range],
            Axiom::ClassAssertion { class, .. } => vec![class],
            Axiom::Declaration(..) | Axiom::SubObjectPropertyOf { .. } => vec![],
        }
    }

    /// Every IRI mentioned by the axiom, with the entity kind implied by its
    /// position.
    pub fn entities(&self) -> Vec<(EntityKind, &Iri)> {
        let mut out = Vec::new();
        match self {
            Axiom::Declaration(kind, iri) => out.push((*kind, iri)),
            Axiom::SubObjectPropertyOf { sub, sup } => {
                out.push((EntityKind::ObjectProperty, sub));
                out.push((EntityKind::ObjectProperty, sup));
            }
            Axiom::ObjectPropertyDomain { property, .. } | Axiom::ObjectPropertyRange { property, .. } => {
                out.push((EntityKind::ObjectProperty, property))
            }
            Axiom::DataPropertyDomain { property, .. } => out.push((EntityKind::DataProperty, property)),
            Axiom::ClassAssertion { individual, .. } => out.push((EntityKind::NamedIndividual, individual)),
            Axiom::SubClassOf { .. } | Axiom::EquivalentClasses(..) => {}
        }
        for ce in self.class_expressions() {
            ce.visit(&mut |kind, iri| out.push((kind, iri)));
        }
        out
    }

    pub fn mentions(&self, iri: &Iri) -> bool {
        self.entities().iter().any(|(_, e)| *e == iri)
    }
}

/// A parsed ontology document.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ontology {
    pub iri: Option<Iri>,
    pub imports: Vec<Iri>,
    /// Header `rdfs:comment`, the only annotation kept.
    pub description: Option<String>,
    pub axioms: Vec<Axiom>,
}

impl Ontology {
    pub fn new(iri: Option<Iri>) -> Self {
        Ontology {
            iri,
            ..Default::default()
        }
    }

    pub fn with_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        Ontology {
            axioms: axioms.into_iter().collect(),
            ..Default::default()
        }
    }

    /// Appends an import unless already present.
    pub fn add_import(&mut self, iri: Iri) {
        if !self.imports.contains(&iri) {
            self.imports.push(iri);
        }
    }

    /// Union of axioms and imports, keeping `self`'s header.
    pub fn merged_with<'a>(&self, others: impl IntoIterator<Item = &'a Ontology>) -> Ontology {
        let mut out = self.clone();
        for other in others {
            for imp in &other.imports {
                out.add_import(imp.clone());
            }
            out.axioms.extend(other.axioms.iter().cloned());
        }
        out
    }
}
