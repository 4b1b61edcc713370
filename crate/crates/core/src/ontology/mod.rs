//! Ontology documents in a functional-syntax subset covering the EL
//! constructors: parsing, serialization, signature and profile checks.

mod model;
mod parser;
mod profile;
mod writer;

pub use model::{Axiom, ClassExpression, EntityKind, Ontology};
pub use parser::{parse_ontology, parse_ontology_lenient, LenientParse, ParseError, SkippedConstruct};
pub use profile::{
    check_profile, check_profile_with_skipped, signature, ProfileReport, ProfileViolation, Signature, EL_PROFILE,
    OUTSIDE_PROFILE,
};
pub use writer::{axiom_to_string, class_expression_to_string, serialize_ontology};
