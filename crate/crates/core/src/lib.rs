//! Lifecycle management for ontology artifacts: repositories laid out like
//! Maven's, dependency and import resolution, OWL 2 EL classification,
//! semantic diff, test execution and documentation.

pub mod coordinate;
pub mod iri;
pub mod ontology;
#[cfg(feature = "test-oracle")]
pub mod oracle;
pub mod pom;
pub mod reasoner;
pub mod reporting;
pub mod repository;
pub mod resolver;
pub mod test_runner;
pub mod versioning;
pub mod xml;

pub use coordinate::{ArtifactCoordinate, ArtifactKey};
pub use iri::Iri;
pub use ontology::{Axiom, ClassExpression, EntityKind, Ontology};
pub use pom::{ProjectDescriptor, RepositoryDecl};
