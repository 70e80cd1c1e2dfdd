//! Validation and conformance tooling for Croissant Tasks documents.
//!
//! The pipeline is:
//!
//! 1. [`ontology`] loads the vocabulary (classes, subclass edges, property ranges).
//! 2. [`graph`] expands one JSON-LD task document into a [`graph::NodeGraph`].
//! 3. [`shapes`] runs the built-in constraint catalog and produces a
//!    [`shapes::FileVerdict`] with stable diagnostic codes.
//! 4. [`conformance`] checks that a `TaskSolution` fulfills a `TaskProblem`.
//! 5. [`reporting`] assembles `validation_report.json` and text summaries.
//! 6. [`cli`] wires these into the `croissant-tasks` binary.
//!
//! ```
//! use croissant_tasks::{graph::expand_document, ontology::Ontology, shapes};
//!
//! let doc = r#"{
//!   "@context": {"ex": "http://example.org/"},
//!   "@type": "cr:Task",
//!   "@id": "ex:t"
//! }"#;
//! let graph = expand_document(doc, "t.jsonld").unwrap();
//! let verdict = shapes::validate_graph(&graph, Ontology::builtin(), shapes::builtin_shapes());
//! assert!(verdict.passed());
//! ```

pub mod cli;
pub mod conformance;
pub mod graph;
pub mod iri;
pub mod ontology;
pub mod pattern;
pub mod reporting;
pub mod shapes;
pub mod vocab;

pub use graph::{expand_document, NodeGraph, NodeId, Value};
pub use iri::Iri;
pub use ontology::Ontology;
pub use shapes::{Diagnostic, FileVerdict, Severity};
