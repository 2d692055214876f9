//! Catalog, random conjugation, hypothesis-preserving generation, scenario
//! files, `analyze` reports and the property suites.

pub mod catalog;
pub mod conjugation;
pub mod generate;
pub mod report;
pub mod scenario;
pub mod suites;

pub use catalog::{block_sum, catalog, CatalogEntry};
pub use conjugation::{random_symplectic_conjugate, Conjugate};
pub use generate::{generate_hypothesis_instances, HypothesisInstance};
pub use report::{analyze, AnalysisReport};
pub use scenario::Scenario;
pub use suites::{run_suite, SuiteReport, SUITES};
