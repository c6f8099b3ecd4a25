//! Execution backends for matchgate circuits and walks.

pub mod contracted;
pub mod sampling;
pub mod statevector;
pub mod subspace;
pub mod validate;

pub use contracted::{build_contracted, contracted_width, ContractedModel};
pub use sampling::{sample, OutcomeLabels, ShotHistogram};
pub use statevector::{circuit_unitary, run_statevector, QubitState};
pub use subspace::{run_subspace, SubspaceProgram, SubspaceState};
pub use validate::{cross_validate, CrossValidationOptions, CrossValidationReport, LegReport};
