//! Integrability, flatness and equivalence checks, and the linear algebra
//! of the structure group.

mod nijenhuis;
mod prolongation;
mod verdict;
mod verdicts;

use thiserror::Error;

use crate::connections::ConnectionError;
use crate::geometry::GeometryError;

pub use nijenhuis::{fp_torsion_check, FnBracket, FpTorsionReport, NijenhuisTensor};
pub use prolongation::{
    first_prolongation, invariant_count, orthogonal_alternation_kernel, trace_form, transpose_invariance,
    InvariantCount,
};
pub use verdict::{Verdict, Witness};
pub use verdicts::{
    commutant_check, equivalence_check, flatness_verdict, identity_suite, integrability_verdict, involutivity_check,
    EquivalenceReport, FlatnessReport, IntegrabilityReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagnosticsError {
    /// Two routes to the same fact disagree. This indicates a bug.
    #[error("internal inconsistency in {check}: {detail}")]
    Inconsistent { check: &'static str, detail: String },
    #[error("no adapted frame attached")]
    MissingAdaptedFrame,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}
