//! Frames, tensor fields and polynomial maps.
//!
//! Everything is expressed in components on a [`FrameContext`]: either the
//! coordinate frame of a polynomial chart or a constant frame of a Lie
//! algebra. Column `j` of an endomorphism matrix is the image of `E_j`.

mod context;
mod field;
mod frame;
mod map;

use thiserror::Error;

pub use context::{adapted_labels, Backend, FrameContext, StructureConstants};
pub use field::{apply_endo, lie_bracket, BilinearField, EndoField, VectorField};
pub use frame::Frame;
pub use map::PolyMap;

pub(crate) use field::format_combination;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("objects belong to different frame contexts")]
    ContextMismatch,
    #[error("expected {expected} components, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    WrongShape { expected: usize, rows: usize, cols: usize },
    #[error("non-constant coefficient on a constant frame")]
    NonConstantComponent,
    #[error("dimension {0} is not a positive even number")]
    OddDimension(usize),
    #[error("invalid variable name `{0}`")]
    BadVariableName(String),
    #[error("structure constants are not antisymmetric in ({i},{j})")]
    NotAntisymmetric { i: usize, j: usize },
    #[error("Jacobi identity fails for ({i},{j},{k})")]
    JacobiViolated { i: usize, j: usize, k: usize },
    #[error("the given inverse does not invert the map")]
    NotInverse,
    #[error("matrix is singular")]
    Singular,
    #[error("frame matrix has no polynomial inverse")]
    NotPolynomialInvertible,
    #[error("maps between different backends are not supported")]
    BackendMismatch,
    #[error("map does not preserve Lie brackets")]
    NotBracketPreserving,
}
