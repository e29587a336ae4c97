//! Exact scalars: rationals, multivariate polynomials over them, small dense
//! matrices, and Sylvester signatures.

mod matrix;
mod parse;
mod poly;
mod rational;
mod signature;

use thiserror::Error;

pub use matrix::{PolyMatrix, QMatrix};
pub use parse::{parse_poly, parse_rational};
pub use poly::{Exponent, Monomial, MultiPoly, Vars};
pub use rational::{format_rational, int, one, rat, rational_sqrt, zero, Rational};
pub use signature::{mat_signature, signature_of, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("syntax error at byte {offset}: {reason}")]
    Syntax { offset: usize, reason: String },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariableAt { offset: usize, name: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix entry ({row},{col}) is not constant")]
    NonConstant { row: usize, col: usize },
}
