//! Exact computational geometry of almost biparacomplex structures.
//!
//! An almost biparacomplex (almost complex product) structure is a pair of
//! (1,1)-tensor fields `F`, `P` with `F² = P² = Id` and `FP + PF = 0`. This
//! crate builds its canonical and well-adapted connections, their torsion,
//! curvature and difference tensor, the Nijenhuis and Frölicher–Nijenhuis
//! obstructions, and adapted metrics. Every scalar is a polynomial with
//! exact rational coefficients, so each identity is decided exactly.
//!
//! Two kinds of frame are supported behind one interface:
//!
//! * a polynomial coordinate chart, where fields have polynomial
//!   components and brackets are computed by exact differentiation;
//! * a constant frame on a Lie algebra, given by structure constants, which
//!   models left-invariant structures on Lie groups.

pub mod connections;
pub mod diagnostics;
pub mod exactalg;
pub mod geometry;
pub mod metrics;
pub mod structure;

pub use connections::{ChristoffelTable, ConnectionKind, ConnectionLaw, DifferenceTensor};
pub use diagnostics::{Verdict, Witness};
pub use exactalg::{MultiPoly, PolyMatrix, QMatrix, Rational, Signature, Vars};
pub use geometry::{Backend, BilinearField, EndoField, Frame, FrameContext, PolyMap, VectorField};
pub use structure::{BiparaStructure, Projectors, TripleKind};
