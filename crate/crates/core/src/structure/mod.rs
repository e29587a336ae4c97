//! Almost biparacomplex structures `(F, P)`: validation, projectors,
//! adapted frames, the three-distribution description, triple
//! classification, fixtures and random generation.

mod alpha;
pub mod fixtures;
mod random;
mod triple;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exactalg::{rat, AlgebraError, MultiPoly, PolyMatrix, QMatrix, Rational};
use crate::geometry::{EndoField, Frame, FrameContext, GeometryError, PolyMap, VectorField};

pub use alpha::{adapted_basis_at, structure_from_alpha, AdaptedBases};
pub use random::{generate_random_structure, random_unipotent_map, RandomParams};
pub use triple::{classify_triple, delta_gl_algebra_membership, delta_gl_membership, TripleKind};

/// The identities a structure must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Identity {
    FSquared,
    PSquared,
    Anticommute,
    TraceF,
    TraceP,
    OddDimension,
    AdaptedFX,
    AdaptedFY,
    AdaptedPX,
}

impl Identity {
    pub fn label(self) -> &'static str {
        match self {
            Identity::FSquared => "F^2 != Id",
            Identity::PSquared => "P^2 != Id",
            Identity::Anticommute => "FP + PF != 0",
            Identity::TraceF => "trace(F) != 0",
            Identity::TraceP => "trace(P) != 0",
            Identity::OddDimension => "odd dimension",
            Identity::AdaptedFX => "F X_i != X_i",
            Identity::AdaptedFY => "F Y_i != -Y_i",
            Identity::AdaptedPX => "P X_i != Y_i",
        }
    }
}

/// One failed identity with the first nonzero entry of its residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFailure {
    pub identity: Identity,
    /// `(row, col, value)`; `None` for dimension failures.
    pub entry: Option<(usize, usize, MultiPoly)>,
}

impl IdentityFailure {
    fn residual(identity: Identity, m: &PolyMatrix) -> Option<Self> {
        m.first_nonzero().map(|(r, c, v)| IdentityFailure {
            identity,
            entry: Some((r, c, v.clone())),
        })
    }
}

impl fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.identity.label())?;
        if let Some((r, c, v)) = &self.entry {
            write!(f, " (entry ({},{}) = {v})", r + 1, c + 1)?;
        }
        Ok(())
    }
}

fn join_failures(fs: &[IdentityFailure]) -> String {
    fs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid structure: {}", join_failures(.0))]
    Invalid(Vec<IdentityFailure>),
    #[error("invalid adapted frame: {}", join_failures(.0))]
    InvalidFrame(Vec<IdentityFailure>),
    #[error("field {index} does not lie in the +1 eigendistribution of F")]
    NotInFPlus { index: usize },
    #[error("fields are dependent at the evaluation point")]
    Dependent,
    #[error("distributions {0} and {1} are not transversal")]
    NotTransversal(&'static str, &'static str),
    #[error("constant-coefficient input required")]
    NonConstant,
    #[error("expected {expected} fields, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("no adapted frame attached")]
    MissingAdaptedFrame,
}

/// Eigenprojectors `F± = (Id ± F)/2`, `P± = (Id ± P)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectors {
    pub f_plus: EndoField,
    pub f_minus: EndoField,
    pub p_plus: EndoField,
    pub p_minus: EndoField,
}

impl Projectors {
    pub fn new(f: &EndoField, p: &EndoField) -> Self {
        let id = EndoField::identity(f.context());
        let half = rat(1, 2);
        Projectors {
            f_plus: id.add(f).scale(&half),
            f_minus: id.sub(f).scale(&half),
            p_plus: id.add(p).scale(&half),
            p_minus: id.sub(p).scale(&half),
        }
    }

    /// Names of the projector identities that fail; empty for a valid
    /// structure.
    pub fn failed_identities(&self, p: &EndoField) -> Vec<&'static str> {
        let ctx = self.f_plus.context();
        let id = EndoField::identity(ctx);
        let mut out = Vec::new();
        let mut check = |ok: bool, name: &'static str| {
            if !ok {
                out.push(name);
            }
        };
        check(self.f_plus.add(&self.f_minus) == id, "F+ + F- = Id");
        check(self.f_plus.compose(&self.f_minus).is_zero(), "F+ F- = 0");
        check(self.f_plus.square() == self.f_plus, "(F+)^2 = F+");
        check(self.f_minus.square() == self.f_minus, "(F-)^2 = F-");
        check(self.p_plus.square() == self.p_plus, "(P+)^2 = P+");
        check(self.p_minus.square() == self.p_minus, "(P-)^2 = P-");
        check(p.compose(&self.f_minus) == self.f_plus.compose(p), "P F- = F+ P");
        check(p.compose(&self.f_plus) == self.f_minus.compose(p), "P F+ = F- P");
        out
    }
}

#[derive(Debug)]
struct Inner {
    f: EndoField,
    p: EndoField,
    j: EndoField,
    projectors: Projectors,
    frame: Option<Frame>,
}

/// A validated almost biparacomplex structure with `J = F∘P`.
#[derive(Clone, Debug)]
pub struct BiparaStructure(Arc<Inner>);

impl PartialEq for BiparaStructure {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.f == other.0.f && self.0.p == other.0.p)
    }
}

impl Eq for BiparaStructure {}

/// Every failed defining identity of `(F, P)`.
pub fn structure_failures(f: &EndoField, p: &EndoField) -> Vec<IdentityFailure> {
    let ctx = f.context();
    let mut out = Vec::new();
    if ctx.dim() % 2 == 1 {
        out.push(IdentityFailure {
            identity: Identity::OddDimension,
            entry: None,
        });
    }
    let id = EndoField::identity(ctx);
    out.extend(IdentityFailure::residual(
        Identity::FSquared,
        f.square().sub(&id).matrix(),
    ));
    out.extend(IdentityFailure::residual(
        Identity::PSquared,
        p.square().sub(&id).matrix(),
    ));
    out.extend(IdentityFailure::residual(
        Identity::Anticommute,
        f.compose(p).add(&p.compose(f)).matrix(),
    ));
    for (identity, e) in [(Identity::TraceF, f), (Identity::TraceP, p)] {
        let t = e.trace();
        if !t.is_zero() {
            out.push(IdentityFailure {
                identity,
                entry: Some((0, 0, t)),
            });
        }
    }
    out
}

impl BiparaStructure {
    /// Checks every defining identity and reports all failures together.
    pub fn new(f: EndoField, p: EndoField) -> Result<Self, StructureError> {
        if f.context() != p.context() {
            return Err(GeometryError::ContextMismatch.into());
        }
        let failures = structure_failures(&f, &p);
        if !failures.is_empty() {
            return Err(StructureError::Invalid(failures));
        }
        Ok(Self::from_parts(f, p, None))
    }

    fn from_parts(f: EndoField, p: EndoField, frame: Option<Frame>) -> Self {
        let projectors = Projectors::new(&f, &p);
        let j = f.compose(&p);
        BiparaStructure(Arc::new(Inner {
            f,
            p,
            j,
            projectors,
            frame,
        }))
    }

    /// Constant `F`, `P` on a context.
    pub fn from_constant(ctx: &FrameContext, f: &QMatrix, p: &QMatrix) -> Result<Self, StructureError> {
        Self::new(EndoField::from_constant(ctx, f)?, EndoField::from_constant(ctx, p)?)
    }

    /// Attaches an adapted frame `{X_i, Y_i}` after checking
    /// `F X_i = X_i`, `F Y_i = -Y_i`, `P X_i = Y_i`.
    pub fn with_adapted_frame(&self, frame: Frame) -> Result<Self, StructureError> {
        if frame.context() != self.context() {
            return Err(GeometryError::ContextMismatch.into());
        }
        let failures = adapted_frame_failures(self, &frame);
        if !failures.is_empty() {
            return Err(StructureError::InvalidFrame(failures));
        }
        Ok(Self::from_parts(self.0.f.clone(), self.0.p.clone(), Some(frame)))
    }

    pub fn context(&self) -> &FrameContext {
        self.0.f.context()
    }

    pub fn dim(&self) -> usize {
        self.context().dim()
    }

    /// Half dimension `n`.
    pub fn n(&self) -> usize {
        self.context().half_dim()
    }

    pub fn f(&self) -> &EndoField {
        &self.0.f
    }

    pub fn p(&self) -> &EndoField {
        &self.0.p
    }

    pub fn j(&self) -> &EndoField {
        &self.0.j
    }

    pub fn projectors(&self) -> &Projectors {
        &self.0.projectors
    }

    pub fn adapted_frame(&self) -> Option<&Frame> {
        self.0.frame.as_ref()
    }

    pub fn require_frame(&self) -> Result<&Frame, StructureError> {
        self.adapted_frame().ok_or(StructureError::MissingAdaptedFrame)
    }

    pub fn f_plus(&self, x: &VectorField) -> VectorField {
        self.0.projectors.f_plus.apply(x)
    }

    pub fn f_minus(&self, x: &VectorField) -> VectorField {
        self.0.projectors.f_minus.apply(x)
    }

    pub fn apply_p(&self, x: &VectorField) -> VectorField {
        self.0.p.apply(x)
    }

    /// Transport along `φ`; the adapted frame is carried too.
    pub fn pushforward(&self, map: &PolyMap) -> Result<Self, StructureError> {
        if map.source() != self.context() {
            return Err(GeometryError::ContextMismatch.into());
        }
        let f = map.push_endo(self.f());
        let p = map.push_endo(self.p());
        let frame = self.adapted_frame().map(|fr| map.push_frame(fr));
        let s = BiparaStructure::new(f, p)?;
        match frame {
            Some(fr) => s.with_adapted_frame(fr),
            None => Ok(s),
        }
    }

    /// The `(X_i, Y_i)` frame as fields, or the context frame if none.
    pub fn frame_or_standard(&self) -> Frame {
        self.adapted_frame()
            .cloned()
            .unwrap_or_else(|| Frame::standard(self.context()))
    }
}

fn adapted_frame_failures(s: &BiparaStructure, frame: &Frame) -> Vec<IdentityFailure> {
    let n = s.n();
    let fm = s.f().matrix().mul(frame.matrix());
    let pm = s.p().matrix().mul(frame.matrix());
    let m = frame.matrix();
    let mut out = Vec::new();
    let mut first = |identity: Identity, pred: &dyn Fn(usize, usize) -> MultiPoly, cols: std::ops::Range<usize>| {
        for c in cols {
            for r in 0..s.dim() {
                let v = pred(r, c);
                if !v.is_zero() {
                    out.push(IdentityFailure {
                        identity,
                        entry: Some((r, c, v)),
                    });
                    return;
                }
            }
        }
    };
    first(Identity::AdaptedFX, &|r, c| fm.get(r, c) - m.get(r, c), 0..n);
    first(Identity::AdaptedFY, &|r, c| fm.get(r, c) + m.get(r, c), n..2 * n);
    first(Identity::AdaptedPX, &|r, c| pm.get(r, c) - m.get(r, c + n), 0..n);
    out
}

/// Block matrix `[[a, b], [c, d]]` from `n×n` blocks given as closures.
pub(crate) fn block_matrix(n: usize, entry: impl Fn(usize, usize) -> i64) -> QMatrix {
    let mut m = QMatrix::zeros(2 * n, 2 * n);
    for r in 0..2 * n {
        for c in 0..2 * n {
            let v = entry(r, c);
            if v != 0 {
                m.set(r, c, Rational::from_integer(v.into()));
            }
        }
    }
    m
}

/// `diag(I, -I)`.
pub fn diag_plus_minus(n: usize) -> QMatrix {
    block_matrix(n, |r, c| {
        if r != c {
            0
        } else if r < n {
            1
        } else {
            -1
        }
    })
}

/// `[[0, I], [I, 0]]`.
pub fn block_swap(n: usize) -> QMatrix {
    block_matrix(n, |r, c| i64::from(r + n == c || c + n == r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commuting_equal_involutions_fail_anticommutation() {
        let ctx = FrameContext::abelian(2);
        let d = diag_plus_minus(2);
        let err = BiparaStructure::from_constant(&ctx, &d, &d).unwrap_err();
        match err {
            StructureError::Invalid(fs) => {
                assert_eq!(fs.len(), 1);
                assert_eq!(fs[0].identity, Identity::Anticommute);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn every_failure_is_reported() {
        let ctx = FrameContext::abelian(1);
        let f = QMatrix::from_i64(&[&[2, 0], &[0, 1]]);
        let p = QMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        let err = BiparaStructure::from_constant(&ctx, &f, &p).unwrap_err();
        let StructureError::Invalid(fs) = err else {
            panic!("expected identity failures")
        };
        let ids: Vec<Identity> = fs.iter().map(|f| f.identity).collect();
        assert_eq!(
            ids,
            vec![
                Identity::FSquared,
                Identity::Anticommute,
                Identity::TraceF,
                Identity::TraceP
            ]
        );
        assert!(fs[0].to_string().starts_with("F^2 != Id"));
    }

    #[test]
    fn projector_identities_hold_on_fixtures() {
        for s in [fixtures::flat(2), fixtures::heis(), fixtures::aff()] {
            assert!(s.projectors().failed_identities(s.p()).is_empty());
            assert_eq!(s.j().square(), EndoField::identity(s.context()).scale(&rat(-1, 1)));
        }
    }

    #[test]
    fn flat_model_complex_structure() {
        let s = fixtures::flat(2);
        let ctx = s.context();
        let dx1 = VectorField::basis(ctx, 0);
        let dy1 = VectorField::basis(ctx, 2);
        assert_eq!(s.j().apply(&dx1), dy1);
        assert_eq!(s.j().apply(&dy1), -&dx1);
    }

    #[test]
    fn bad_adapted_frame_is_rejected() {
        let s = fixtures::flat(1);
        let err = s.with_adapted_frame(Frame::standard(s.context())).unwrap_err();
        assert!(matches!(err, StructureError::InvalidFrame(_)));
    }
}
