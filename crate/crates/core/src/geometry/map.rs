use super::context::{Backend, FrameContext};
use super::field::{BilinearField, EndoField, VectorField};
use super::frame::Frame;
use super::GeometryError;
use crate::exactalg::{MultiPoly, PolyMatrix, QMatrix, Rational};

#[derive(Clone, Debug)]
enum Kind {
    /// Polynomial diffeomorphism between charts.
    Chart {
        forward: Vec<MultiPoly>,
        inverse: Vec<MultiPoly>,
        /// `Dφ ∘ φ⁻¹`, in target variables.
        jacobian: PolyMatrix,
        /// `D(φ⁻¹)`, in target variables.
        inverse_jacobian: PolyMatrix,
    },
    /// Linear isomorphism between constant frames.
    Linear {
        matrix: QMatrix,
        inverse: QMatrix,
        bracket_preserving: bool,
    },
}

/// An invertible map `φ` from a source context to a target context, acting
/// on tensor fields by pushforward.
#[derive(Clone, Debug)]
pub struct PolyMap {
    source: FrameContext,
    target: FrameContext,
    kind: Kind,
}

fn jacobian(forward: &[MultiPoly], vars: &crate::exactalg::Vars) -> PolyMatrix {
    let n = forward.len();
    let mut entries = Vec::with_capacity(n * n);
    for f in forward {
        for j in 0..n {
            entries.push(f.derivative(j));
        }
    }
    PolyMatrix::new(n, n, vars, entries)
}

impl PolyMap {
    /// Chart map with components `forward` (in source coordinates) and its
    /// inverse (in target coordinates). Both compositions are checked.
    pub fn chart(
        source: &FrameContext,
        target: &FrameContext,
        forward: Vec<MultiPoly>,
        inverse: Vec<MultiPoly>,
    ) -> Result<Self, GeometryError> {
        if source.backend() != Backend::PolynomialChart || target.backend() != Backend::PolynomialChart {
            return Err(GeometryError::BackendMismatch);
        }
        for (v, ctx) in [(&forward, target), (&inverse, source)] {
            if v.len() != ctx.dim() {
                return Err(GeometryError::WrongLength {
                    expected: ctx.dim(),
                    got: v.len(),
                });
            }
        }
        if source.dim() != target.dim() {
            return Err(GeometryError::ContextMismatch);
        }
        let forward: Vec<MultiPoly> = forward.iter().map(|p| p + &source.zero()).collect();
        let inverse: Vec<MultiPoly> = inverse.iter().map(|p| p + &target.zero()).collect();
        for (k, f) in forward.iter().enumerate() {
            if f.compose(&inverse, target.vars()) != MultiPoly::var(target.vars(), k) {
                return Err(GeometryError::NotInverse);
            }
        }
        for (k, g) in inverse.iter().enumerate() {
            if g.compose(&forward, source.vars()) != MultiPoly::var(source.vars(), k) {
                return Err(GeometryError::NotInverse);
            }
        }
        let jac = jacobian(&forward, source.vars()).compose(&inverse, target.vars());
        let inv_jac = jacobian(&inverse, target.vars());
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            kind: Kind::Chart {
                forward,
                inverse,
                jacobian: jac,
                inverse_jacobian: inv_jac,
            },
        })
    }

    /// Linear map sending `E_j` to `Σ_i matrix[i][j] E'_i`.
    ///
    /// Between charts this is the linear change of coordinates. Between
    /// constant frames, whether it preserves brackets is recorded and checked
    /// by operations that need it.
    pub fn linear(source: &FrameContext, target: &FrameContext, matrix: &QMatrix) -> Result<Self, GeometryError> {
        if source.backend() != target.backend() {
            return Err(GeometryError::BackendMismatch);
        }
        let n = source.dim();
        if target.dim() != n || matrix.rows() != n || matrix.cols() != n {
            return Err(GeometryError::WrongShape {
                expected: n,
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let inverse = matrix.inverse().ok_or(GeometryError::Singular)?;
        if source.backend() == Backend::PolynomialChart {
            let lin = |m: &QMatrix, vars: &crate::exactalg::Vars| -> Vec<MultiPoly> {
                (0..n)
                    .map(|i| {
                        let mut p = MultiPoly::zero(vars);
                        for j in 0..n {
                            p += &MultiPoly::var(vars, j).scale(m.get(i, j));
                        }
                        p
                    })
                    .collect()
            };
            return Self::chart(source, target, lin(matrix, source.vars()), lin(&inverse, target.vars()));
        }
        let bracket_preserving = preserves_brackets(source, target, matrix);
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            kind: Kind::Linear {
                matrix: matrix.clone(),
                inverse,
                bracket_preserving,
            },
        })
    }

    pub fn identity(ctx: &FrameContext) -> Self {
        Self::linear(ctx, ctx, &QMatrix::identity(ctx.dim())).expect("identity is invertible")
    }

    pub fn source(&self) -> &FrameContext {
        &self.source
    }

    pub fn target(&self) -> &FrameContext {
        &self.target
    }

    /// Chart maps are diffeomorphisms and always preserve brackets.
    pub fn is_bracket_preserving(&self) -> bool {
        match &self.kind {
            Kind::Chart { .. } => true,
            Kind::Linear { bracket_preserving, .. } => *bracket_preserving,
        }
    }

    pub fn forward_components(&self) -> Option<&[MultiPoly]> {
        match &self.kind {
            Kind::Chart { forward, .. } => Some(forward),
            Kind::Linear { .. } => None,
        }
    }

    pub fn inverse_map(&self) -> PolyMap {
        let kind = match &self.kind {
            Kind::Chart { forward, inverse, .. } => Kind::Chart {
                forward: inverse.clone(),
                inverse: forward.clone(),
                jacobian: jacobian(inverse, self.target.vars()).compose(forward, self.source.vars()),
                inverse_jacobian: jacobian(forward, self.source.vars()),
            },
            Kind::Linear {
                matrix,
                inverse,
                bracket_preserving,
            } => Kind::Linear {
                matrix: inverse.clone(),
                inverse: matrix.clone(),
                bracket_preserving: *bracket_preserving,
            },
        };
        PolyMap {
            source: self.target.clone(),
            target: self.source.clone(),
            kind,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PolyMap) -> Result<PolyMap, GeometryError> {
        if self.target != other.source {
            return Err(GeometryError::ContextMismatch);
        }
        match (&self.kind, &other.kind) {
            (
                Kind::Chart {
                    forward: f1,
                    inverse: i1,
                    ..
                },
                Kind::Chart {
                    forward: f2,
                    inverse: i2,
                    ..
                },
            ) => {
                let fwd = f2.iter().map(|p| p.compose(f1, self.source.vars())).collect();
                let inv = i1.iter().map(|p| p.compose(i2, other.target.vars())).collect();
                PolyMap::chart(&self.source, &other.target, fwd, inv)
            }
            (Kind::Linear { matrix: m1, .. }, Kind::Linear { matrix: m2, .. }) => {
                PolyMap::linear(&self.source, &other.target, &m2.mul(m1))
            }
            _ => Err(GeometryError::BackendMismatch),
        }
    }

    fn check_source(&self, ctx: &FrameContext) {
        assert!(ctx == &self.source, "field does not live on the map source");
    }

    /// `f ∘ φ⁻¹`.
    pub fn push_function(&self, f: &MultiPoly) -> MultiPoly {
        match &self.kind {
            Kind::Chart { inverse, .. } => (f + &self.source.zero()).compose(inverse, self.target.vars()),
            Kind::Linear { .. } => f + &self.target.zero(),
        }
    }

    fn push_entries(&self, m: &PolyMatrix) -> PolyMatrix {
        let entries = m.entries().iter().map(|c| self.push_function(c)).collect();
        PolyMatrix::new(m.rows(), m.cols(), self.target.vars(), entries)
    }

    pub fn push_vector(&self, x: &VectorField) -> VectorField {
        self.check_source(x.context());
        let comps = match &self.kind {
            Kind::Chart { jacobian, .. } => {
                let moved: Vec<MultiPoly> = x.components().iter().map(|c| self.push_function(c)).collect();
                jacobian.mul_vec(&moved)
            }
            Kind::Linear { matrix, .. } => {
                let m = PolyMatrix::from_constant(self.target.vars(), matrix);
                m.mul_vec(x.components())
            }
        };
        VectorField::from_parts(&self.target, comps)
    }

    pub fn push_endo(&self, e: &EndoField) -> EndoField {
        self.check_source(e.context());
        let m = match &self.kind {
            Kind::Chart {
                jacobian,
                inverse_jacobian,
                ..
            } => jacobian.mul(&self.push_entries(e.matrix())).mul(inverse_jacobian),
            Kind::Linear { matrix, inverse, .. } => {
                let vars = self.target.vars();
                PolyMatrix::from_constant(vars, matrix)
                    .mul(e.matrix())
                    .mul(&PolyMatrix::from_constant(vars, inverse))
            }
        };
        EndoField::from_parts(&self.target, m)
    }

    /// Pushes every frame field; the inverse is transported alongside.
    pub fn push_frame(&self, frame: &Frame) -> Frame {
        self.check_source(frame.context());
        let moved = |m: &PolyMatrix| self.push_entries(m);
        let (m, inv) = match &self.kind {
            Kind::Chart {
                jacobian,
                inverse_jacobian,
                ..
            } => (
                jacobian.mul(&moved(frame.matrix())),
                moved(frame.inverse()).mul(inverse_jacobian),
            ),
            Kind::Linear { matrix, inverse, .. } => {
                let vars = self.target.vars();
                (
                    PolyMatrix::from_constant(vars, matrix).mul(&moved(frame.matrix())),
                    moved(frame.inverse()).mul(&PolyMatrix::from_constant(vars, inverse)),
                )
            }
        };
        Frame::with_inverse(&self.target, m, inv).expect("transported inverse")
    }

    /// `(φ_* g)(X', Y') = g(φ⁻¹_* X', φ⁻¹_* Y')`.
    pub fn push_bilinear(&self, g: &BilinearField) -> BilinearField {
        self.check_source(g.context());
        let m = match &self.kind {
            Kind::Chart { inverse_jacobian, .. } => inverse_jacobian
                .transpose()
                .mul(&self.push_entries(g.matrix()))
                .mul(inverse_jacobian),
            Kind::Linear { inverse, .. } => {
                let inv = PolyMatrix::from_constant(self.target.vars(), inverse);
                inv.transpose().mul(g.matrix()).mul(&inv)
            }
        };
        BilinearField::from_parts(&self.target, m)
    }
}

fn preserves_brackets(source: &FrameContext, target: &FrameContext, m: &QMatrix) -> bool {
    let n = source.dim();
    let src = source.structure_constants().expect("constant frame");
    let tgt = target.structure_constants().expect("constant frame");
    let cols: Vec<Vec<Rational>> = (0..n).map(|j| m.column(j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = m.mul_vec(src.bracket(i, j));
            let mut rhs = vec![crate::exactalg::zero(); n];
            for (a, ca) in cols[i].iter().enumerate() {
                if num_traits::Zero::is_zero(ca) {
                    continue;
                }
                for (b, cb) in cols[j].iter().enumerate() {
                    if num_traits::Zero::is_zero(cb) {
                        continue;
                    }
                    let f = ca * cb;
                    for (k, r) in rhs.iter_mut().enumerate() {
                        *r += &f * tgt.get(a, b, k);
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, parse_poly};
    use crate::geometry::StructureConstants;

    fn shear() -> PolyMap {
        let ctx = FrameContext::coordinates(1);
        let v = ctx.vars().clone();
        let fwd = vec![parse_poly("x1", &v).unwrap(), parse_poly("y1 + x1^2", &v).unwrap()];
        let inv = vec![parse_poly("x1", &v).unwrap(), parse_poly("y1 - x1^2", &v).unwrap()];
        PolyMap::chart(&ctx, &ctx, fwd, inv).unwrap()
    }

    #[test]
    fn rejects_wrong_inverse() {
        let ctx = FrameContext::coordinates(1);
        let v = ctx.vars().clone();
        let fwd = vec![parse_poly("x1", &v).unwrap(), parse_poly("y1 + x1^2", &v).unwrap()];
        let inv = vec![parse_poly("x1", &v).unwrap(), parse_poly("y1 + x1^2", &v).unwrap()];
        assert!(matches!(
            PolyMap::chart(&ctx, &ctx, fwd, inv),
            Err(GeometryError::NotInverse)
        ));
    }

    #[test]
    fn pushforward_is_a_lie_algebra_map() {
        let phi = shear();
        let ctx = phi.source().clone();
        let v = ctx.vars().clone();
        let x = VectorField::new(&ctx, vec![parse_poly("y1", &v).unwrap(), parse_poly("x1", &v).unwrap()]).unwrap();
        let y = VectorField::new(&ctx, vec![parse_poly("x1^2", &v).unwrap(), ctx.constant(int(1))]).unwrap();
        let lhs = phi.push_vector(&x.bracket(&y));
        let rhs = phi.push_vector(&x).bracket(&phi.push_vector(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_map_undoes_pushforward() {
        let phi = shear();
        let ctx = phi.source().clone();
        let v = ctx.vars().clone();
        let x = VectorField::new(
            &ctx,
            vec![parse_poly("y1", &v).unwrap(), parse_poly("x1*y1", &v).unwrap()],
        )
        .unwrap();
        assert_eq!(phi.inverse_map().push_vector(&phi.push_vector(&x)), x);
        let e = EndoField::new(
            &ctx,
            PolyMatrix::new(
                2,
                2,
                &v,
                vec![
                    ctx.zero(),
                    parse_poly("x1", &v).unwrap(),
                    ctx.constant(int(1)),
                    ctx.zero(),
                ],
            ),
        )
        .unwrap();
        assert_eq!(phi.inverse_map().push_endo(&phi.push_endo(&e)), e);
        // pushforward respects evaluation: (φ_*E)(φ_*X) = φ_*(E X)
        assert_eq!(
            phi.push_endo(&e).apply(&phi.push_vector(&x)),
            phi.push_vector(&e.apply(&x))
        );
    }

    #[test]
    fn linear_bracket_preservation_flag() {
        let mut c = StructureConstants::abelian(4);
        c.set(0, 1, &[int(0), int(0), int(1), int(0)]);
        let heis = FrameContext::lie_algebra(&["X1", "X2", "Y1", "Y2"], c).unwrap();
        let flat = FrameContext::abelian(2);
        let id = QMatrix::identity(4);
        assert!(!PolyMap::linear(&heis, &flat, &id).unwrap().is_bracket_preserving());
        assert!(PolyMap::identity(&heis).is_bracket_preserving());
        // X1 -> 2 X1 forces Y1 -> 2 Y1
        let d = QMatrix::from_i64(&[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 1]]);
        assert!(PolyMap::linear(&heis, &heis, &d).unwrap().is_bracket_preserving());
        let bad = QMatrix::from_i64(&[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(!PolyMap::linear(&heis, &heis, &bad).unwrap().is_bracket_preserving());
    }
}
