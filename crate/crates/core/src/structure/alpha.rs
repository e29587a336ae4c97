use super::{BiparaStructure, StructureError};
use crate::exactalg::{PolyMatrix, QMatrix, Rational};
use crate::geometry::{EndoField, Frame, FrameContext, GeometryError, VectorField};

/// Bases of `T⁻_F`, `T⁺_P`, `T⁻_P` built from a basis of `T⁺_F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBases {
    pub f_minus: Vec<VectorField>,
    pub p_plus: Vec<VectorField>,
    pub p_minus: Vec<VectorField>,
}

/// `{P X_i}`, `{X_i + P X_i}`, `{X_i - P X_i}` from a basis `{X_i}` of `T⁺_F`.
///
/// Independence is checked at `point` (coordinates of the chart; ignored on
/// constant frames).
pub fn adapted_basis_at(
    s: &BiparaStructure,
    xs: &[VectorField],
    point: &[Rational],
) -> Result<AdaptedBases, StructureError> {
    let n = s.n();
    if xs.len() != n {
        return Err(StructureError::WrongCount {
            expected: n,
            got: xs.len(),
        });
    }
    for (index, x) in xs.iter().enumerate() {
        if x.context() != s.context() {
            return Err(GeometryError::ContextMismatch.into());
        }
        if &s.f().apply(x) != x {
            return Err(StructureError::NotInFPlus { index });
        }
    }
    let mut at = QMatrix::zeros(s.dim(), n);
    for (c, x) in xs.iter().enumerate() {
        for (r, v) in x.eval(point).into_iter().enumerate() {
            at.set(r, c, v);
        }
    }
    if at.rank() < n {
        return Err(StructureError::Dependent);
    }
    let px: Vec<VectorField> = xs.iter().map(|x| s.apply_p(x)).collect();
    Ok(AdaptedBases {
        p_plus: xs.iter().zip(&px).map(|(x, y)| x + y).collect(),
        p_minus: xs.iter().zip(&px).map(|(x, y)| x - y).collect(),
        f_minus: px,
    })
}

fn constant_columns(fields: &[VectorField]) -> Result<Vec<Vec<Rational>>, StructureError> {
    fields
        .iter()
        .map(|f| {
            f.components()
                .iter()
                .map(|c| c.constant_value().ok_or(StructureError::NonConstant))
                .collect()
        })
        .collect()
}

fn stack(a: &[Vec<Rational>], b: &[Vec<Rational>], dim: usize) -> QMatrix {
    let mut m = QMatrix::zeros(dim, a.len() + b.len());
    for (c, col) in a.iter().chain(b).enumerate() {
        for (r, v) in col.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    m
}

/// The unique structure with `T⁺_F = V1`, `T⁻_F = V2`, `T⁺_P = V3`, for
/// constant-coefficient, pairwise transversal distributions.
///
/// `P` exchanges `V1` and `V2` through the linear map `L: V1 → V2` whose graph
/// is `V3`. The returned structure carries the adapted frame
/// `X_i = V1_i`, `Y_i = P X_i`.
pub fn structure_from_alpha(
    ctx: &FrameContext,
    v1: &[VectorField],
    v2: &[VectorField],
    v3: &[VectorField],
) -> Result<BiparaStructure, StructureError> {
    let n = ctx.half_dim();
    let dim = ctx.dim();
    for v in [v1, v2, v3] {
        if v.len() != n {
            return Err(StructureError::WrongCount {
                expected: n,
                got: v.len(),
            });
        }
        if v.iter().any(|x| x.context() != ctx) {
            return Err(GeometryError::ContextMismatch.into());
        }
    }
    let (c1, c2, c3) = (constant_columns(v1)?, constant_columns(v2)?, constant_columns(v3)?);
    let b = stack(&c1, &c2, dim);
    let b_inv = b.inverse().ok_or(StructureError::NotTransversal("V1", "V2"))?;
    if stack(&c1, &c3, dim).rank() < dim {
        return Err(StructureError::NotTransversal("V1", "V3"));
    }
    if stack(&c2, &c3, dim).rank() < dim {
        return Err(StructureError::NotTransversal("V2", "V3"));
    }
    // V3 columns in the (V1 | V2) basis: top block alpha, bottom block beta.
    let coords = b_inv.mul(&stack(&c3, &[], dim));
    let mut alpha = QMatrix::zeros(n, n);
    let mut beta = QMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            alpha.set(r, c, coords.get(r, c).clone());
            beta.set(r, c, coords.get(r + n, c).clone());
        }
    }
    let l = beta.mul(&alpha.inverse().ok_or(StructureError::NotTransversal("V2", "V3"))?);
    let l_inv = l.inverse().ok_or(StructureError::NotTransversal("V1", "V3"))?;
    let mut p0 = QMatrix::zeros(dim, dim);
    let mut f0 = QMatrix::zeros(dim, dim);
    for r in 0..n {
        f0.set(r, r, Rational::from_integer(1.into()));
        f0.set(r + n, r + n, Rational::from_integer((-1).into()));
        for c in 0..n {
            p0.set(r + n, c, l.get(r, c).clone());
            p0.set(r, c + n, l_inv.get(r, c).clone());
        }
    }
    let f = b.mul(&f0).mul(&b_inv);
    let p = b.mul(&p0).mul(&b_inv);
    let s = BiparaStructure::new(EndoField::from_constant(ctx, &f)?, EndoField::from_constant(ctx, &p)?)?;
    let frame_m = b.mul(&{
        // X_i = e_i, Y_i = P0 e_i in the (V1 | V2) basis
        let mut m = QMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..n {
                m.set(
                    r,
                    c,
                    if r == c {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::from_integer(0.into())
                    },
                );
                m.set(r, c + n, p0.get(r, c).clone());
            }
        }
        m
    });
    let frame = Frame::new(ctx, PolyMatrix::from_constant(ctx.vars(), &frame_m))?;
    s.with_adapted_frame(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::structure::fixtures;

    fn field(ctx: &FrameContext, c: &[i64]) -> VectorField {
        let c: Vec<Rational> = c.iter().map(|&v| int(v)).collect();
        VectorField::from_rationals(ctx, &c).unwrap()
    }

    #[test]
    fn plane_example() {
        let ctx = FrameContext::abelian(1);
        let s = structure_from_alpha(
            &ctx,
            &[field(&ctx, &[1, 0])],
            &[field(&ctx, &[0, 1])],
            &[field(&ctx, &[1, 1])],
        )
        .unwrap();
        assert_eq!(
            s.f().matrix().to_constant().unwrap(),
            QMatrix::from_i64(&[&[1, 0], &[0, -1]])
        );
        assert_eq!(
            s.p().matrix().to_constant().unwrap(),
            QMatrix::from_i64(&[&[0, 1], &[1, 0]])
        );
    }

    #[test]
    fn degenerate_third_distribution() {
        let ctx = FrameContext::abelian(1);
        let e1 = field(&ctx, &[1, 0]);
        let err = structure_from_alpha(
            &ctx,
            std::slice::from_ref(&e1),
            &[field(&ctx, &[0, 1])],
            std::slice::from_ref(&e1),
        )
        .unwrap_err();
        assert_eq!(err, StructureError::NotTransversal("V1", "V3"));
    }

    #[test]
    fn p_minus_is_f_of_v3() {
        let ctx = FrameContext::abelian(2);
        let v1 = [field(&ctx, &[1, 0, 0, 0]), field(&ctx, &[1, 1, 0, 0])];
        let v2 = [field(&ctx, &[0, 0, 1, 0]), field(&ctx, &[0, 1, 1, 1])];
        let v3 = [field(&ctx, &[1, 0, 2, 1]), field(&ctx, &[0, 1, 0, 3])];
        let s = structure_from_alpha(&ctx, &v1, &v2, &v3).unwrap();
        for x in &v3 {
            assert_eq!(&s.p().apply(x), x);
            let fx = s.f().apply(x);
            assert_eq!(s.p().apply(&fx), -&fx);
        }
        for x in &v1 {
            assert_eq!(&s.f().apply(x), x);
        }
        for x in &v2 {
            assert_eq!(s.f().apply(x), -x);
        }
    }

    #[test]
    fn adapted_bases_on_flat_chart() {
        let s = fixtures::flat(2);
        let ctx = s.context().clone();
        let frame = s.adapted_frame().unwrap();
        let xs = vec![frame.field(0), frame.field(1)];
        let b = adapted_basis_at(&s, &xs, &ctx.base_point()).unwrap();
        assert_eq!(b.f_minus[0], frame.field(2));
        // X1 + P X1 = 2 d/dx1
        assert_eq!(b.p_plus[0], VectorField::basis(&ctx, 0).scale(&int(2)));
        assert_eq!(b.p_minus[0], VectorField::basis(&ctx, 2).scale(&int(2)));
        let dx1 = VectorField::basis(&ctx, 0);
        let dx2 = VectorField::basis(&ctx, 1);
        assert_eq!(
            adapted_basis_at(&s, &[dx1, dx2], &ctx.base_point()),
            Err(StructureError::NotInFPlus { index: 0 })
        );
    }

    #[test]
    fn plane_adapted_basis() {
        let s = fixtures::flat_abelian(1);
        let ctx = s.context().clone();
        let b = adapted_basis_at(&s, &[VectorField::basis(&ctx, 0)], &[]).unwrap();
        assert_eq!(b.f_minus[0], VectorField::basis(&ctx, 1));
        assert_eq!(b.p_plus[0], field(&ctx, &[1, 1]));
        assert_eq!(b.p_minus[0], field(&ctx, &[1, -1]));
    }
}
