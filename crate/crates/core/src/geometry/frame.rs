use super::context::FrameContext;
use super::field::{EndoField, VectorField};
use super::GeometryError;
use crate::exactalg::{MultiPoly, PolyMatrix};

/// A frame `{V_1..V_2n}` given by its component matrix on the context frame
/// (column `i` is `V_i`), together with the polynomial inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    ctx: FrameContext,
    matrix: PolyMatrix,
    inverse: PolyMatrix,
}

impl Frame {
    /// Fails unless the matrix is invertible over the polynomial ring.
    pub fn new(ctx: &FrameContext, matrix: PolyMatrix) -> Result<Self, GeometryError> {
        let m = EndoField::new(ctx, matrix)?.matrix().clone();
        let inverse = m.polynomial_inverse().ok_or(GeometryError::NotPolynomialInvertible)?;
        Ok(Frame {
            ctx: ctx.clone(),
            matrix: m,
            inverse,
        })
    }

    pub fn from_fields(ctx: &FrameContext, fields: &[VectorField]) -> Result<Self, GeometryError> {
        if fields.len() != ctx.dim() {
            return Err(GeometryError::WrongLength {
                expected: ctx.dim(),
                got: fields.len(),
            });
        }
        if fields.iter().any(|f| f.context() != ctx) {
            return Err(GeometryError::ContextMismatch);
        }
        let cols: Vec<Vec<MultiPoly>> = fields.iter().map(|f| f.components().to_vec()).collect();
        Self::new(ctx, PolyMatrix::from_columns(ctx.vars(), &cols))
    }

    /// The context frame itself.
    pub fn standard(ctx: &FrameContext) -> Self {
        let id = PolyMatrix::identity(ctx.vars(), ctx.dim());
        Frame {
            ctx: ctx.clone(),
            matrix: id.clone(),
            inverse: id,
        }
    }

    /// Frame with a known inverse; the product is checked.
    pub fn with_inverse(ctx: &FrameContext, matrix: PolyMatrix, inverse: PolyMatrix) -> Result<Self, GeometryError> {
        let m = EndoField::new(ctx, matrix)?.matrix().clone();
        let inv = EndoField::new(ctx, inverse)?.matrix().clone();
        if !m.mul(&inv).is_identity() {
            return Err(GeometryError::NotInverse);
        }
        Ok(Frame {
            ctx: ctx.clone(),
            matrix: m,
            inverse: inv,
        })
    }

    pub fn context(&self) -> &FrameContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &PolyMatrix {
        &self.inverse
    }

    /// `V_i` as a field.
    pub fn field(&self, i: usize) -> VectorField {
        VectorField::from_parts(&self.ctx, self.matrix.column(i))
    }

    pub fn fields(&self) -> Vec<VectorField> {
        (0..self.dim()).map(|i| self.field(i)).collect()
    }

    /// Coefficients of `x` on this frame, i.e. the dual coframe applied to `x`.
    pub fn coefficients(&self, x: &VectorField) -> Vec<MultiPoly> {
        assert!(x.context() == &self.ctx, "context mismatch");
        self.inverse.mul_vec(x.components())
    }

    /// Coefficient of `x` along `V_index`.
    pub fn dual_pairing(&self, index: usize, x: &VectorField) -> MultiPoly {
        assert!(x.context() == &self.ctx, "context mismatch");
        let mut acc = self.ctx.zero();
        for (k, xk) in x.components().iter().enumerate() {
            let a = self.inverse.get(index, k);
            if !a.is_zero() && !xk.is_zero() {
                acc += &(a * xk);
            }
        }
        acc
    }

    /// `Σ c_i V_i`.
    pub fn combine(&self, coeffs: &[MultiPoly]) -> VectorField {
        VectorField::from_parts(&self.ctx, self.matrix.mul_vec(coeffs))
    }

    /// Matrix of an endomorphism on this frame.
    pub fn endo_matrix(&self, e: &EndoField) -> PolyMatrix {
        self.inverse.mul(e.matrix()).mul(&self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, QMatrix};

    #[test]
    fn adapted_frame_of_flat_model() {
        let ctx = FrameContext::coordinates(1);
        let m = PolyMatrix::from_constant(ctx.vars(), &QMatrix::from_i64(&[&[1, 1], &[1, -1]]));
        let frame = Frame::new(&ctx, m).unwrap();
        let v = VectorField::basis(&ctx, 0);
        let c = frame.coefficients(&v);
        assert_eq!(c[0].constant_value(), Some(crate::exactalg::rat(1, 2)));
        assert_eq!(frame.combine(&c), v);
        let swap = EndoField::from_constant(&ctx, &QMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(
            frame.endo_matrix(&swap).to_constant().unwrap(),
            QMatrix::from_i64(&[&[1, 0], &[0, -1]])
        );
    }

    #[test]
    fn rejects_non_unimodular_polynomial_frame() {
        let ctx = FrameContext::coordinates(1);
        let x = MultiPoly::var(ctx.vars(), 0);
        let m = PolyMatrix::new(2, 2, ctx.vars(), vec![x, ctx.zero(), ctx.zero(), ctx.constant(int(1))]);
        assert_eq!(Frame::new(&ctx, m), Err(GeometryError::NotPolynomialInvertible));
    }
}
