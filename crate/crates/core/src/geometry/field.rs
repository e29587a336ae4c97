use std::fmt;

use num_traits::One;

use super::context::{Backend, FrameContext};
use super::GeometryError;
use crate::exactalg::{MultiPoly, PolyMatrix, Rational};

fn check_coefficients(ctx: &FrameContext, comps: &[MultiPoly]) -> Result<(), GeometryError> {
    for p in comps {
        if ctx.backend() == Backend::ConstantFrame && !p.is_constant() {
            return Err(GeometryError::NonConstantComponent);
        }
        if !p.vars().is_empty() && p.vars() != ctx.vars() {
            return Err(GeometryError::ContextMismatch);
        }
    }
    Ok(())
}

/// Vector field given by its components on the context frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    ctx: FrameContext,
    comps: Vec<MultiPoly>,
}

impl VectorField {
    pub fn new(ctx: &FrameContext, comps: Vec<MultiPoly>) -> Result<Self, GeometryError> {
        if comps.len() != ctx.dim() {
            return Err(GeometryError::WrongLength {
                expected: ctx.dim(),
                got: comps.len(),
            });
        }
        check_coefficients(ctx, &comps)?;
        let comps = comps.into_iter().map(|p| &p + &ctx.zero()).collect();
        Ok(VectorField {
            ctx: ctx.clone(),
            comps,
        })
    }

    pub(crate) fn from_parts(ctx: &FrameContext, comps: Vec<MultiPoly>) -> Self {
        debug_assert_eq!(comps.len(), ctx.dim());
        VectorField {
            ctx: ctx.clone(),
            comps,
        }
    }

    pub fn from_rationals(ctx: &FrameContext, comps: &[Rational]) -> Result<Self, GeometryError> {
        Self::new(ctx, comps.iter().map(|c| ctx.constant(c.clone())).collect())
    }

    pub fn zero(ctx: &FrameContext) -> Self {
        VectorField::from_parts(ctx, vec![ctx.zero(); ctx.dim()])
    }

    /// The `i`-th frame element.
    pub fn basis(ctx: &FrameContext, i: usize) -> Self {
        let mut v = Self::zero(ctx);
        v.comps[i] = ctx.constant(Rational::one());
        v
    }

    pub fn context(&self) -> &FrameContext {
        &self.ctx
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &MultiPoly {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(MultiPoly::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<(usize, &MultiPoly)> {
        self.comps.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    fn same_context(&self, other: &VectorField) {
        assert!(self.ctx == other.ctx, "vector fields from different contexts");
    }

    pub fn scale(&self, factor: &Rational) -> VectorField {
        VectorField::from_parts(&self.ctx, self.comps.iter().map(|c| c.scale(factor)).collect())
    }

    /// Multiplication by a function. In a constant frame only constants are
    /// admissible functions.
    pub fn mul_fn(&self, f: &MultiPoly) -> VectorField {
        assert!(
            self.ctx.backend() == Backend::PolynomialChart || f.is_constant(),
            "non-constant function on a constant frame"
        );
        VectorField::from_parts(&self.ctx, self.comps.iter().map(|c| c * f).collect())
    }

    /// `X(f)`.
    pub fn derive(&self, f: &MultiPoly) -> MultiPoly {
        self.ctx.derive(&self.comps, f)
    }

    /// Lie bracket `[self, other]`.
    ///
    /// # Panics
    /// If the fields live in different contexts; see [`lie_bracket`] for the
    /// checked form.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        self.same_context(other);
        VectorField::from_parts(&self.ctx, self.ctx.bracket_components(&self.comps, &other.comps))
    }

    pub fn eval(&self, point: &[Rational]) -> Vec<Rational> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }
}

/// Checked Lie bracket.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, GeometryError> {
    if x.ctx != y.ctx {
        return Err(GeometryError::ContextMismatch);
    }
    Ok(x.bracket(y))
}

impl std::ops::Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        self.same_context(rhs);
        VectorField::from_parts(
            &self.ctx,
            self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        )
    }
}

impl std::ops::Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        self.same_context(rhs);
        VectorField::from_parts(
            &self.ctx,
            self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        )
    }
}

impl std::ops::Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField::from_parts(&self.ctx, self.comps.iter().map(|c| -c).collect())
    }
}

/// Renders `c1*L1 + c2*L2 + ...` using the frame labels.
pub(crate) fn format_combination(labels: &[String], comps: &[MultiPoly]) -> String {
    let mut out = String::new();
    for (label, c) in labels.iter().zip(comps) {
        if c.is_zero() {
            continue;
        }
        let (negative, body) = match c.constant_value() {
            Some(v) => {
                let mag = num_traits::Signed::abs(&v);
                let neg = num_traits::Signed::is_negative(&v);
                if mag.is_one() {
                    (neg, label.clone())
                } else {
                    (neg, format!("{}*{label}", crate::exactalg::format_rational(&mag)))
                }
            }
            None => (false, format!("({c})*{label}")),
        };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.ctx.labels(), &self.comps))
    }
}

/// (1,1)-tensor field. Column `j` of the matrix holds the components of the
/// image of frame element `E_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoField {
    ctx: FrameContext,
    matrix: PolyMatrix,
}

impl EndoField {
    pub fn new(ctx: &FrameContext, matrix: PolyMatrix) -> Result<Self, GeometryError> {
        if matrix.rows() != ctx.dim() || matrix.cols() != ctx.dim() {
            return Err(GeometryError::WrongShape {
                expected: ctx.dim(),
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        check_coefficients(ctx, matrix.entries())?;
        let matrix = if matrix.vars() == ctx.vars() {
            matrix
        } else {
            PolyMatrix::new(
                matrix.rows(),
                matrix.cols(),
                ctx.vars(),
                matrix.entries().iter().map(|p| p + &ctx.zero()).collect(),
            )
        };
        Ok(EndoField {
            ctx: ctx.clone(),
            matrix,
        })
    }

    pub(crate) fn from_parts(ctx: &FrameContext, matrix: PolyMatrix) -> Self {
        EndoField {
            ctx: ctx.clone(),
            matrix,
        }
    }

    pub fn identity(ctx: &FrameContext) -> Self {
        Self::from_parts(ctx, PolyMatrix::identity(ctx.vars(), ctx.dim()))
    }

    pub fn zero(ctx: &FrameContext) -> Self {
        Self::from_parts(ctx, PolyMatrix::zeros(ctx.vars(), ctx.dim(), ctx.dim()))
    }

    pub fn from_constant(ctx: &FrameContext, q: &crate::exactalg::QMatrix) -> Result<Self, GeometryError> {
        Self::new(ctx, PolyMatrix::from_constant(ctx.vars(), q))
    }

    pub fn context(&self) -> &FrameContext {
        &self.ctx
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    fn same_context(&self, ctx: &FrameContext) {
        assert!(&self.ctx == ctx, "tensor fields from different contexts");
    }

    /// Image of a vector field.
    ///
    /// # Panics
    /// On a context mismatch; [`apply_endo`] is the checked form.
    pub fn apply(&self, x: &VectorField) -> VectorField {
        self.same_context(&x.ctx);
        VectorField::from_parts(&self.ctx, self.matrix.mul_vec(&x.comps))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EndoField) -> EndoField {
        self.same_context(&other.ctx);
        Self::from_parts(&self.ctx, self.matrix.mul(&other.matrix))
    }

    pub fn square(&self) -> EndoField {
        self.compose(self)
    }

    pub fn add(&self, other: &EndoField) -> EndoField {
        self.same_context(&other.ctx);
        Self::from_parts(&self.ctx, self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &EndoField) -> EndoField {
        self.same_context(&other.ctx);
        Self::from_parts(&self.ctx, self.matrix.sub(&other.matrix))
    }

    pub fn scale(&self, factor: &Rational) -> EndoField {
        Self::from_parts(&self.ctx, self.matrix.scale(factor))
    }

    pub fn trace(&self) -> MultiPoly {
        self.matrix.trace()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn is_constant(&self) -> bool {
        self.matrix.is_constant()
    }
}

/// Checked endomorphism application.
pub fn apply_endo(e: &EndoField, x: &VectorField) -> Result<VectorField, GeometryError> {
    if e.ctx != x.ctx {
        return Err(GeometryError::ContextMismatch);
    }
    Ok(e.apply(x))
}

impl fmt::Display for EndoField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// (0,2)-tensor field `g(X, Y) = Σ X^i g_ij Y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearField {
    ctx: FrameContext,
    matrix: PolyMatrix,
}

impl BilinearField {
    pub fn new(ctx: &FrameContext, matrix: PolyMatrix) -> Result<Self, GeometryError> {
        let e = EndoField::new(ctx, matrix)?;
        Ok(BilinearField {
            ctx: e.ctx,
            matrix: e.matrix,
        })
    }

    pub(crate) fn from_parts(ctx: &FrameContext, matrix: PolyMatrix) -> Self {
        BilinearField {
            ctx: ctx.clone(),
            matrix,
        }
    }

    pub fn from_constant(ctx: &FrameContext, q: &crate::exactalg::QMatrix) -> Result<Self, GeometryError> {
        Self::new(ctx, PolyMatrix::from_constant(ctx.vars(), q))
    }

    pub fn context(&self) -> &FrameContext {
        &self.ctx
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn eval(&self, x: &VectorField, y: &VectorField) -> MultiPoly {
        assert!(self.ctx == x.ctx && self.ctx == y.ctx, "context mismatch");
        let my = self.matrix.mul_vec(&y.comps);
        let mut acc = self.ctx.zero();
        for (a, b) in x.comps.iter().zip(&my) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    /// `(X, Y) ↦ g(eX, eY)`.
    pub fn pullback(&self, e: &EndoField) -> BilinearField {
        assert!(self.ctx == e.ctx, "context mismatch");
        Self::from_parts(&self.ctx, e.matrix.transpose().mul(&self.matrix).mul(&e.matrix))
    }

    pub fn add(&self, other: &BilinearField) -> BilinearField {
        Self::from_parts(&self.ctx, self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &BilinearField) -> BilinearField {
        Self::from_parts(&self.ctx, self.matrix.sub(&other.matrix))
    }

    pub fn scale(&self, factor: &Rational) -> BilinearField {
        Self::from_parts(&self.ctx, self.matrix.scale(factor))
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.matrix.add(&self.matrix.transpose()).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, QMatrix};
    use crate::geometry::context::StructureConstants;

    #[test]
    fn coordinate_fields_commute() {
        let ctx = FrameContext::coordinates(2);
        let dx1 = VectorField::basis(&ctx, 0);
        let dy1 = VectorField::basis(&ctx, 2);
        assert!(dx1.bracket(&dy1).is_zero());
    }

    #[test]
    fn heisenberg_bracket_reads_constants() {
        let mut c = StructureConstants::abelian(4);
        c.set(0, 1, &[int(0), int(0), int(1), int(0)]);
        let ctx = FrameContext::lie_algebra(&["X1", "X2", "Y1", "Y2"], c).unwrap();
        let x1 = VectorField::basis(&ctx, 0);
        let x2 = VectorField::basis(&ctx, 1);
        assert_eq!(x1.bracket(&x2), VectorField::basis(&ctx, 2));
        assert_eq!(x1.bracket(&x2).to_string(), "Y1");
    }

    #[test]
    fn flat_model_endomorphisms() {
        let ctx = FrameContext::coordinates(2);
        let f = EndoField::from_constant(
            &ctx,
            &QMatrix::from_i64(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
        )
        .unwrap();
        let p = EndoField::from_constant(
            &ctx,
            &QMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]),
        )
        .unwrap();
        let dx1 = VectorField::basis(&ctx, 0);
        let dy1 = VectorField::basis(&ctx, 2);
        assert_eq!(f.apply(&dx1), dy1);
        assert_eq!(p.apply(&dy1), -&dy1);
        assert_eq!(EndoField::identity(&ctx).apply(&dx1), dx1);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = FrameContext::coordinates(1);
        let b = FrameContext::coordinates(2);
        let x = VectorField::basis(&a, 0);
        let y = VectorField::basis(&b, 0);
        assert_eq!(lie_bracket(&x, &y), Err(GeometryError::ContextMismatch));
        assert!(apply_endo(&EndoField::identity(&b), &x).is_err());
    }

    #[test]
    fn display_uses_labels() {
        let ctx = FrameContext::abelian(2);
        let v = VectorField::from_rationals(&ctx, &[crate::exactalg::rat(-1, 3), int(0), int(2), int(-1)]).unwrap();
        assert_eq!(v.to_string(), "-1/3*X1 + 2*Y1 - Y2");
    }
}
