//! Built-in structures.
//!
//! * `flat(n)`: coordinate chart on ℝ²ⁿ, `F` swaps the `x`/`y` blocks and
//!   `P = diag(I, -I)`; adapted frame `X_i = ∂x_i + ∂y_i`, `Y_i = ∂x_i - ∂y_i`.
//! * `flat_abelian(n)`: the same model on the abelian Lie algebra, in the
//!   adapted frame `F = diag(I, -I)`, `P` the block swap.
//! * `heis()`: `[X1, X2] = Y1` on ℝ⁴, non-integrable with vanishing `A`.
//! * `aff()`: `[X1, X2] = X1` on ℝ⁴, non-integrable with `A ≠ 0`.

use super::{block_swap, diag_plus_minus, BiparaStructure};
use crate::exactalg::{int, PolyMatrix, QMatrix, Rational};
use crate::geometry::{adapted_labels, Frame, FrameContext, StructureConstants};

pub fn flat(n: usize) -> BiparaStructure {
    let ctx = FrameContext::coordinates(n);
    let s = BiparaStructure::from_constant(&ctx, &block_swap(n), &diag_plus_minus(n)).expect("flat model");
    let mut m = QMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m.set(i, i, int(1));
        m.set(i + n, i, int(1));
        m.set(i, i + n, int(1));
        m.set(i + n, i + n, int(-1));
    }
    let frame = Frame::new(&ctx, PolyMatrix::from_constant(ctx.vars(), &m)).expect("invertible");
    s.with_adapted_frame(frame).expect("adapted")
}

/// Standard structure on a Lie algebra whose frame is already adapted.
pub fn adapted_on(ctx: &FrameContext) -> BiparaStructure {
    let n = ctx.half_dim();
    let s = BiparaStructure::from_constant(ctx, &diag_plus_minus(n), &block_swap(n)).expect("standard pair");
    s.with_adapted_frame(Frame::standard(ctx)).expect("adapted")
}

pub fn flat_abelian(n: usize) -> BiparaStructure {
    adapted_on(&FrameContext::abelian(n))
}

fn two_bracket(target: usize) -> FrameContext {
    let mut c = StructureConstants::abelian(4);
    let mut v: Vec<Rational> = vec![int(0); 4];
    v[target] = int(1);
    c.set(0, 1, &v);
    FrameContext::lie_algebra(&adapted_labels(2), c).expect("valid Lie algebra")
}

pub fn heis() -> BiparaStructure {
    adapted_on(&two_bracket(2))
}

pub fn aff() -> BiparaStructure {
    adapted_on(&two_bracket(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::VectorField;

    #[test]
    fn heis_brackets() {
        let s = heis();
        let ctx = s.context();
        let b = VectorField::basis(ctx, 0).bracket(&VectorField::basis(ctx, 1));
        assert_eq!(b.to_string(), "Y1");
        let s = aff();
        let ctx = s.context();
        let b = VectorField::basis(ctx, 0).bracket(&VectorField::basis(ctx, 1));
        assert_eq!(b.to_string(), "X1");
    }
}
