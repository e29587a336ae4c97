use num_traits::Zero;
use serde::Serialize;

use super::StructureError;
use crate::exactalg::{AlgebraError, PolyMatrix, QMatrix};
use crate::geometry::EndoField;

/// The four triple structures `F² = ±Id`, `P² = ±Id`, `PF ± FP = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TripleKind {
    BiparacomplexType,
    HyperproductType,
    BicomplexType,
    HypercomplexType,
    None,
}

impl TripleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TripleKind::BiparacomplexType => "biparacomplex-type",
            TripleKind::HyperproductType => "hyperproduct-type",
            TripleKind::BicomplexType => "bicomplex-type",
            TripleKind::HypercomplexType => "hypercomplex-type",
            TripleKind::None => "none",
        }
    }
}

impl std::fmt::Display for TripleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(PartialEq)]
enum Square {
    Plus,
    Minus,
    Neither,
}

fn square_sign(e: &EndoField) -> Square {
    let sq = e.square();
    let id = EndoField::identity(e.context());
    if sq == id {
        Square::Plus
    } else if sq.add(&id).is_zero() {
        Square::Minus
    } else {
        Square::Neither
    }
}

pub fn classify_triple(f: &EndoField, p: &EndoField) -> TripleKind {
    if f.context() != p.context() {
        return TripleKind::None;
    }
    let fp = f.compose(p);
    let pf = p.compose(f);
    let anti = fp.add(&pf).is_zero();
    let comm = fp == pf;
    match (square_sign(f), square_sign(p)) {
        (Square::Plus, Square::Plus) if anti => TripleKind::BiparacomplexType,
        (Square::Plus, Square::Plus) if comm => TripleKind::HyperproductType,
        (Square::Minus, Square::Minus) if comm => TripleKind::BicomplexType,
        (Square::Minus, Square::Minus) if anti => TripleKind::HypercomplexType,
        _ => TripleKind::None,
    }
}

fn constant(m: &PolyMatrix) -> Result<QMatrix, StructureError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare.into());
    }
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m.get(r, c).is_constant() {
                return Err(AlgebraError::NonConstant { row: r, col: c }.into());
            }
        }
    }
    Ok(m.to_constant().expect("checked constant"))
}

fn is_equal_block_diagonal(q: &QMatrix) -> bool {
    let d = q.rows();
    if d % 2 == 1 {
        return false;
    }
    let n = d / 2;
    (0..n).all(|r| {
        (0..n).all(|c| q.get(r, c + n).is_zero() && q.get(r + n, c).is_zero() && q.get(r, c) == q.get(r + n, c + n))
    })
}

/// Membership in the group of invertible `diag(A, A)`.
pub fn delta_gl_membership(m: &PolyMatrix) -> Result<bool, StructureError> {
    let q = constant(m)?;
    Ok(is_equal_block_diagonal(&q) && !q.det().is_zero())
}

/// Membership in the Lie algebra of all `diag(A, A)`.
pub fn delta_gl_algebra_membership(m: &PolyMatrix) -> Result<bool, StructureError> {
    Ok(is_equal_block_diagonal(&constant(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, Vars};
    use crate::geometry::FrameContext;
    use crate::structure::{block_swap, diag_plus_minus, fixtures};

    fn endo(ctx: &FrameContext, rows: &[&[i64]]) -> EndoField {
        EndoField::from_constant(ctx, &QMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn four_kinds() {
        let ctx = FrameContext::abelian(2);
        let s = fixtures::flat_abelian(2);
        assert_eq!(classify_triple(s.f(), s.p()), TripleKind::BiparacomplexType);
        let f = endo(&ctx, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
        let p = endo(&ctx, &[&[1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]]);
        assert_eq!(classify_triple(&f, &p), TripleKind::HyperproductType);
        // quaternion units acting on the left
        let i = endo(&ctx, &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let j = endo(&ctx, &[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]);
        assert_eq!(classify_triple(&i, &j), TripleKind::HypercomplexType);
        assert_eq!(classify_triple(&i, &i), TripleKind::BicomplexType);
        assert_eq!(classify_triple(&f, &i), TripleKind::None);
    }

    #[test]
    fn classification_survives_conjugation() {
        let ctx = FrameContext::abelian(2);
        let b = QMatrix::from_i64(&[&[1, 2, 0, 1], &[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 3, 0, 1]]);
        let bi = b.inverse().unwrap();
        let f = EndoField::from_constant(&ctx, &b.mul(&block_swap(2)).mul(&bi)).unwrap();
        let p = EndoField::from_constant(&ctx, &b.mul(&diag_plus_minus(2)).mul(&bi)).unwrap();
        assert_eq!(classify_triple(&f, &p), TripleKind::BiparacomplexType);
    }

    #[test]
    fn delta_gl() {
        let v = Vars::empty();
        let a = QMatrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 1], &[0, 0, 0, 1]]);
        assert!(delta_gl_membership(&PolyMatrix::from_constant(&v, &a)).unwrap());
        let b = QMatrix::from_i64(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(!delta_gl_membership(&PolyMatrix::from_constant(&v, &b)).unwrap());
        let c = QMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(!delta_gl_membership(&PolyMatrix::from_constant(&v, &c)).unwrap());
        let zero = QMatrix::zeros(4, 4);
        assert!(!delta_gl_membership(&PolyMatrix::from_constant(&v, &zero)).unwrap());
        assert!(delta_gl_algebra_membership(&PolyMatrix::from_constant(&v, &zero)).unwrap());
        let w = Vars::new(&["x"]);
        let m = PolyMatrix::new(
            2,
            2,
            &w,
            vec![
                parse_poly("x", &w).unwrap(),
                parse_poly("0", &w).unwrap(),
                parse_poly("0", &w).unwrap(),
                parse_poly("x", &w).unwrap(),
            ],
        );
        assert!(delta_gl_membership(&m).is_err());
    }
}
