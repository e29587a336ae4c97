use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::{PolyMatrix, QMatrix};
use super::AlgebraError;

/// Sylvester signature of a symmetric bilinear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Signature {
            positive,
            negative,
            zero,
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }

    pub fn is_neutral(&self) -> bool {
        self.zero == 0 && self.positive == self.negative
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Signature of a symmetric matrix with constant entries.
pub fn mat_signature(m: &PolyMatrix) -> Result<Signature, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NotSquare);
    }
    let mut q = QMatrix::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m
                .get(r, c)
                .constant_value()
                .ok_or(AlgebraError::NonConstant { row: r, col: c })?;
            q.set(r, c, v);
        }
    }
    signature_of(&q)
}

/// Signature by congruence diagonalization with symmetric pivoting.
///
/// When every remaining diagonal entry vanishes but some `m[i][j]` does not,
/// row/column `j` is added to row/column `i`, which puts `2*m[i][j]` on the
/// diagonal.
pub fn signature_of(m: &QMatrix) -> Result<Signature, AlgebraError> {
    if m.rows() != m.cols() {
        return Err(AlgebraError::NotSquare);
    }
    if !m.is_symmetric() {
        return Err(AlgebraError::NotSymmetric);
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut sig = Signature::new(0, 0, 0);
    for k in 0..n {
        let pivot = (k..n).find(|&i| !a.get(i, i).is_zero());
        let pivot = match pivot {
            Some(i) => i,
            None => {
                let off = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a.get(i, j).is_zero());
                match off {
                    Some((i, j)) => {
                        add_congruent(&mut a, i, j);
                        i
                    }
                    None => {
                        sig.zero += n - k;
                        return Ok(sig);
                    }
                }
            }
        };
        swap_congruent(&mut a, k, pivot);
        let p = a.get(k, k).clone();
        if p.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for r in k + 1..n {
            let factor = a.get(r, k) / &p;
            if factor.is_zero() {
                continue;
            }
            for c in k..n {
                let v = a.get(r, c) - &factor * a.get(k, c);
                a.set(r, c, v);
            }
            for rr in k..n {
                let v = a.get(rr, r) - &factor * a.get(rr, k);
                a.set(rr, r, v);
            }
        }
    }
    Ok(sig)
}

fn add_congruent(a: &mut QMatrix, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(i, c) + a.get(j, c);
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i) + a.get(r, j);
        a.set(r, i, v);
    }
}

fn swap_congruent(a: &mut QMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for c in 0..n {
        let (x, y) = (a.get(i, c).clone(), a.get(j, c).clone());
        a.set(i, c, y);
        a.set(j, c, x);
    }
    for r in 0..n {
        let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
        a.set(r, i, y);
        a.set(r, j, x);
    }
}
