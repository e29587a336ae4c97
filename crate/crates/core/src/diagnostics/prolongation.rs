use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::exactalg::{format_rational, int, QMatrix, Rational};

/// Basis of `Δ*gl(n) = {diag(A, A)}` inside `gl(2n)`, indexed `(r, c)` by
/// the position of the unit entry of `A`.
fn delta_gl_basis(n: usize) -> Vec<QMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut m = QMatrix::zeros(2 * n, 2 * n);
            m.set(r, c, int(1));
            m.set(r + n, c + n, int(1));
            out.push(m);
        }
    }
    out
}

/// A linear map `ℝ^dim → span(basis)` from its coordinates.
fn assemble(dim: usize, basis: &[QMatrix], coords: &[Rational]) -> Vec<QMatrix> {
    (0..dim)
        .map(|k| {
            let mut m = QMatrix::zeros(dim, dim);
            for (b, e) in basis.iter().enumerate() {
                let c = &coords[k * basis.len() + b];
                if !c.is_zero() {
                    m = m.add(&e.scale(c));
                }
            }
            m
        })
        .collect()
}

/// Matrix of the linear map `coords ↦ equations(coords)`.
fn linear_system(unknowns: usize, equations: impl Fn(&[Rational]) -> Vec<Rational>) -> QMatrix {
    let mut columns = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let mut e = vec![Rational::zero(); unknowns];
        e[u] = Rational::one();
        columns.push(equations(&e));
    }
    let rows = columns.first().map_or(0, Vec::len);
    let mut m = QMatrix::zeros(rows, unknowns);
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            m.set(r, c, v.clone());
        }
    }
    m
}

/// Dimension of the first prolongation of `Δ*gl(n)`: linear
/// `T: ℝ²ⁿ → Δ*gl(n)` with `T(u)v = T(v)u`.
pub fn first_prolongation(n: usize) -> usize {
    assert!(n >= 1, "n must be positive");
    prolongation_dim(2 * n, &delta_gl_basis(n))
}

fn prolongation_dim(dim: usize, basis: &[QMatrix]) -> usize {
    let system = linear_system(dim * basis.len(), |coords| {
        let t = assemble(dim, basis, coords);
        let mut eqs = Vec::new();
        for k in 0..dim {
            for l in k + 1..dim {
                let a = t[k].column(l);
                let b = t[l].column(k);
                eqs.extend(a.iter().zip(&b).map(|(x, y)| x - y));
            }
        }
        eqs
    });
    system.nullspace().len()
}

/// Whether `Δ*gl(n)` is closed under transposition.
pub fn transpose_invariance(n: usize) -> bool {
    delta_gl_basis(n).iter().all(|m| {
        let t = m.transpose();
        (0..n).all(|r| {
            (0..n).all(|c| t.get(r, c) == t.get(r + n, c + n) && t.get(r + n, c).is_zero() && t.get(r, c + n).is_zero())
        })
    })
}

/// `⟨A, B⟩ = trace(A Bᵀ)`.
pub fn trace_form(a: &QMatrix, b: &QMatrix) -> Rational {
    let mut acc = Rational::zero();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            acc += a.get(r, c) * b.get(r, c);
        }
    }
    acc
}

/// Dimension of the space of `L: ℝ²ⁿ → Δ*gl(n)` with
/// `i_v ∘ Alt(L) ∈ 𝔤^⊥` for every `v`, the orthogonal complement taken with
/// respect to `form`. The existence criterion asks for zero.
pub fn orthogonal_alternation_kernel(n: usize, form: &dyn Fn(&QMatrix, &QMatrix) -> Rational) -> usize {
    assert!(n >= 1, "n must be positive");
    let dim = 2 * n;
    let basis = delta_gl_basis(n);
    let system = linear_system(dim * basis.len(), |coords| {
        let l = assemble(dim, &basis, coords);
        let mut eqs = Vec::new();
        for v in 0..dim {
            // u ↦ L(v)u - L(u)v
            let mut m = QMatrix::zeros(dim, dim);
            for u in 0..dim {
                let a = l[v].column(u);
                let b = l[u].column(v);
                for r in 0..dim {
                    m.set(r, u, &a[r] - &b[r]);
                }
            }
            eqs.extend(basis.iter().map(|g| form(&m, g)));
        }
        eqs
    });
    system.nullspace().len()
}

fn as_string<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn opt_as_string<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

/// Number of functionally independent `r`-th order differential invariants
/// of a structure in dimension `2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantCount {
    pub n: usize,
    pub r: usize,
    /// The count, with `r = 0` pinned to zero.
    #[serde(serialize_with = "as_string")]
    pub general_value: Rational,
    /// The general formula evaluated as written.
    #[serde(serialize_with = "as_string")]
    pub general_raw: Rational,
    /// `(r+1)(r-2)/3`, reported for `n = 1` only.
    #[serde(serialize_with = "opt_as_string")]
    pub surface_value: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    pub warnings: Vec<String>,
}

pub fn invariant_count(n: usize, r: usize) -> InvariantCount {
    assert!(n >= 1, "n must be positive");
    let nn = BigInt::from(n);
    let rr = BigInt::from(r);
    let choose = binomial(BigInt::from(2 * n + r), rr.clone());
    let numer = choose * ((BigInt::from(3) * &rr - 1) * &nn * &nn - BigInt::from(2) * (&rr + 1) * &nn);
    let general_raw = Rational::from(BigInt::from(2) * &nn) + Rational::new(numer, &rr + 1);
    let general_value = if r == 0 { Rational::zero() } else { general_raw.clone() };
    let surface_value = (n == 1).then(|| {
        let s = Rational::new((&rr + 1) * (&rr - 2), BigInt::from(3));
        if r == 0 {
            Rational::zero()
        } else {
            s
        }
    });
    let mut warnings = Vec::new();
    if !general_value.is_integer() {
        warnings.push(format!(
            "general value {} is not an integer",
            format_rational(&general_value)
        ));
    }
    if general_value < Rational::zero() {
        warnings.push(format!("general value {} is negative", format_rational(&general_value)));
    }
    let consistent = surface_value.as_ref().map(|s| *s == general_value);
    if consistent == Some(false) {
        warnings.push(format!(
            "surface formula gives {}, general formula gives {}",
            format_rational(surface_value.as_ref().expect("n = 1")),
            format_rational(&general_value)
        ));
    }
    InvariantCount {
        n,
        r,
        general_value,
        general_raw,
        surface_value,
        consistent,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn prolongation_vanishes() {
        for n in 1..=3 {
            assert_eq!(first_prolongation(n), 0);
            assert!(transpose_invariance(n));
        }
    }

    #[test]
    fn full_gl_prolongation() {
        // gl(m)^(1) is the symmetric bilinear maps ℝᵐ × ℝᵐ → ℝᵐ.
        for m in 1..=3 {
            let basis: Vec<QMatrix> = (0..m * m)
                .map(|k| {
                    let mut e = QMatrix::zeros(m, m);
                    e.set(k / m, k % m, int(1));
                    e
                })
                .collect();
            assert_eq!(prolongation_dim(m, &basis), m * m * (m + 1) / 2);
        }
    }

    #[test]
    fn orthogonal_criterion() {
        for n in 1..=2 {
            assert_eq!(orthogonal_alternation_kernel(n, &trace_form), 0);
        }
        // A degenerate form makes every L admissible.
        assert_eq!(orthogonal_alternation_kernel(1, &|_, _| Rational::zero()), 2);
    }

    #[test]
    fn counts() {
        let c = invariant_count(1, 2);
        assert_eq!(c.general_value, int(0));
        assert_eq!(c.surface_value, Some(int(0)));
        assert_eq!(c.consistent, Some(true));
        assert_eq!(invariant_count(2, 1).general_value, int(4));
        for n in 1..4 {
            let c = invariant_count(n, 0);
            assert_eq!(c.general_value, int(0));
            assert_eq!(c.general_raw, int(-(n as i64 * n as i64)));
        }
        let c = invariant_count(1, 3);
        assert_eq!(c.general_value, int(2));
        assert_eq!(c.surface_value, Some(rat(4, 3)));
        assert_eq!(c.consistent, Some(false));
        assert!(!c.warnings.is_empty());
    }
}
