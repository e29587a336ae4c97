use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::GeometryError;
use crate::exactalg::{MultiPoly, Rational, Vars};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Left-invariant frame of a Lie algebra; all coefficients constant.
    ConstantFrame,
    /// Coordinate frame of a polynomial chart.
    PolynomialChart,
}

/// Structure constants `[E_i, E_j] = Σ_k c[i][j][k] E_k`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    table: Vec<Rational>,
}

impl StructureConstants {
    /// All brackets zero.
    pub fn abelian(dim: usize) -> Self {
        StructureConstants {
            dim,
            table: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `[E_i, E_j] = coeffs` and `[E_j, E_i] = -coeffs`.
    pub fn set(&mut self, i: usize, j: usize, coeffs: &[Rational]) {
        assert_eq!(coeffs.len(), self.dim, "bracket coefficient length");
        for (k, c) in coeffs.iter().enumerate() {
            self.table[(i * self.dim + j) * self.dim + k] = c.clone();
            self.table[(j * self.dim + i) * self.dim + k] = -c.clone();
        }
    }

    /// Sets one raw entry without touching the transposed slot.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        self.table[(i * self.dim + j) * self.dim + k] = value;
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.dim + j) * self.dim;
        &self.table[start..start + self.dim]
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Zero::is_zero)
    }

    /// Checks antisymmetry and the Jacobi identity exactly.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.get(i, j, k) != &-self.get(j, i, k).clone() {
                        return Err(GeometryError::NotAntisymmetric { i, j });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += self.get(i, j, m) * self.get(m, k, l);
                            s += self.get(j, k, m) * self.get(m, i, l);
                            s += self.get(k, i, m) * self.get(m, j, l);
                        }
                        if !s.is_zero() {
                            return Err(GeometryError::JacobiViolated { i, j, k });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Constants of the same algebra in the basis `E'_j = Σ_i basis[i][j] E_i`.
    pub fn change_basis(&self, basis: &crate::exactalg::QMatrix) -> Option<StructureConstants> {
        let inv = basis.inverse()?;
        let n = self.dim;
        let mut out = StructureConstants::abelian(n);
        for a in 0..n {
            for b in 0..n {
                // [E'_a, E'_b] in old coordinates
                let mut old = vec![Rational::zero(); n];
                for i in 0..n {
                    let bi = basis.get(i, a);
                    if bi.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let bj = basis.get(j, b);
                        if bj.is_zero() {
                            continue;
                        }
                        let f = bi * bj;
                        for (k, o) in old.iter_mut().enumerate() {
                            *o += &f * self.get(i, j, k);
                        }
                    }
                }
                let new = inv.mul_vec(&old);
                for (k, v) in new.into_iter().enumerate() {
                    out.set_raw(a, b, k, v);
                }
            }
        }
        Some(out)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct ContextInner {
    backend: Backend,
    dim: usize,
    vars: Vars,
    labels: Vec<String>,
    constants: Option<StructureConstants>,
}

/// A `2n`-dimensional frame together with its Lie bracket.
///
/// Cloning is cheap; contexts compare by content.
#[derive(Clone, Debug)]
pub struct FrameContext(Arc<ContextInner>);

impl PartialEq for FrameContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FrameContext {}

impl FrameContext {
    /// Coordinate frame of a chart with the given coordinate names.
    pub fn chart<S: AsRef<str>>(names: &[S]) -> Result<Self, GeometryError> {
        let dim = names.len();
        if dim == 0 || dim % 2 == 1 {
            return Err(GeometryError::OddDimension(dim));
        }
        for (i, a) in names.iter().enumerate() {
            let a = a.as_ref();
            if a.is_empty()
                || !a.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                || !a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(GeometryError::BadVariableName(a.to_string()));
            }
            if names[..i].iter().any(|b| b.as_ref() == a) {
                return Err(GeometryError::BadVariableName(a.to_string()));
            }
        }
        let labels = names.iter().map(|v| format!("d/d{}", v.as_ref())).collect();
        Ok(FrameContext(Arc::new(ContextInner {
            backend: Backend::PolynomialChart,
            dim,
            vars: Vars::new(names),
            labels,
            constants: None,
        })))
    }

    /// Chart on ℝ²ⁿ with coordinates `x1..xn, y1..yn`.
    pub fn coordinates(n: usize) -> Self {
        let names: Vec<String> = (1..=n)
            .map(|i| format!("x{i}"))
            .chain((1..=n).map(|i| format!("y{i}")))
            .collect();
        Self::chart(&names).expect("standard coordinate names")
    }

    /// Constant frame of a Lie algebra. Antisymmetry and Jacobi are checked.
    pub fn lie_algebra<S: AsRef<str>>(labels: &[S], constants: StructureConstants) -> Result<Self, GeometryError> {
        let dim = labels.len();
        if dim == 0 || dim % 2 == 1 {
            return Err(GeometryError::OddDimension(dim));
        }
        if constants.dim() != dim {
            return Err(GeometryError::WrongLength {
                expected: dim,
                got: constants.dim(),
            });
        }
        constants.validate()?;
        Ok(FrameContext(Arc::new(ContextInner {
            backend: Backend::ConstantFrame,
            dim,
            vars: Vars::empty(),
            labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
            constants: Some(constants),
        })))
    }

    /// Abelian Lie algebra with frame `X1..Xn, Y1..Yn`.
    pub fn abelian(n: usize) -> Self {
        Self::lie_algebra(&adapted_labels(n), StructureConstants::abelian(2 * n)).expect("abelian constants are valid")
    }

    pub fn backend(&self) -> Backend {
        self.0.backend
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// Half dimension `n`.
    pub fn half_dim(&self) -> usize {
        self.0.dim / 2
    }

    pub fn vars(&self) -> &Vars {
        &self.0.vars
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn structure_constants(&self) -> Option<&StructureConstants> {
        self.0.constants.as_ref()
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly::zero(&self.0.vars)
    }

    pub fn constant(&self, value: Rational) -> MultiPoly {
        MultiPoly::constant(&self.0.vars, value)
    }

    /// Origin of the chart; the empty point for constant frames.
    pub fn base_point(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.0.vars.len()]
    }

    /// `X(f)` for a field with components `x`.
    pub fn derive(&self, x: &[MultiPoly], f: &MultiPoly) -> MultiPoly {
        let mut acc = self.zero();
        if self.0.backend == Backend::ConstantFrame || f.is_constant() {
            return acc;
        }
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            let d = f.derivative(k);
            if !d.is_zero() {
                acc += &(xk * &d);
            }
        }
        acc
    }

    /// Components of the bracket of two fields given by components.
    pub(crate) fn bracket_components(&self, x: &[MultiPoly], y: &[MultiPoly]) -> Vec<MultiPoly> {
        let n = self.dim();
        let mut out: Vec<MultiPoly> = (0..n)
            .map(|k| {
                let mut v = self.derive(x, &y[k]);
                v -= &self.derive(y, &x[k]);
                v
            })
            .collect();
        if let Some(c) = &self.0.constants {
            if c.is_abelian() {
                return out;
            }
            for (i, xi) in x.iter().enumerate().take(n) {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate().take(n) {
                    if i == j || yj.is_zero() {
                        continue;
                    }
                    let coeffs = c.bracket(i, j);
                    if coeffs.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let xy = xi * yj;
                    for (k, ck) in coeffs.iter().enumerate() {
                        if !ck.is_zero() {
                            out[k] += &xy.scale(ck);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Labels `X1..Xn, Y1..Yn` of an adapted frame.
pub fn adapted_labels(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("X{i}"))
        .chain((1..=n).map(|i| format!("Y{i}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, QMatrix};

    #[test]
    fn jacobi_violation_is_rejected() {
        // [E1,E2] = E3, [E2,E3] = E1, [E3,E1] = E1 breaks Jacobi
        let mut c = StructureConstants::abelian(4);
        c.set(0, 1, &[int(0), int(0), int(1), int(0)]);
        c.set(1, 2, &[int(1), int(0), int(0), int(0)]);
        c.set(2, 0, &[int(1), int(0), int(0), int(0)]);
        assert!(matches!(
            FrameContext::lie_algebra(&["a", "b", "c", "d"], c),
            Err(GeometryError::JacobiViolated { .. })
        ));
    }

    #[test]
    fn odd_dimension_is_rejected() {
        assert!(matches!(
            FrameContext::chart(&["x", "y", "z"]),
            Err(GeometryError::OddDimension(3))
        ));
        assert!(FrameContext::chart(&["x", "x"]).is_err());
    }

    #[test]
    fn basis_change_preserves_jacobi() {
        let mut c = StructureConstants::abelian(4);
        c.set(0, 1, &[int(0), int(0), int(1), int(0)]);
        let b = QMatrix::from_i64(&[&[1, 2, 0, 0], &[0, 1, 0, 3], &[1, 0, 1, 0], &[0, 0, 0, 1]]);
        let c2 = c.change_basis(&b).unwrap();
        c2.validate().unwrap();
        assert!(!c2.is_abelian());
    }
}
