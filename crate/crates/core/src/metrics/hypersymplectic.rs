use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MetricError;
use crate::exactalg::{int, QMatrix, Rational};
use crate::geometry::BilinearField;
use crate::structure::BiparaStructure;

fn symmetric_basis(d: usize) -> Vec<QMatrix> {
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for r in 0..d {
        for c in r..d {
            let mut m = QMatrix::zeros(d, d);
            m.set(r, c, int(1));
            m.set(c, r, int(1));
            out.push(m);
        }
    }
    out
}

/// Basis of the symmetric `g` with `g(J·,J·) = g` and `g(F·,F·) = -g`, for
/// a structure with constant coefficients.
pub fn hypersymplectic_solutions(s: &BiparaStructure) -> Result<Vec<QMatrix>, MetricError> {
    let f = s.f().matrix().to_constant().ok_or(MetricError::NonConstant)?;
    let j = s.j().matrix().to_constant().ok_or(MetricError::NonConstant)?;
    let d = s.dim();
    let basis = symmetric_basis(d);
    let residual = |g: &QMatrix| -> Vec<Rational> {
        let a = j.transpose().mul(g).mul(&j).sub(g);
        let b = f.transpose().mul(g).mul(&f).add(g);
        (0..d)
            .flat_map(|r| (0..d).map(move |c| (r, c)))
            .flat_map(|(r, c)| [a.get(r, c).clone(), b.get(r, c).clone()])
            .collect()
    };
    let columns: Vec<Vec<Rational>> = basis.iter().map(residual).collect();
    let mut system = QMatrix::zeros(columns[0].len(), basis.len());
    for (c, col) in columns.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            system.set(r, c, v.clone());
        }
    }
    Ok(system
        .nullspace()
        .into_iter()
        .map(|coeffs| {
            coeffs
                .iter()
                .zip(&basis)
                .fold(QMatrix::zeros(d, d), |acc, (c, b)| acc.add(&b.scale(c)))
        })
        .collect())
}

/// A nondegenerate solution of the hypersymplectic system. Basis elements
/// are tried first, then seeded small-integer combinations.
pub fn solve_hypersymplectic_metric(s: &BiparaStructure, seed: u64) -> Result<BilinearField, MetricError> {
    let sols = hypersymplectic_solutions(s)?;
    let nondegenerate = |m: &QMatrix| !m.det().eq(&Rational::from_integer(0.into()));
    let found = sols.iter().find(|m| nondegenerate(m)).cloned().or_else(|| {
        if sols.is_empty() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..200).find_map(|_| {
            let d = s.dim();
            let m = sols.iter().fold(QMatrix::zeros(d, d), |acc, b| {
                acc.add(&b.scale(&int(rng.random_range(-3..=3))))
            });
            nondegenerate(&m).then_some(m)
        })
    });
    let m = found.ok_or(MetricError::NoSolution)?;
    Ok(BilinearField::from_constant(s.context(), &m)?)
}
