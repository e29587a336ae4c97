use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{block_swap, diag_plus_minus, fixtures, BiparaStructure};
use crate::exactalg::{int, Monomial, MultiPoly, PolyMatrix, QMatrix, Rational};
use crate::geometry::{Backend, EndoField, Frame, FrameContext, PolyMap, StructureConstants};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub n: usize,
    pub backend: Backend,
    /// Degree bound of the polynomial coefficients (chart backend).
    pub degree: u32,
    pub seed: u64,
    /// Chart backend only: instead of conjugating the flat model, use
    /// `F = diag(I, -I)`, `P = [[0, B], [B⁻¹, 0]]` with `B` unipotent
    /// polynomial, which is generally not integrable.
    pub twisted: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            n: 2,
            backend: Backend::PolynomialChart,
            degree: 2,
            seed: 0,
            twisted: false,
        }
    }
}

/// A random valid structure with adapted frame. Chart outputs that are not
/// twisted are conjugates of the flat model and hence integrable.
pub fn generate_random_structure(params: &RandomParams) -> BiparaStructure {
    assert!(params.n >= 1, "n must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    match (params.backend, params.twisted) {
        (Backend::PolynomialChart, false) => {
            let map = unipotent_map(params.n, params.degree, &mut rng);
            fixtures::flat(params.n)
                .pushforward(&map)
                .expect("conjugate of a valid structure")
        }
        (Backend::PolynomialChart, true) => twisted_chart(params.n, params.degree, &mut rng),
        (Backend::ConstantFrame, _) => random_lie_structure(params.n, &mut rng),
    }
}

/// A random unipotent self-map of the standard chart on ℝ²ⁿ.
///
/// One or two driver coordinates are fixed; every other coordinate is
/// shifted by a polynomial of degree at most `degree` in the drivers, so the
/// inverse subtracts the same polynomial.
pub fn random_unipotent_map(n: usize, degree: u32, seed: u64) -> PolyMap {
    unipotent_map(n, degree, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn unipotent_map(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> PolyMap {
    let ctx = FrameContext::coordinates(n);
    let dim = 2 * n;
    let vars = ctx.vars().clone();
    if degree == 0 {
        return PolyMap::identity(&ctx);
    }
    let n_drivers = if dim > 2 && rng.random_bool(0.5) { 2 } else { 1 };
    let mut drivers: Vec<usize> = Vec::new();
    while drivers.len() < n_drivers {
        let d = rng.random_range(0..dim);
        if !drivers.contains(&d) {
            drivers.push(d);
        }
    }
    let mut forward = Vec::with_capacity(dim);
    let mut inverse = Vec::with_capacity(dim);
    for k in 0..dim {
        let x = MultiPoly::var(&vars, k);
        if drivers.contains(&k) {
            forward.push(x.clone());
            inverse.push(x);
            continue;
        }
        let shift = random_poly(&vars, &drivers, degree, rng);
        forward.push(&x + &shift);
        inverse.push(&x - &shift);
    }
    PolyMap::chart(&ctx, &ctx, forward, inverse).expect("unipotent maps invert")
}

/// Random polynomial without constant term in the given variables.
fn random_poly(vars: &crate::exactalg::Vars, support: &[usize], degree: u32, rng: &mut ChaCha8Rng) -> MultiPoly {
    let mut monomials: Vec<Vec<u16>> = vec![vec![0; vars.len()]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for m in &monomials {
            for &v in support {
                let mut e = m.clone();
                e[v] += 1;
                if !next.contains(&e) {
                    next.push(e);
                }
            }
        }
        monomials.extend(next);
        monomials.sort();
        monomials.dedup();
    }
    let mut terms = Vec::new();
    for e in monomials {
        if e.iter().all(|&x| x == 0) || !rng.random_bool(0.5) {
            continue;
        }
        let c = loop {
            let c: i64 = rng.random_range(-2..=2);
            if c != 0 {
                break c;
            }
        };
        terms.push((Monomial::from_exponents(&e), int(c)));
    }
    MultiPoly::from_terms(vars, terms)
}

fn twisted_chart(n: usize, degree: u32, rng: &mut ChaCha8Rng) -> BiparaStructure {
    let ctx = FrameContext::coordinates(n);
    let vars = ctx.vars().clone();
    let all: Vec<usize> = (0..2 * n).collect();
    let mut b = PolyMatrix::identity(&vars, n);
    for r in 0..n {
        for c in r + 1..n {
            b.set(r, c, random_poly(&vars, &all, degree.max(1), rng));
        }
    }
    let b_inv = b.polynomial_inverse().expect("unipotent");
    let dim = 2 * n;
    let mut f = PolyMatrix::zeros(&vars, dim, dim);
    let mut p = PolyMatrix::zeros(&vars, dim, dim);
    let mut frame = PolyMatrix::identity(&vars, dim);
    let mut frame_inv = PolyMatrix::identity(&vars, dim);
    for i in 0..n {
        f.set(i, i, ctx.constant(int(1)));
        f.set(i + n, i + n, ctx.constant(int(-1)));
        for j in 0..n {
            p.set(i, j + n, b.get(i, j).clone());
            p.set(i + n, j, b_inv.get(i, j).clone());
            frame.set(i + n, j + n, b_inv.get(i, j).clone());
            frame_inv.set(i + n, j + n, b.get(i, j).clone());
        }
    }
    let s = BiparaStructure::new(
        EndoField::new(&ctx, f).expect("shape"),
        EndoField::new(&ctx, p).expect("shape"),
    )
    .expect("twisted pair is valid");
    s.with_adapted_frame(Frame::with_inverse(&ctx, frame, frame_inv).expect("inverse"))
        .expect("adapted")
}

fn random_unimodular(dim: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let mut l = QMatrix::identity(dim);
    let mut u = QMatrix::identity(dim);
    for r in 0..dim {
        for c in 0..r {
            l.set(r, c, int(rng.random_range(-1..=1)));
            u.set(c, r, int(rng.random_range(-1..=1)));
        }
    }
    l.mul(&u)
}

/// Direct sum of small solvable pieces: lines, `aff`, the Heisenberg algebra
/// and `ℝ ⋉_D ℝᵏ`.
fn random_lie_algebra(dim: usize, rng: &mut ChaCha8Rng) -> StructureConstants {
    let mut c = StructureConstants::abelian(dim);
    let mut start = 0;
    let one = || int(1);
    while start < dim {
        let left = dim - start;
        let kind = rng.random_range(0..4);
        let size = match kind {
            0 => 1,
            1 if left >= 2 => 2,
            2 if left >= 3 => 3,
            3 if left >= 2 => rng.random_range(2..=left.min(4)),
            _ => 1,
        };
        let mut set = |i: usize, j: usize, k: usize, v: Rational| {
            let mut coeffs = c.bracket(start + i, start + j).to_vec();
            coeffs[start + k] = v;
            c.set(start + i, start + j, &coeffs);
        };
        match (kind, size) {
            (1, 2) => set(0, 1, 0, one()),
            (2, 3) => set(0, 1, 2, one()),
            (3, k1) if k1 >= 2 => {
                for a in 1..k1 {
                    for b in 1..k1 {
                        let v: i64 = rng.random_range(-1..=1);
                        if v != 0 {
                            set(0, a, b, int(v));
                        }
                    }
                }
            }
            _ => {}
        }
        start += size;
    }
    let g = random_unimodular(dim, rng);
    c.change_basis(&g).expect("unimodular")
}

fn random_lie_structure(n: usize, rng: &mut ChaCha8Rng) -> BiparaStructure {
    let dim = 2 * n;
    let constants = random_lie_algebra(dim, rng);
    let labels: Vec<String> = (1..=dim).map(|i| format!("E{i}")).collect();
    let ctx = FrameContext::lie_algebra(&labels, constants).expect("Jacobi holds for direct sums");
    let b = random_unimodular(dim, rng);
    let b_inv = b.inverse().expect("unimodular");
    let f = b.mul(&diag_plus_minus(n)).mul(&b_inv);
    let p = b.mul(&block_swap(n)).mul(&b_inv);
    let s = BiparaStructure::from_constant(&ctx, &f, &p).expect("conjugate pair");
    let frame = Frame::with_inverse(
        &ctx,
        PolyMatrix::from_constant(ctx.vars(), &b),
        PolyMatrix::from_constant(ctx.vars(), &b_inv),
    )
    .expect("inverse");
    s.with_adapted_frame(frame).expect("adapted")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_the_flat_model() {
        let s = generate_random_structure(&RandomParams {
            n: 2,
            degree: 0,
            ..Default::default()
        });
        assert_eq!(s, fixtures::flat(2));
    }

    #[test]
    fn generated_structures_are_valid() {
        for seed in 0..12 {
            for backend in [Backend::PolynomialChart, Backend::ConstantFrame] {
                for twisted in [false, true] {
                    let params = RandomParams {
                        n: 1 + (seed as usize % 3),
                        backend,
                        degree: 2,
                        seed,
                        twisted,
                    };
                    let s = generate_random_structure(&params);
                    assert!(super::super::structure_failures(s.f(), s.p()).is_empty());
                    assert!(s.adapted_frame().is_some());
                }
            }
        }
    }

    #[test]
    fn shear_pushes_forward_coordinate_field() {
        let ctx = FrameContext::coordinates(2);
        let v = ctx.vars().clone();
        let x1 = MultiPoly::var(&v, 0);
        let sq = x1.pow(2);
        let mut fwd: Vec<MultiPoly> = (0..4).map(|k| MultiPoly::var(&v, k)).collect();
        let mut inv = fwd.clone();
        fwd[2] = &fwd[2] + &sq;
        inv[2] = &inv[2] - &sq;
        let map = PolyMap::chart(&ctx, &ctx, fwd, inv).unwrap();
        let pushed = map.push_vector(&crate::geometry::VectorField::basis(&ctx, 0));
        assert_eq!(pushed.to_string(), "d/dx1 + (2*x1)*d/dy1");
    }
}
