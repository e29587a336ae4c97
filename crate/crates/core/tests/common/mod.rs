#![allow(dead_code)]

use bipara_core::exactalg::{int, Monomial, MultiPoly};
use bipara_core::structure::{generate_random_structure, RandomParams};
use bipara_core::{Backend, BiparaStructure, FrameContext, VectorField};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random polynomial of degree at most `degree`; constant on Lie algebra
/// contexts.
pub fn random_function(ctx: &FrameContext, degree: u16, rng: &mut ChaCha8Rng) -> MultiPoly {
    let vars = ctx.vars().clone();
    let mut terms = vec![(Monomial::one(vars.len()), int(rng.random_range(-2..=2)))];
    if !vars.is_empty() {
        for _ in 0..3 {
            let mut e = vec![0u16; vars.len()];
            for _ in 0..rng.random_range(1..=degree.max(1)) {
                e[rng.random_range(0..vars.len())] += 1;
            }
            terms.push((Monomial::from_exponents(&e), int(rng.random_range(-2..=2))));
        }
    }
    MultiPoly::from_terms(&vars, terms)
}

pub fn random_field(ctx: &FrameContext, rng: &mut ChaCha8Rng) -> VectorField {
    let comps = (0..ctx.dim()).map(|_| random_function(ctx, 1, rng)).collect();
    VectorField::new(ctx, comps).unwrap()
}

pub fn structure(seed: u64, n: usize, constant: bool, twisted: bool) -> BiparaStructure {
    generate_random_structure(&RandomParams {
        n,
        backend: if constant {
            Backend::ConstantFrame
        } else {
            Backend::PolynomialChart
        },
        degree: 2,
        seed,
        twisted,
    })
}

pub fn basis(ctx: &FrameContext) -> Vec<VectorField> {
    (0..ctx.dim()).map(|i| VectorField::basis(ctx, i)).collect()
}
