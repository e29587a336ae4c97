use std::hint::black_box;

use bipara_core::connections::{CurvatureTensor, TorsionTensor};
use bipara_core::diagnostics::{first_prolongation, integrability_verdict};
use bipara_core::geometry::Backend;
use bipara_core::structure::{fixtures, generate_random_structure, RandomParams};
use bipara_core::{BiparaStructure, ChristoffelTable, ConnectionLaw, DifferenceTensor};
use criterion::{criterion_group, criterion_main, Criterion};

fn chart(n: usize, twisted: bool) -> BiparaStructure {
    generate_random_structure(&RandomParams {
        n,
        backend: Backend::PolynomialChart,
        degree: 2,
        seed: 7,
        twisted,
    })
}

fn connections(c: &mut Criterion) {
    let cases = [
        ("aff", fixtures::aff()),
        ("chart_n2", chart(2, false)),
        ("twisted_n2", chart(2, true)),
    ];
    for (name, s) in &cases {
        c.bench_function(&format!("canonical_table/{name}"), |b| {
            b.iter(|| ConnectionLaw::canonical(black_box(s)).table().dim())
        });
        c.bench_function(&format!("well_adapted_table/{name}"), |b| {
            b.iter(|| ConnectionLaw::well_adapted(black_box(s)).table().dim())
        });
        c.bench_function(&format!("christoffels/{name}"), |b| {
            b.iter(|| ChristoffelTable::well_adapted(black_box(s)).unwrap().is_zero())
        });
    }
}

fn tensors(c: &mut Criterion) {
    let s = chart(2, true);
    let law = ConnectionLaw::canonical(&s);
    c.bench_function("torsion/twisted_n2", |b| {
        b.iter(|| TorsionTensor::new(black_box(&law)).is_zero())
    });
    c.bench_function("curvature/twisted_n2", |b| {
        b.iter(|| CurvatureTensor::new(black_box(&law)).is_zero())
    });
    c.bench_function("difference/twisted_n2", |b| {
        b.iter(|| DifferenceTensor::new(black_box(&s)).is_zero())
    });
    c.bench_function("integrability/twisted_n2", |b| {
        b.iter(|| integrability_verdict(black_box(&s)).is_ok())
    });
}

fn prolongation(c: &mut Criterion) {
    let mut g = c.benchmark_group("prolongation");
    g.sample_size(10);
    for n in 1..=3 {
        g.bench_function(format!("n{n}"), |b| b.iter(|| first_prolongation(black_box(n))));
    }
    g.finish();
}

criterion_group!(benches, connections, tensors, prolongation);
criterion_main!(benches);
