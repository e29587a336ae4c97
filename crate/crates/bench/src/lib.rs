//! Criterion benchmarks for `bipara-core`; see `benches/`.
