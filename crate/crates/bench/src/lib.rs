//! Criterion benchmarks for `fourlines-core`; see `benches/`.
