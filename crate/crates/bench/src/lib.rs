//! Criterion benchmarks for gp-spectrum-core; see `benches/`.
