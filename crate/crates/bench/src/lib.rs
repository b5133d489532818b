//! Criterion benchmarks for `mquant-core`; see `benches/`.
