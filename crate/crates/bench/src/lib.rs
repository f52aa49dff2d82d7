//! Criterion benchmarks for `trackselect-core`; see `benches/`.
