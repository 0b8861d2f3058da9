//! Criterion benchmarks for `pdmosc-core`; see `benches/`.
