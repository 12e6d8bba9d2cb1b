//! Criterion benchmarks for the path solvers; see `benches/paths.rs`.
