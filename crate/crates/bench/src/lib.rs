//! Criterion benchmarks for `bk-core`; see `benches/geometry.rs`.
