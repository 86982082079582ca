//! Criterion benchmarks for the law suites live in `benches/`.
