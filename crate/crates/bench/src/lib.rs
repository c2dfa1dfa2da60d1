//! Criterion benchmarks for the whyq workbench live under `benches/`.
