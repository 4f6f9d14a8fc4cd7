//! Criterion benchmarks for `starnet-core`; see `benches/`.
