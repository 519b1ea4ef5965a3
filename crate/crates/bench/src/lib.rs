//! Benchmarks for the density kernels live in `benches/`.
