//! Benchmarks for the pseudoalgebra kernel live in `benches/`.
