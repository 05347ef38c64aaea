//! Criterion benchmarks for the exterior calculus, the Fourier transform and
//! the Hodge lattice code. Run with `cargo bench -p abelfourier-bench`.
