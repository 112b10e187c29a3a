//! Criterion benchmarks for the word problem and the divergence searches;
//! run with `cargo bench -p racgdiv-bench`.
