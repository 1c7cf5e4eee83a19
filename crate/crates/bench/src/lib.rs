//! Benchmarks for `supbound-core` live in `benches/`; run `cargo bench -p supbound-bench`.
