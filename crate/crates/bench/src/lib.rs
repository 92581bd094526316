//! Benchmark-only crate; see `benches/quantifiers.rs`.
