//! Criterion benchmarks for the finite-oscillator toolkit live in
//! `benches/main.rs`; this library target is intentionally empty.
