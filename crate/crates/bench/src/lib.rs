//! Benchmark-only crate: see `benches/` for the criterion targets covering
//! sieve construction, factor windows, and the heavy summation paths.
