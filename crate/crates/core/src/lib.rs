//! Computational workbench for prime-pair linear forms: sieves, arithmetic
//! functions, Dirichlet characters, the finite sums they feed, and an
//! empirical auditor that turns each numbered claim about them into a
//! deterministic, serializable verdict.
//!
//! Organization:
//! - [`sieve`]: bit-packed prime tables (segmented, parallel), primes in
//!   progressions, least-prime search;
//! - [`factor`]: windowed smallest-prime-factor data for bulk mu / Lambda /
//!   phi evaluation;
//! - [`arith`]: point evaluation and the divisor-sum identities;
//! - [`dirichlet`]: character groups with exact root-of-unity values and
//!   twisted Chebyshev sums;
//! - [`sums`]: the pair-correlation sums, Mertens sums, and their
//!   checkpointed traces;
//! - [`asymptotic`]: li, zeta, the singular series, fits, and normalized
//!   error tracking;
//! - [`audit`]: the claim registry, verdicts, and report rendering;
//! - [`kahan`]: compensated summation and the deterministic parallel
//!   reduction all long sums share.

pub mod arith;
pub mod asymptotic;
pub mod audit;
pub mod dirichlet;
pub mod error;
pub mod factor;
pub mod kahan;
pub mod sieve;
pub mod sums;

pub use arith::{evaluate, ArithValue};
pub use audit::{run_all, run_claim, AuditConfig, AuditReport, ClaimStatus, ClaimVerdict};
pub use error::{Error, Result};
pub use factor::FactorSegment;
pub use sieve::{APClass, PrimeTable};
pub use sums::{GridSpec, LinearForm, SumTrace};
