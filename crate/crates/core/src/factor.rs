//! Windowed smallest-prime-factor sieving: the bulk evaluator for mu, Lambda
//! and phi over a range `[lo, hi)` without whole-range tables.
//!
//! Each window stores, per integer `n`: the least prime factor, the cofactor
//! left after dividing out every power of that least factor, and the mu/phi
//! values accumulated while the window was sieved. Prime powers are detected
//! from the (spf, remaining) pair - `n = p^e` exactly when the cofactor is 1 -
//! and `log p` is taken at use time, so no logarithm is ever stored.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::sieve::{isqrt, simple_odd_primes};
use rayon::prelude::*;

/// Largest permitted window size (in integers).
pub const MAX_SEGMENT_LEN: u64 = 1 << 25;

/// Window length used by the streaming sweeps.
const SWEEP_SEGMENT_LEN: u64 = 1 << 20;

/// Smallest-prime-factor data for the window `[lo, hi)`.
pub struct FactorSegment {
    lo: u64,
    hi: u64,
    spf: Vec<u64>,
    remaining: Vec<u64>,
    mu: Vec<i8>,
    phi: Vec<u64>,
}

impl FactorSegment {
    /// Sieve the window `[lo, hi)` with its own base primes.
    pub fn build(lo: u64, hi: u64) -> Result<Self> {
        if lo < 2 || hi <= lo {
            return Err(Error::usage(format!(
                "factor window [{lo}, {hi}) needs 2 <= lo < hi"
            )));
        }
        if hi - lo > MAX_SEGMENT_LEN {
            return Err(Error::usage(format!(
                "factor window of length {} exceeds maximum {MAX_SEGMENT_LEN}",
                hi - lo
            )));
        }
        let base = simple_odd_primes(isqrt(hi - 1));
        Ok(Self::build_with(&base, lo, hi))
    }

    /// Sieve `[lo, hi)` using a caller-provided base prime list that covers
    /// at least `sqrt(hi - 1)`.
    pub fn build_with(base: &[u64], lo: u64, hi: u64) -> Self {
        debug_assert!(lo >= 2 && hi > lo);
        let len = (hi - lo) as usize;
        let mut spf = vec![0u64; len];
        let mut remaining = vec![0u64; len];
        let mut mu = vec![1i8; len];
        let mut phi = vec![1u64; len];
        let mut work: Vec<u64> = (lo..hi).collect();

        let sqrt = isqrt(hi - 1);
        for &p in base {
            if p > sqrt {
                break;
            }
            let mut n = lo.div_ceil(p).max(1) * p;
            while n < hi {
                let i = (n - lo) as usize;
                let mut e = 0u32;
                let mut pe = 1u64;
                while work[i] % p == 0 {
                    work[i] /= p;
                    e += 1;
                    pe *= p;
                }
                debug_assert!(e >= 1);
                if spf[i] == 0 {
                    spf[i] = p;
                    remaining[i] = n / pe;
                }
                mu[i] = if e >= 2 { 0 } else { -mu[i] };
                phi[i] *= (pe / p) * (p - 1);
                n += p;
            }
        }
        for i in 0..len {
            let left = work[i];
            if left > 1 {
                // A single prime factor above sqrt(hi).
                if spf[i] == 0 {
                    spf[i] = left;
                    remaining[i] = 1;
                }
                mu[i] = -mu[i];
                phi[i] *= left - 1;
            }
        }

        FactorSegment {
            lo,
            hi,
            spf,
            remaining,
            mu,
            phi,
        }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    #[inline]
    fn idx(&self, n: u64) -> usize {
        assert!(
            n >= self.lo && n < self.hi,
            "n={n} outside factor window [{}, {})",
            self.lo,
            self.hi
        );
        (n - self.lo) as usize
    }

    /// Least prime factor of `n`; equals `n` exactly when `n` is prime.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[self.idx(n)]
    }

    /// Cofactor of `n` after all powers of its least prime factor are
    /// divided out.
    #[inline]
    pub fn remaining(&self, n: u64) -> u64 {
        self.remaining[self.idx(n)]
    }

    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[self.idx(n)]
    }

    #[inline]
    pub fn phi(&self, n: u64) -> u64 {
        self.phi[self.idx(n)]
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        self.spf(n) == n
    }

    /// `n = p^e` for some prime p and e >= 1.
    #[inline]
    pub fn is_prime_power(&self, n: u64) -> bool {
        self.remaining(n) == 1
    }

    /// `log p` when `n = p^e`, else 0.
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        let i = self.idx(n);
        if self.remaining[i] == 1 {
            (self.spf[i] as f64).ln()
        } else {
            0.0
        }
    }
}

/// Streaming factor sieve over `[2, end]`, reusing one base prime list
/// across windows.
pub struct FactorSieve {
    base: Vec<u64>,
    end: u64,
    seg_len: u64,
}

impl FactorSieve {
    pub fn new(end: u64) -> Self {
        Self::with_segment_len(end, SWEEP_SEGMENT_LEN)
    }

    pub fn with_segment_len(end: u64, seg_len: u64) -> Self {
        FactorSieve {
            base: simple_odd_primes(isqrt(end)),
            end,
            seg_len: seg_len.clamp(1, MAX_SEGMENT_LEN),
        }
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn segment(&self, lo: u64, hi: u64) -> FactorSegment {
        FactorSegment::build_with(&self.base, lo, hi)
    }

    /// Sum `f(segment, n)` over `start <= n <= end` in parallel, with
    /// per-segment partials folded in segment order (worker-count
    /// independent).
    pub fn sum_over<F>(&self, start: u64, end: u64, f: F) -> f64
    where
        F: Fn(&FactorSegment, u64) -> f64 + Sync,
    {
        let start = start.max(2);
        let end = end.min(self.end);
        if end < start {
            return 0.0;
        }
        let n_segs = (end - start + 1).div_ceil(self.seg_len);
        let partials: Vec<f64> = (0..n_segs)
            .into_par_iter()
            .map(|i| {
                let lo = start + i * self.seg_len;
                let hi = (lo + self.seg_len).min(end + 1);
                let seg = self.segment(lo, hi);
                let mut acc = KahanSum::new();
                for n in lo..hi {
                    acc.add(f(&seg, n));
                }
                acc.value()
            })
            .collect();
        KahanSum::sum_iter(partials)
    }

    /// Sequential sweep of `f(segment, n)` over `[2, x_max]` that records the
    /// running sum at each checkpoint. `checkpoints` must be increasing; the
    /// returned vector holds the partial sum over `n <= checkpoint`.
    pub fn scan<F>(&self, checkpoints: &[u64], f: F) -> Vec<f64>
    where
        F: Fn(&FactorSegment, u64) -> f64,
    {
        let mut out = Vec::with_capacity(checkpoints.len());
        if checkpoints.is_empty() {
            return out;
        }
        debug_assert!(checkpoints.windows(2).all(|w| w[0] < w[1]));
        let x_max = (*checkpoints.last().unwrap()).min(self.end);
        let mut acc = KahanSum::new();
        let mut ci = 0;
        let mut lo = 2u64;
        while lo <= x_max {
            let hi = (lo + self.seg_len).min(x_max + 1);
            let seg = self.segment(lo, hi);
            for n in lo..hi {
                while ci < checkpoints.len() && checkpoints[ci] < n {
                    out.push(acc.value());
                    ci += 1;
                }
                acc.add(f(&seg, n));
            }
            lo = hi;
        }
        while ci < checkpoints.len() {
            out.push(acc.value());
            ci += 1;
        }
        out
    }
}
