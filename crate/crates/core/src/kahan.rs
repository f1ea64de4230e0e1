//! Compensated summation and the deterministic segmented reduction used by
//! every long sum in the crate.
//!
//! All series here are accumulated in ascending order of the summation index
//! with Kahan compensation. Parallel evaluations split the range into
//! fixed-size segments, compute each partial sequentially, and fold the
//! partials in segment order, so the result does not depend on the number of
//! worker threads.

use rayon::prelude::*;

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }

    pub fn sum_iter<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}

/// Sum `f(lo, hi)` over the segments of `[start, end)`, in parallel.
///
/// Segment boundaries depend only on `seg_len`, and the partial sums are
/// folded in segment-index order, so the result is identical for any worker
/// count (including 1).
pub fn segmented_sum<F>(start: u64, end: u64, seg_len: u64, f: F) -> f64
where
    F: Fn(u64, u64) -> f64 + Sync,
{
    if end <= start {
        return 0.0;
    }
    let seg_len = seg_len.max(1);
    let n_segs = (end - start).div_ceil(seg_len);
    let partials: Vec<f64> = (0..n_segs)
        .into_par_iter()
        .map(|i| {
            let lo = start + i * seg_len;
            let hi = (lo + seg_len).min(end);
            f(lo, hi)
        })
        .collect();
    KahanSum::sum_iter(partials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_beats_naive_on_small_increments() {
        let n = 10_000_000u64;
        let mut naive = 0.0f64;
        let mut kahan = KahanSum::new();
        for _ in 0..n {
            naive += 0.1;
            kahan.add(0.1);
        }
        let exact = n as f64 * 0.1;
        assert!((kahan.value() - exact).abs() <= (naive - exact).abs());
        assert!((kahan.value() - exact).abs() < 1e-6);
    }

    #[test]
    fn segmented_matches_sequential() {
        let f = |lo: u64, hi: u64| {
            let mut acc = KahanSum::new();
            for n in lo..hi {
                acc.add(1.0 / (n as f64));
            }
            acc.value()
        };
        let a = segmented_sum(1, 100_000, 4096, f);
        let mut seq = KahanSum::new();
        for n in 1..100_000u64 {
            seq.add(1.0 / (n as f64));
        }
        assert!((a - seq.value()).abs() < 1e-12);
    }

    #[test]
    fn segmented_sum_is_worker_count_independent() {
        let f = |lo: u64, hi: u64| {
            let mut acc = KahanSum::new();
            for n in lo..hi {
                acc.add((n as f64).sqrt().recip());
            }
            acc.value()
        };
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let r1 = pool1.install(|| segmented_sum(1, 500_000, 8192, f));
        let r4 = pool4.install(|| segmented_sum(1, 500_000, 8192, f));
        assert_eq!(r1.to_bits(), r4.to_bits());
    }

    #[test]
    fn empty_range_is_zero() {
        assert_eq!(segmented_sum(10, 10, 64, |_, _| 1.0), 0.0);
        assert_eq!(segmented_sum(10, 5, 64, |_, _| 1.0), 0.0);
    }
}
