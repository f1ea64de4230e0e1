//! Point evaluation of the basic arithmetic functions and the divisor-sum
//! identities that tie them together.

use crate::error::{Error, Result};
use crate::factor::FactorSieve;
use crate::kahan::KahanSum;

/// mu, Lambda and phi at one integer, all derived from a single
/// factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArithValue {
    pub n: u64,
    pub mu: i8,
    pub lambda: f64,
    pub phi: u64,
}

/// Trial-division factorization of `n >= 1` as `(prime, exponent)` pairs in
/// increasing prime order. Cost is O(sqrt(n)); fine for point queries up to
/// ~1e14, bulk work goes through `FactorSegment`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // 30-wheel over the remaining candidates.
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0usize;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += STEPS[i];
        i = (i + 1) & 7;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Evaluate mu(n), Lambda(n) and phi(n) from one factorization.
pub fn evaluate(n: u64) -> Result<ArithValue> {
    if n == 0 {
        return Err(Error::usage("arithmetic functions need n >= 1"));
    }
    if n == 1 {
        return Ok(ArithValue {
            n,
            mu: 1,
            lambda: 0.0,
            phi: 1,
        });
    }
    let f = factorize(n);
    let squarefree = f.iter().all(|&(_, e)| e == 1);
    let mu = if !squarefree {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    };
    let lambda = if f.len() == 1 { (f[0].0 as f64).ln() } else { 0.0 };
    let phi = f.iter().map(|&(p, e)| p.pow(e - 1) * (p - 1)).product();
    Ok(ArithValue { n, mu, lambda, phi })
}

/// Divisors of a factorization, generated in lexicographic exponent order
/// (deterministic ordering: the exponent of the largest prime varies
/// fastest).
pub fn divisors(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut out = Vec::new();
    fn rec(factors: &[(u64, u32)], i: usize, acc: u64, out: &mut Vec<u64>) {
        if i == factors.len() {
            out.push(acc);
            return;
        }
        let (p, e) = factors[i];
        let mut pk = 1u64;
        for j in 0..=e {
            rec(factors, i + 1, acc * pk, out);
            if j < e {
                pk *= p;
            }
        }
    }
    rec(factors, 0, 1, &mut out);
    out
}

/// `-sum_{d | n} mu(d) log d`, evaluated literally over every divisor.
/// An independent route to Lambda(n); the two are compared in the test and
/// audit suites.
pub fn vonmangoldt_via_divisors(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::usage("n >= 1 required"));
    }
    let factors = factorize(n);
    let mut acc = KahanSum::new();
    for d in divisors(&factors) {
        let mu = evaluate(d)?.mu;
        if mu != 0 && d > 1 {
            acc.add(-(mu as f64) * (d as f64).ln());
        }
    }
    Ok(acc.value())
}

/// Outcome of sweeping the three divisor-sum identities over `n <= n_max`:
/// `sum_{d|n} Lambda(d) = log n`, `sum_{d|n} mu(d) = [n = 1]`, and
/// `sum_{d|n} phi(d) = n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorIdentityReport {
    pub n_max: u64,
    /// Largest |sum Lambda(d) - log n| seen.
    pub max_lambda_deviation: f64,
    pub mobius_ok: bool,
    pub totient_ok: bool,
    pub first_mobius_failure: Option<u64>,
    pub first_totient_failure: Option<u64>,
}

impl DivisorIdentityReport {
    /// Tolerance for the real-valued identity at `n`: 1e-9 scaled by the
    /// divisor count (rounding is the only possible source of deviation).
    pub fn lambda_tolerance(divisor_count: usize) -> f64 {
        1e-9 * divisor_count.max(1) as f64
    }
}

/// Check all three divisor-sum identities for every `n <= n_max`, with each
/// divisor's mu/phi/Lambda evaluated from its own factorization (no
/// telescoping shortcuts).
pub fn divisor_identity_suite(n_max: u64) -> Result<DivisorIdentityReport> {
    if n_max == 0 {
        return Err(Error::usage("n_max >= 1 required"));
    }
    if n_max > 10_000_000 {
        return Err(Error::usage("divisor identity sweep capped at 1e7"));
    }
    let mut report = DivisorIdentityReport {
        n_max,
        max_lambda_deviation: 0.0,
        mobius_ok: true,
        totient_ok: true,
        first_mobius_failure: None,
        first_totient_failure: None,
    };
    // n = 1: divisors {1}.
    if 1 <= n_max {
        // mu(1) = 1 = [n=1]; phi(1) = 1 = n; Lambda(1) = 0 = log 1.
    }
    let sieve = FactorSieve::new(n_max.max(2));
    let mut lo = 2u64;
    while lo <= n_max {
        let hi = (lo + (1 << 20)).min(n_max + 1);
        let seg = sieve.segment(lo, hi);
        for n in lo..hi {
            // Factor n by walking the spf chain through point factorization
            // of the out-of-window cofactor.
            let mut factors: Vec<(u64, u32)> = Vec::new();
            let p = seg.spf(n);
            let mut e = 0u32;
            let mut m = n;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
            if m > 1 {
                factors.extend(factorize(m));
            }

            let mut lambda_sum = KahanSum::new();
            let mut mu_sum: i64 = 0;
            let mut phi_sum: u64 = 0;
            let mut divisor_count = 0usize;
            for d in divisors(&factors) {
                divisor_count += 1;
                let v = evaluate(d)?;
                lambda_sum.add(v.lambda);
                mu_sum += v.mu as i64;
                phi_sum += v.phi;
            }
            let dev = (lambda_sum.value() - (n as f64).ln()).abs();
            if dev > report.max_lambda_deviation {
                report.max_lambda_deviation = dev;
            }
            if dev > DivisorIdentityReport::lambda_tolerance(divisor_count) {
                return Err(Error::internal(format!(
                    "Lambda divisor identity off by {dev} at n={n}"
                )));
            }
            if mu_sum != 0 && report.mobius_ok {
                report.mobius_ok = false;
                report.first_mobius_failure = Some(n);
            }
            if phi_sum != n && report.totient_ok {
                report.totient_ok = false;
                report.first_totient_failure = Some(n);
            }
        }
        lo = hi;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        let v = evaluate(30).unwrap();
        assert_eq!((v.mu, v.phi), (-1, 8));
        assert_eq!(v.lambda, 0.0);

        let v = evaluate(9).unwrap();
        assert_eq!((v.mu, v.phi), (0, 6));
        assert!((v.lambda - 3f64.ln()).abs() < 1e-12);

        let v = evaluate(1).unwrap();
        assert_eq!((v.mu, v.lambda, v.phi), (1, 0.0, 1));

        assert!(evaluate(0).is_err());
    }

    #[test]
    fn vonmangoldt_divisor_route_examples() {
        assert!((vonmangoldt_via_divisors(9).unwrap() - 3f64.ln()).abs() < 1e-12);
        assert!(vonmangoldt_via_divisors(12).unwrap().abs() < 1e-12);
        assert_eq!(vonmangoldt_via_divisors(1).unwrap(), 0.0);
    }

    #[test]
    fn divisor_route_matches_evaluate_to_1e4() {
        for n in 1..=10_000u64 {
            let direct = evaluate(n).unwrap().lambda;
            let via = vonmangoldt_via_divisors(n).unwrap();
            let tol = 1e-10 * direct.abs().max(1.0);
            assert!((direct - via).abs() <= tol, "n={n}: {direct} vs {via}");
        }
    }

    #[test]
    fn divisors_in_lexicographic_exponent_order() {
        let d = divisors(&[(2, 2), (3, 1)]);
        assert_eq!(d, vec![1, 3, 2, 6, 4, 12]);
        assert_eq!(divisors(&[]), vec![1]);
    }

    #[test]
    fn identity_suite_small() {
        let r = divisor_identity_suite(300).unwrap();
        assert!(r.mobius_ok && r.totient_ok);
        assert!(r.max_lambda_deviation < 1e-11);
        assert!(divisor_identity_suite(0).is_err());
    }

    #[test]
    fn lambda_constant_across_powers() {
        for p in [2u64, 3, 5, 7, 997] {
            let base = evaluate(p).unwrap().lambda;
            let mut pk = p;
            while let Some(next) = pk.checked_mul(p) {
                if next > 1_000_000_000 {
                    break;
                }
                pk = next;
                assert_eq!(evaluate(pk).unwrap().lambda, base, "p={p} pk={pk}");
            }
        }
    }

    #[test]
    fn multiplicativity_spot_checks() {
        let pairs = [(4u64, 9u64), (25, 8), (7, 11), (100, 231), (97, 2048)];
        for (a, b) in pairs {
            let (va, vb) = (evaluate(a).unwrap(), evaluate(b).unwrap());
            let vab = evaluate(a * b).unwrap();
            assert_eq!(vab.mu as i64, va.mu as i64 * vb.mu as i64);
            assert_eq!(vab.phi, va.phi * vb.phi);
        }
    }
}
