//! Cross-module identity and invariant suites, each checked against the
//! independent oracles in `common`.

mod common;

use common::*;
use pairsieve_core::arith::evaluate;
use pairsieve_core::asymptotic::{montgomery_track, ResidueRule};
use pairsieve_core::dirichlet::{
    character_group, character_sum_over_characters, character_sum_over_residues,
    nonprincipal_character_sum, psi_ap_from_twisted, psi_twisted_all,
};
use pairsieve_core::factor::FactorSegment;
use pairsieve_core::sieve::{gcd, APClass, PrimeTable};
use pairsieve_core::sums::{
    inversion_decomposition, pair_count, pair_weighted_sum, psi_ap, LinearForm,
};

#[test]
fn ap_partition_to_1e5() {
    let table = PrimeTable::build(100_000).unwrap();
    for q in 2..=30u64 {
        for x in [10_000u64, 50_000, 100_000] {
            let mut total = 0u64;
            for a in 1..=q {
                if gcd(a, q) == 1 {
                    total += table
                        .count_primes_in_ap(x, APClass::new(a, q).unwrap())
                        .unwrap();
                }
            }
            let dividing = table
                .primes_in(2, x.min(q))
                .filter(|&p| q % p == 0)
                .count() as u64;
            assert_eq!(total + dividing, table.prime_count(x).unwrap(), "q={q} x={x}");
        }
    }
}

#[test]
fn segmented_vs_monolithic_to_1e7() {
    let seg = PrimeTable::build(10_000_000).unwrap();
    let mono = PrimeTable::build_with_segment_words(10_000_000, usize::MAX / 256).unwrap();
    for x in [2u64, 97, 10_000, 999_983, 5_000_000, 10_000_000] {
        assert_eq!(seg.prime_count(x).unwrap(), mono.prime_count(x).unwrap());
    }
    let a: Vec<u64> = seg.primes_in(9_999_000, 10_000_000).collect();
    let b: Vec<u64> = mono.primes_in(9_999_000, 10_000_000).collect();
    assert_eq!(a, b);
}

#[test]
fn factor_segment_matches_oracle_to_1e5() {
    let seg_lo = FactorSegment::build(2, 50_000).unwrap();
    let seg_hi = FactorSegment::build(50_000, 100_001).unwrap();
    for n in 2..=100_000u64 {
        let seg = if n < 50_000 { &seg_lo } else { &seg_hi };
        assert_eq!(seg.mu(n) as i64, mu_oracle(n), "mu({n})");
        assert_eq!(seg.phi(n), phi_oracle(n), "phi({n})");
        let lam = lambda_oracle(n);
        assert!((seg.lambda(n) - lam).abs() <= 1e-12 * lam.max(1.0), "lambda({n})");
    }
}

#[test]
fn arith_matches_oracle_on_sample() {
    for n in (1..=100_000u64).step_by(97) {
        let v = evaluate(n).unwrap();
        assert_eq!(v.mu as i64, mu_oracle(n));
        assert_eq!(v.phi, phi_oracle(n));
        assert!((v.lambda - lambda_oracle(n)).abs() < 1e-12);
    }
}

#[test]
fn orthogonality_first_relation_to_q500() {
    for q in 1..=500u64 {
        let g = character_group(q).unwrap();
        for chi in g.characters() {
            let s = character_sum_over_residues(&chi).unwrap();
            let expect = if chi.is_principal() { g.phi() as i64 } else { 0 };
            assert_eq!(s, expect, "q={q}");
        }
    }
}

#[test]
fn nonprincipal_sums_match_closed_form_to_q200() {
    for q in 1..=200u64 {
        for a in 1..=q {
            if gcd(a, q) != 1 {
                continue;
            }
            let s = nonprincipal_character_sum(q, a).unwrap();
            let phi = phi_oracle(q) as f64;
            let expect = if a % q == 1 % q { phi - 1.0 } else { -1.0 };
            assert_eq!(s.re, expect, "q={q} a={a}");
            assert_eq!(s.im, 0.0);
        }
    }
}

#[test]
fn character_decomposition_matches_direct_to_q100() {
    let table = PrimeTable::build(100_000).unwrap();
    for &x in &[10_000u64, 100_000] {
        let psi_x = psi_ap(&table, x, 1, 1).unwrap();
        let tol = 1e-9 * psi_x;
        for q in 1..=100u64 {
            let group = character_group(q).unwrap();
            let twisted = psi_twisted_all(&table, x, &group).unwrap();
            for a in 1..=q {
                if gcd(a, q) != 1 {
                    continue;
                }
                let via = psi_ap_from_twisted(&group, &twisted, a).unwrap();
                let direct = psi_ap(&table, x, q, a).unwrap();
                assert!(
                    (via - direct).abs() <= tol,
                    "x={x} q={q} a={a}: {via} vs {direct}"
                );
            }
        }
    }
}

#[test]
fn inversion_identity_against_naive_double_sum() {
    // The library's double sum against a naive test-side evaluation of the
    // same expression, with independently computed mu.
    let table = PrimeTable::build(4_200).unwrap();
    let form = LinearForm::new(1, 4).unwrap();
    let x = 4_000u64;
    let lib = inversion_decomposition(&table, x, form, false).unwrap();

    let is_p = naive_sieve(4_300);
    let mut naive = 0.0f64;
    for d in 2..=(x + 4) {
        let mu = mu_oracle(d);
        if mu == 0 {
            continue;
        }
        let mut inner = 0.0f64;
        let mut c = (d - (4 % d)) % d;
        if c == 0 {
            c = d;
        }
        while c <= x {
            if c >= 2 && is_p[c as usize] {
                inner += 1.0 / c as f64;
            }
            c += d;
        }
        naive += -(mu as f64) * (d as f64).ln() * inner;
    }
    assert!((lib.total - naive).abs() < 1e-9, "{} vs {naive}", lib.total);
}

#[test]
fn restricted_difference_supported_on_primes_dividing_k() {
    let table = PrimeTable::build(3_000).unwrap();
    let x = 2_000u64;
    for k in [2i64, 4, 6, 10, 12] {
        let form = LinearForm::new(1, k).unwrap();
        let unres = pair_weighted_sum(&table, x, form).unwrap();
        let res = inversion_decomposition(&table, x, form, true).unwrap().total;

        // Correction terms at the finitely many primes p | k.
        let mut drop_direct = 0.0f64;
        let mut drop_restricted = 0.0f64;
        for p in [2u64, 3, 5, 7] {
            if k.unsigned_abs() % p != 0 || p > x {
                continue;
            }
            let image = p as i64 + k;
            if image < 2 {
                continue;
            }
            let image = image as u64;
            drop_direct += lambda_oracle(image) / p as f64;
            // k-free part of the image.
            let mut v = image;
            for (r, _) in factorize_oracle(k.unsigned_abs()) {
                while v % r == 0 {
                    v /= r;
                }
            }
            drop_restricted += lambda_oracle(v) / p as f64;
        }
        let lhs = unres - drop_direct;
        let rhs = res - drop_restricted;
        assert!(
            (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0),
            "k={k}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn pair_count_agrees_with_naive_double_check_to_1e5() {
    let table = PrimeTable::build(100_000).unwrap();
    let is_p = naive_sieve(100_000);
    for k in [2i64, 4, 6] {
        let form = LinearForm::new(1, k).unwrap();
        for x in [1_000u64, 10_000, 100_000] {
            let lib = pair_count(&table, x, form).unwrap();
            let mut naive = 0u64;
            for p in 2..=x {
                let v = p as i64 + k;
                if v >= 0 && v as u64 <= x && is_p[p as usize] && is_p[v as usize] {
                    naive += 1;
                }
            }
            assert_eq!(lib, naive, "k={k} x={x}");
        }
    }
}

#[test]
fn orthogonality_second_relation_spot_to_q200() {
    // The full q <= 200 sweep lives in the acceptance suite; here a coarse
    // lattice cross-checks the same relation against phi from the oracle.
    for q in (3..=200u64).step_by(7) {
        let g = character_group(q).unwrap();
        for a in 1..=q {
            if gcd(a, q) != 1 {
                continue;
            }
            let s = character_sum_over_characters(&g, a, 1).unwrap();
            let expect = if a % q == 1 { phi_oracle(q) as i64 } else { 0 };
            assert_eq!(s, expect, "q={q} a={a}");
        }
    }
}

#[test]
fn divisor_identity_suite_to_1e5() {
    let r = pairsieve_core::arith::divisor_identity_suite(100_000).unwrap();
    assert!(r.mobius_ok, "first failure {:?}", r.first_mobius_failure);
    assert!(r.totient_ok, "first failure {:?}", r.first_totient_failure);
    assert!(
        r.max_lambda_deviation <= 1e-9,
        "max deviation {}",
        r.max_lambda_deviation
    );
}

#[test]
fn montgomery_track_deterministic_across_worker_counts() {
    let table = PrimeTable::build(200_000).unwrap();
    let grid = [1_000u64, 10_000, 100_000];
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| montgomery_track(&table, &grid, 1..=20, ResidueRule::AllReduced).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.rows.len(), b.rows.len());
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        assert_eq!(ra.psi.to_bits(), rb.psi.to_bits());
        assert_eq!(ra.normalized.to_bits(), rb.normalized.to_bits());
    }
}

#[test]
fn psi_twisted_magnitude_bounded_by_psi() {
    let table = PrimeTable::build(50_000).unwrap();
    let psi_x = psi_ap(&table, 50_000, 1, 1).unwrap();
    for q in [3u64, 7, 8, 16, 24, 45] {
        let group = character_group(q).unwrap();
        let twisted = psi_twisted_all(&table, 50_000, &group).unwrap();
        for v in twisted {
            assert!(v.norm() <= psi_x * (1.0 + 1e-12), "q={q}");
        }
    }
}
