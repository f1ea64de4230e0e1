//! Property tests: multiplicativity, complete multiplicativity of
//! characters, and round-trip invariants.

mod common;

use common::{mu_oracle, phi_oracle};
use pairsieve_core::arith::evaluate;
use pairsieve_core::dirichlet::{character_group, CharValue};
use pairsieve_core::sieve::gcd;
use pairsieve_core::sums::{GridSpec, SumTrace, TracePoint};
use proptest::prelude::*;

proptest! {
    #[test]
    fn mu_and_phi_multiplicative_on_coprime_pairs(
        a in 1u64..1_000_000,
        b in 1u64..1_000_000,
    ) {
        prop_assume!(gcd(a, b) == 1);
        prop_assume!(a.checked_mul(b).is_some());
        let va = evaluate(a).unwrap();
        let vb = evaluate(b).unwrap();
        let vab = evaluate(a * b).unwrap();
        prop_assert_eq!(vab.mu as i64, va.mu as i64 * vb.mu as i64);
        prop_assert_eq!(vab.phi, va.phi * vb.phi);
    }

    #[test]
    fn evaluate_matches_oracle(n in 1u64..500_000) {
        let v = evaluate(n).unwrap();
        prop_assert_eq!(v.mu as i64, mu_oracle(n));
        prop_assert_eq!(v.phi, phi_oracle(n));
    }

    #[test]
    fn characters_completely_multiplicative(
        q in 1u64..300,
        m in 1u64..10_000,
        n in 1u64..10_000,
    ) {
        let g = character_group(q).unwrap();
        for chi in g.characters() {
            let lhs = chi.eval(m * n);
            let rhs = match (chi.exponent_of(m), chi.exponent_of(n)) {
                (Some(a), Some(b)) => CharValue::Root {
                    num: (a + b) % g.exponent(),
                    den: g.exponent(),
                },
                _ => CharValue::Zero,
            };
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn grid_checkpoints_strictly_increasing(
        lo in 1.0f64..1e6,
        span in 1.0f64..1e6,
        ratio in 1.001f64..100.0,
    ) {
        let g = GridSpec::new(lo, lo + span, ratio).unwrap();
        let cps = g.checkpoints();
        prop_assert!(!cps.is_empty());
        prop_assert!(cps.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(*cps.last().unwrap() as f64 <= (lo + span) * (1.0 + 1e-9));
    }

    #[test]
    fn trace_csv_round_trips_at_12_digits(
        points in prop::collection::vec((1.0f64..1e12, -1e6f64..1e6), 1..40)
    ) {
        let mut tr = SumTrace::new("prop", vec![]);
        let mut x_prev = 0.0;
        for (dx, v) in points {
            let x = x_prev + dx;
            x_prev = x;
            tr.checkpoints.push(TracePoint { x, value: v, main: Some(v / 2.0), residual: None });
        }
        let back = SumTrace::from_csv(&tr.to_csv()).unwrap();
        prop_assert_eq!(back.checkpoints.len(), tr.checkpoints.len());
        for (a, b) in tr.checkpoints.iter().zip(&back.checkpoints) {
            prop_assert!((a.x - b.x).abs() <= 1e-11 * a.x.abs().max(1.0));
            prop_assert!((a.value - b.value).abs() <= 1e-11 * a.value.abs().max(1.0));
            let (am, bm) = (a.main.unwrap(), b.main.unwrap());
            prop_assert!((am - bm).abs() <= 1e-11 * am.abs().max(1.0));
            prop_assert!(b.residual.is_none());
        }
    }
}
