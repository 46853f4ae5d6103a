mod common;

use indexlab_core::morse::{check_morse_inequalities, BettiTable, MorseTable};
use indexlab_core::prover::{
    certificate, floor_sum_range, stated_floor_sum_set, verify_certificate, Certificate, Verdict,
};
use indexlab_core::{ExactReal, NcgCase};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_case_closes_and_verifies() {
    for n in 2..=50 {
        let cert = certificate(n, None);
        for case in NcgCase::ALL {
            let count = cert.traces.iter().filter(|t| t.case == case).count();
            let vacuous = cert
                .traces
                .iter()
                .any(|t| t.case == case && matches!(t.verdict, Verdict::Vacuous(_)));
            // one trace per parity of p unless the shape cannot occur at all;
            // the NCG1 argument does not split on p
            let expected = if vacuous || case == NcgCase::Ncg1 { 1 } else { 2 };
            assert_eq!(count, expected, "n = {n}, {case}");
        }
        for t in &cert.traces {
            assert!(t.verdict.is_resolved(), "{}: {:?}", t.label(), t.verdict);
        }
        verify_certificate(&cert).unwrap_or_else(|e| panic!("n = {n}: {e:?}"));
    }
}

#[test]
fn certificates_round_trip_through_json() {
    for n in [2, 3, 8, 13] {
        let cert = certificate(n, None);
        let text = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
    }
}

/// A single visible critical point in degree `h` is compatible with the low
/// Betti numbers exactly when `h = n - 1`.
#[test]
fn a_lone_low_critical_point_is_pinned_to_n_minus_one() {
    for n in 2..=20u32 {
        let top = u64::from(n) - 1;
        let betti = BettiTable::new(n, top);
        for h in 0..=top + 5 {
            let mut values = vec![0u64; top as usize + 1];
            if h <= top {
                values[h as usize] = 1;
            }
            // alternating sums of M - b must stay nonnegative
            let mut alt = 0i64;
            let mut oracle_ok = true;
            for q in 0..=top as usize {
                let b = if q as u64 == top { 1 } else { 0 };
                alt = values[q] as i64 - b - alt;
                oracle_ok &= alt >= 0 && values[q] as i64 >= b;
            }
            let found = check_morse_inequalities(&MorseTable::from_values(values), &betti, top).unwrap();
            assert_eq!(found.is_empty(), oracle_ok, "n = {n}, h = {h}");
            assert_eq!(oracle_ok, h == top, "n = {n}, h = {h}");
        }
        for t in certificate(n, None).traces {
            let pins = matches!(t.case, NcgCase::Ncg1 | NcgCase::Ncg2 | NcgCase::Ncg3)
                && !matches!(t.verdict, Verdict::Vacuous(_))
                && !(t.case != NcgCase::Ncg1 && t.steps.iter().any(|s| s.rule == "positive-mean-index"));
            if pins {
                assert!(t.steps.iter().any(|s| s.rule == "index-pinned"), "{}", t.label());
            }
        }
    }
}

fn rational(x: &ExactReal) -> BigRational {
    x.to_rational().expect("sum was built rational")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn realised_floor_sums_fall_in_the_range(seed in any::<u64>(), m in 1u64..300, terms in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = [2i64, 3, 5, 7][rng.gen_range(0..4)];
        // free irrational rotation numbers, then one more that makes the sum rational
        let mut rhos: Vec<ExactReal> = (1..terms).map(|_| common::random_rho(&mut rng, d)).collect();
        let target = ExactReal::from_rational(&BigRational::new(
            BigInt::from(rng.gen_range(1..=4 * terms as i64)),
            BigInt::from(rng.gen_range(1..=4)),
        ));
        let partial = rhos.iter().fold(ExactReal::zero(), |a, r| a.checked_add(r).unwrap());
        let last = target.checked_sub(&partial).unwrap().fract();
        prop_assume!(last.is_irrational());
        rhos.push(last);
        let sum = rhos.iter().fold(ExactReal::zero(), |a, r| a.checked_add(r).unwrap());
        let total = rational(&sum.scale_int(m));
        let floors: i64 = rhos.iter().map(|r| r.floor_scaled(m).to_i64().unwrap()).sum();

        let range = floor_sum_range(m, terms as u64, &total).unwrap();
        prop_assert!(range.contains(&floors), "{} not in {:?}", floors, range);
        let stated = stated_floor_sum_set(&total);
        for v in &range {
            prop_assert!(stated.contains(v));
        }
    }

    #[test]
    fn out_of_bounds_totals_are_rejected(m in 1u64..50, terms in 1u64..6, extra in 0i64..20) {
        let cap = BigRational::from_integer(BigInt::from(m * terms + extra as u64));
        prop_assert!(floor_sum_range(m, terms, &cap).is_err());
        let neg = BigRational::from_integer(BigInt::from(-extra));
        prop_assert!(floor_sum_range(m, terms, &neg).is_err());
    }
}
