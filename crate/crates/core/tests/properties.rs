//! Structural invariants of the construction, checked on random inputs.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use toeplitz_sarnak::construction::materialize_stage_bruteforce;
use toeplitz_sarnak::schedule::generate_schedule;
use toeplitz_sarnak::{MemoryBudget, MobiusSieve, ParamSchedule, SeqIndex, Toeplitz};

fn sieve() -> &'static MobiusSieve {
    static S: OnceLock<MobiusSieve> = OnceLock::new();
    S.get_or_init(|| MobiusSieve::new(1 << 21, &MemoryBudget::default()).unwrap())
}

fn tower() -> &'static ParamSchedule {
    static S: OnceLock<ParamSchedule> = OnceLock::new();
    S.get_or_init(ParamSchedule::default_tower)
}

/// ε₀ between 1/4 and 1 keeps l_2 small enough for the materializer.
fn epsilon0() -> impl Strategy<Value = BigRational> {
    (4i64..=16).prop_flat_map(|d| {
        ((d + 3) / 4..=d).prop_map(move |n| BigRational::new(BigInt::from(n), BigInt::from(d)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lazy_matches_materialized(eps in epsilon0(), stage in 0usize..=3, lo in -200_000i128..200_000, width in 0i128..3000) {
        let s = generate_schedule(&eps, 3).unwrap();
        let t = Toeplitz::new(&s, sieve()).unwrap();
        let oracle = materialize_stage_bruteforce(&t, stage, lo, lo + width).unwrap();
        for (i, v) in oracle.iter().enumerate() {
            prop_assert_eq!(t.stage_value(stage, lo + i as SeqIndex).unwrap(), *v);
        }
    }

    #[test]
    fn stages_stabilize(n in -(1i128 << 40)..(1i128 << 40)) {
        let t = Toeplitz::new(tower(), sieve()).unwrap();
        let first = t.limit_stage(n).unwrap();
        let v = t.stage_value(first, n).unwrap();
        for later in first..=tower().m_max() {
            prop_assert_eq!(t.stage_value(later, n).unwrap(), v);
        }
    }

    #[test]
    fn components_sum_to_stage(n in -(1i128 << 40)..(1i128 << 40), stage in 0usize..=4) {
        let t = Toeplitz::new(tower(), sieve()).unwrap();
        let sum: i8 = (0..=stage).map(|m| t.component_value(m, stage, n).unwrap().value()).sum();
        prop_assert_eq!(sum, t.stage_value(stage, n).unwrap().value());
    }

    #[test]
    fn components_are_periodic(n in -(1i128 << 30)..(1i128 << 30), m in 1usize..=3, shift in -1000i128..1000) {
        let t = Toeplitz::new(tower(), sieve()).unwrap();
        let period = tower().length(3);
        prop_assert_eq!(
            t.component_value(m, 3, n).unwrap(),
            t.component_value(m, 3, n + shift * period).unwrap()
        );
    }

    #[test]
    fn regular_recurrence(i in -(1i128 << 24)..(1i128 << 24), step in -1000i128..1000) {
        let t = Toeplitz::new(tower(), sieve()).unwrap();
        let s = tower();
        let m = (1..=s.m_max()).find(|&m| s.length(m - 1) > i.abs()).unwrap();
        prop_assert_eq!(t.limit_value(i).unwrap(), t.limit_value(i + step * s.length(m)).unwrap());
    }

    #[test]
    fn difference_sets_avoid_the_origin(n in -(1i128 << 40)..(1i128 << 40), m in 2usize..=4) {
        let t = Toeplitz::new(tower(), sieve()).unwrap();
        if t.in_difference_set(m, n).unwrap() {
            prop_assert!(n.abs() >= tower().length(m) - tower().length(m - 1));
        }
    }
}
