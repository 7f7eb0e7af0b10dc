use proptest::prelude::*;

use resonance_core::integrals::{base_check, pair_sum, rf_check, Shift};
use resonance_core::resonator::{ResonatorParams, ResonatorSet};

fn set_for(t: f64, lo: f64, width: f64, cap: u32) -> ResonatorSet {
    let p = ResonatorParams::at_height(t, 0.5, 0.5, 1.5, 0.1)
        .unwrap()
        .with_override(lo, lo + width)
        .with_element_cap(cap);
    ResonatorSet::build(&p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn structural_invariants(t in 200.0f64..5e4, lo in 10.0f64..80.0, width in 8.0f64..40.0, cap in 1u32..4) {
        let set = set_for(t, lo, width, cap);
        prop_assert!(set.is_divisor_closed());
        prop_assert!(set.caps_respected());
        let (r2, f2) = rf_check(&set);
        prop_assert!(r2 <= f2);
        for rep in &set.reps {
            prop_assert!(rep.r >= set.support[rep.element].weight);
        }
        for &p in &set.blocks.primes {
            let b = base_check(&set, p);
            prop_assert!(b.holds(), "{:?}", b);
        }
    }

    #[test]
    fn resonator_symmetry_and_bound(x in -1e4f64..1e4, lo in 10.0f64..60.0, cap in 1u32..4) {
        let set = set_for(3000.0, lo, 30.0, cap);
        let a = set.value(x);
        let b = set.value(-x);
        prop_assert!((a - b.conj()).norm() < 1e-9 * set.value_at_zero());
        prop_assert!(a.norm() <= set.value_at_zero() * (1.0 + 1e-12));
    }

    #[test]
    fn pair_sum_dominates_diagonal(t in 300.0f64..1e4, lo in 10.0f64..60.0) {
        let set = set_for(t, lo, 25.0, 3);
        let ps = pair_sum(&set, t, Shift::Unit);
        let diag = (2.0 * std::f64::consts::PI).sqrt() * t * set.sum_r_squared();
        prop_assert!((ps.diagonal - diag).abs() < 1e-9 * diag);
        prop_assert!(ps.off_diagonal >= 0.0);
    }
}
