use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use solitons_core::{
    eval_cutoff, eval_warp, integrate_soliton, link_scale, sphere_constant, validate_ideal_boundary,
    BoundaryData, SolitonKind,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cutoff_is_a_decreasing_bump(delta in 0.05f64..=1.0, x in 0.0f64..=FRAC_PI_2) {
        let (v, d) = eval_cutoff(delta, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(d <= 0.0);
    }

    #[test]
    fn warp_lies_between_scaled_sines(t in 0.05f64..=1.0, r in 1e-3f64..FRAC_PI_2) {
        let (v, d1, _) = eval_warp(t, r).unwrap();
        let s = r.sin();
        prop_assert!(v >= t * s * (1.0 - 1e-12));
        prop_assert!(v <= s * (1.0 + 1e-12));
        prop_assert!(d1 >= -1e-15);
    }

    #[test]
    fn link_scale_at_least_half(t in 0.0f64..=1.0) {
        let c = link_scale(t);
        prop_assert!((0.5..=1.0).contains(&c));
    }

    #[test]
    fn sphere_constants_recur(n in 3u32..12) {
        let (area, ball) = sphere_constant(n).unwrap();
        let (lower, _) = sphere_constant(n - 2).unwrap();
        prop_assert!((area - 2.0 * std::f64::consts::PI * lower / (n - 2) as f64).abs() <= 1e-12 * area);
        prop_assert!((ball * n as f64 - area).abs() <= 1e-12 * area);
    }

    #[test]
    fn scaled_hemispheres_are_accepted(scale in 0.3f64..=1.0) {
        // a = cos, b = sin on [0, π/2] shrunk by `scale` keeps every condition
        let data = BoundaryData::from_fns(FRAC_PI_2, 201, |r| scale * r.cos(), |r| scale * r.sin()).unwrap();
        let rep = validate_ideal_boundary(&data, 1e-8);
        prop_assert!(rep.all_pass(), "{:?}", rep.failed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn steady_profiles_grow_sublinearly(n in 3u32..=5, kappa in 0.1f64..5.0) {
        let prof = integrate_soliton(n, SolitonKind::Steady, kappa, 10.0).unwrap();
        for row in prof.rows() {
            let [r, w, dw, _, df, scal, _] = row;
            prop_assert!(w > 0.0 && w <= r * (1.0 + 1e-9));
            prop_assert!(dw > 0.0 && dw <= 1.0 + 1e-9);
            prop_assert!(df >= 0.0);
            prop_assert!(scal > 0.0);
        }
    }
}
