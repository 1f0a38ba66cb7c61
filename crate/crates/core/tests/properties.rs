use std::f64::consts::PI;

use casimir_core::cavity::{cavity_det_factorized, compose_via_transfer, round_trip};
use casimir_core::scattering::{det_identity_residual, round_trip_residual, unitarity_residual};
use casimir_core::{
    cavity_det_s, cavity_smatrix, casimir_energy, casimir_force, compose_adjacent, CavityConfig, QuadratureSpec,
    ScattererModel,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn delta(g: f64) -> ScattererModel {
    ScattererModel::delta(g).unwrap()
}

fn any_physical_model() -> impl Strategy<Value = ScattererModel> {
    prop_oneof![
        (1e-3..1e3f64).prop_map(delta),
        Just(ScattererModel::perfect_mirror()),
        (0.01..20.0f64, 0.01..2.0f64).prop_map(|(v0, a)| ScattererModel::rect_barrier(v0, a).unwrap()),
        (0.1..100.0f64, 0.1..100.0f64).prop_map(|(z0, l)| ScattererModel::lc_shunt(z0, l).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn models_are_unitary(m in any_physical_model(), k in 1e-3..1e3f64) {
        let s = m.eval_real(k).unwrap();
        prop_assert!(unitarity_residual(&s) < 1e-10);
        if let Some(res) = det_identity_residual(&s) {
            prop_assert!(res < 1e-10);
        }
        prop_assert!((s.det().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_models_have_equal_amplitudes(m in any_physical_model(), k in 1e-3..1e3f64) {
        let s = m.eval_real(k).unwrap();
        prop_assert!(m.is_symmetric());
        prop_assert_eq!(s.r, s.r_bar);
        prop_assert_eq!(s.t, s.t_bar);
    }

    #[test]
    fn transfer_round_trip(g in 1e-2..1e2f64, k in 1e-2..1e2f64) {
        let s = delta(g).eval_real(k).unwrap();
        prop_assert!(round_trip_residual(&s).unwrap() < 1e-10);
    }

    #[test]
    fn imaginary_axis_reflection_in_unit_interval(g in 1e-3..1e3f64, kappa in 1e-3..1e3f64) {
        let r = delta(g).eval_imag(kappa).unwrap().r;
        prop_assert_eq!(r.im, 0.0);
        prop_assert!(r.re > -1.0 && r.re <= 0.0);
    }

    #[test]
    fn delta_reflection_decreases(g in 1e-2..1e2f64, k in 1e-2..1e2f64, dk in 1e-3..1.0f64) {
        let a = delta(g).eval_real(k).unwrap().r.norm();
        let b = delta(g).eval_real(k + dk).unwrap().r.norm();
        prop_assert!(b < a);
    }

    #[test]
    fn composition_routes_agree(g1 in 1e-2..1e2f64, g2 in 1e-2..1e2f64, k in 1e-2..1e2f64) {
        let s1 = delta(g1).eval_real(k).unwrap();
        let s2 = delta(g2).eval_real(k).unwrap();
        let adjacent = compose_adjacent(&s1, &s2).unwrap();
        let product = compose_via_transfer(&s1, &s2).unwrap();
        prop_assert!(adjacent.max_abs_diff(&product) < 1e-9);
        prop_assert!(unitarity_residual(&adjacent) < 1e-10);
    }

    #[test]
    fn cavity_determinant_forms_agree(
        g1 in 1e-2..1e2f64,
        g2 in 1e-2..1e2f64,
        l in 0.1..10.0f64,
        k in 1e-2..1e2f64,
    ) {
        let cfg = CavityConfig::new(delta(g1), delta(g2), l).unwrap();
        let kc = Complex64::new(k, 0.0);
        let ratio = cavity_det_s(&cfg, kc).unwrap();
        prop_assert!((ratio - cavity_det_factorized(&cfg, k).unwrap()).norm() < 1e-10);
        prop_assert!((ratio - cavity_smatrix(&cfg, kc).unwrap().det()).norm() < 1e-8);
    }

    #[test]
    fn round_trip_bounded_by_exponential(g1 in 0.0..1e3f64, g2 in 0.0..1e3f64, l in 0.1..10.0f64, x in 0.0..50.0f64) {
        let cfg = CavityConfig::new(delta(g1), delta(g2), l).unwrap();
        let rho = round_trip(&cfg, x).unwrap();
        prop_assert!(rho >= 0.0 && rho <= (-x).exp());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delta_mirrors_attract(g1 in 1e-3..1e2f64, g2 in 1e-3..1e2f64, l in 0.1..10.0f64) {
        let cfg = CavityConfig::new(delta(g1), delta(g2), l).unwrap();
        let spec = QuadratureSpec::default();
        prop_assert!(casimir_force(&cfg, &spec).unwrap().value < 0.0);
        prop_assert!(casimir_energy(&cfg, &spec).unwrap().value < 0.0);
    }

    #[test]
    fn force_depends_only_on_coupling_times_length(gamma in 1e-2..1e2f64, l in 0.1..10.0f64) {
        let spec = QuadratureSpec::default();
        let unit = CavityConfig::new(delta(gamma), delta(gamma), 1.0).unwrap();
        let scaled = CavityConfig::new(delta(gamma / l), delta(gamma / l), l).unwrap();
        let a = casimir_force(&unit, &spec).unwrap().value;
        let b = casimir_force(&scaled, &spec).unwrap().value * l * l;
        prop_assert!(((a - b) / a).abs() < 1e-9);
    }

    #[test]
    fn weaker_than_perfect_mirrors(g in 1e-3..1e4f64) {
        let spec = QuadratureSpec::default();
        let cfg = CavityConfig::new(delta(g), delta(g), 1.0).unwrap();
        let f = casimir_force(&cfg, &spec).unwrap().value;
        prop_assert!(f > -PI / 24.0);
        let e = casimir_energy(&cfg, &spec).unwrap().value;
        prop_assert!(e > -PI / 24.0);
    }

    #[test]
    fn energy_grows_with_coupling(g in 1e-2..1e2f64, factor in 1.1..10.0f64) {
        let spec = QuadratureSpec::default();
        let weak = CavityConfig::new(delta(g), delta(g), 1.0).unwrap();
        let strong = CavityConfig::new(delta(g * factor), delta(g * factor), 1.0).unwrap();
        prop_assert!(casimir_energy(&strong, &spec).unwrap().value < casimir_energy(&weak, &spec).unwrap().value);
    }
}
