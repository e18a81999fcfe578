mod common;

use knob_core::dynamics::{
    apply_operation, evolve_composite_with_exponent, gamma_aux_product, kraus_elements, MapLinearity,
};
use knob_core::markov::{composite_trace_distance, qubit_trace_distance, reduced_trace_distance};
use knob_core::spectral::{dephasing_exponent, dephasing_rate};
use knob_core::state::{c, max_entry_difference2, Matrix2c};
use knob_core::{
    CompositeState, DriveProfile, PiecewiseConstant, QuadratureConfig, QubitState, ReducedParameters,
    SpectralDensity, Temperature,
};
use proptest::prelude::*;

fn bloch() -> impl Strategy<Value = QubitState> {
    (0.0..=1.0f64, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(r, th, ph)| {
        QubitState::from_bloch(r * th.sin() * ph.cos(), r * th.sin() * ph.sin(), r * th.cos()).unwrap()
    })
}

fn composite() -> impl Strategy<Value = CompositeState> {
    any::<u64>().prop_map(|seed| common::random_composite(&mut common::rng(seed)))
}

fn steps() -> impl Strategy<Value = PiecewiseConstant> {
    prop::collection::vec((0.1..3.0f64, -0.5..0.5f64), 1..4).prop_map(|segs| {
        let mut bps = vec![0.0];
        for (len, _) in &segs[..segs.len() - 1] {
            bps.push(bps.last().unwrap() + len);
        }
        PiecewiseConstant::new(bps, segs.iter().map(|s| s.1).collect()).unwrap()
    })
}

fn drive() -> impl Strategy<Value = DriveProfile> {
    (steps(), steps(), steps()).prop_map(|(eps1, eps2, j)| DriveProfile { eps1, eps2, j })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_distance_is_a_metric(a in bloch(), b in bloch(), x in bloch()) {
        let d = qubit_trace_distance;
        prop_assert!(d(&a, &a) < 1e-12);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-12);
        prop_assert!(d(&a, &x) <= d(&a, &b) + d(&b, &x) + 1e-10);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d(&a, &b)));
    }

    #[test]
    fn evolution_preserves_populations_and_trace(rho in composite(), drive in drive(), g in 0.0..3.0f64, t in 0.0..10.0f64) {
        let out = evolve_composite_with_exponent(&rho, &drive, g, t);
        for i in 0..4 {
            prop_assert!((out.element(i, i) - rho.element(i, i)).norm() < 1e-15);
        }
        prop_assert!(out.check_physical().is_ok());
        // the |+-><-+| coherence sits in a decoherence-free pair
        prop_assert!((out.element(1, 2).norm() - rho.element(1, 2).norm()).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_matches_reduced_form(rho in composite(), drive in drive(), g in 0.0..3.0f64, t in 0.0..10.0f64) {
        let full = evolve_composite_with_exponent(&rho, &drive, g, t).reduce_to_first();
        let red = ReducedParameters::from_state(&rho).reduced_state(&drive, g, t);
        prop_assert!(max_entry_difference2(full.matrix(), red.matrix()) < 1e-12);
    }

    #[test]
    fn closed_form_distance_matches_eigensolve(a in composite(), b in composite(), drive in drive(), g in 0.0..3.0f64, t in 0.0..10.0f64) {
        let (pa, pb) = (ReducedParameters::from_state(&a), ReducedParameters::from_state(&b));
        let closed = reduced_trace_distance(&pa, &pb, &drive, g, t);
        let direct = qubit_trace_distance(&pa.reduced_state(&drive, g, t), &pb.reduced_state(&drive, g, t));
        prop_assert!((closed - direct).abs() < 1e-12);
    }

    #[test]
    fn composite_distance_contracts_when_gamma_grows(a in composite(), b in composite(), drive in drive(), g in 0.0..2.0f64, dg in 0.0..1.0f64, t in 0.0..5.0f64) {
        // pure damping with phases frozen: a larger exponent never increases D
        let frozen = DriveProfile::constant(0.0, 0.0, 0.0);
        let d0 = composite_trace_distance(&evolve_composite_with_exponent(&a, &frozen, g, 0.0), &evolve_composite_with_exponent(&b, &frozen, g, 0.0));
        let d1 = composite_trace_distance(&evolve_composite_with_exponent(&a, &frozen, g + dg, 0.0), &evolve_composite_with_exponent(&b, &frozen, g + dg, 0.0));
        prop_assert!(d1 <= d0 + 1e-10);
        // unitary phases alone preserve D
        let u = composite_trace_distance(&evolve_composite_with_exponent(&a, &drive, 0.0, t), &evolve_composite_with_exponent(&b, &drive, 0.0, t));
        prop_assert!((u - composite_trace_distance(&a, &b)).abs() < 1e-10);
    }

    #[test]
    fn kraus_elements_are_complete_and_reproduce(first in bloch(), aux in bloch(), j in 0.0..0.5f64, g in 0.0..3.0f64, t in 0.0..10.0f64) {
        let rho = CompositeState::product(&first, &aux);
        let drive = DriveProfile::constant(0.3, 0.1, j);
        match kraus_elements(&rho, &drive, g, t) {
            Ok(ops) => {
                let sum = ops.iter().fold(Matrix2c::zeros(), |acc, p| acc + p.adjoint() * p);
                prop_assert!(max_entry_difference2(&sum, &Matrix2c::identity()) < 1e-12);
                let params = ReducedParameters::from_state(&rho);
                let out = apply_operation(&ops, &params.reduced_state(&drive, 0.0, 0.0));
                prop_assert!(max_entry_difference2(out.matrix(), params.reduced_state(&drive, g, t).matrix()) < 1e-12);
            }
            Err(knob_core::Error::UndefinedRepresentation(_)) => prop_assert!(first.coherence().norm() < 1e-6),
            Err(knob_core::Error::InvalidRepresentation(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
        prop_assert!(MapLinearity::of(&rho, &drive).is_linear());
    }

    #[test]
    fn gamma_tilde_is_gamma_plus_aux(first in bloch(), aux in bloch(), j in 0.0..0.5f64, gamma in -1.0..1.0f64, t in 0.0..20.0f64) {
        let rho = CompositeState::product(&first, &aux);
        let drive = DriveProfile::constant(0.0, 0.0, j);
        let rates = ReducedParameters::from_state(&rho).effective_rates(&drive, gamma, t);
        if let (Some(gt), Some(ga)) = (rates.gamma_tilde, rates.gamma_aux) {
            prop_assert!((gt - gamma - ga).abs() < 1e-15);
            if let Some(closed) = gamma_aux_product(aux.sigma_z_mean(), &drive, t).unwrap() {
                prop_assert!((closed - ga).abs() < 1e-8 * (1.0 + ga.abs()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn exponent_derivative_is_rate(t in 0.05..20.0f64, temp in prop::sample::select(vec![0.0, 0.1, 1.0]), s in prop::sample::select(vec![1.0, 2.0, 3.0])) {
        let sd = SpectralDensity::power_law(0.1, s, 1.0);
        let q = QuadratureConfig { rel_tol: 1e-11, abs_tol: 1e-14, ..QuadratureConfig::default() };
        let temp = Temperature::new(temp).unwrap();
        let h = 1e-4;
        let fd = (dephasing_exponent(&sd, temp, t + h, &q).unwrap() - dephasing_exponent(&sd, temp, t - h, &q).unwrap()) / (2.0 * h);
        let rate = dephasing_rate(&sd, temp, t, &q).unwrap();
        prop_assert!((fd - rate).abs() <= 1e-5 * rate.abs().max(1e-3), "fd {fd} rate {rate}");
    }

    #[test]
    fn ohmic_family_rate_is_non_negative(t in 0.0..30.0f64, temp in 0.0..2.0f64, s in 0.5..=2.0f64) {
        let sd = SpectralDensity::power_law(0.1, s, 1.0);
        let rate = dephasing_rate(&sd, Temperature::new(temp).unwrap(), t, &QuadratureConfig::default()).unwrap();
        prop_assert!(rate >= -1e-9);
    }
}

#[test]
fn bell_state_reduced_dynamics_is_frozen() {
    let phi = CompositeState::phi_plus();
    let drive = DriveProfile::constant(0.4, 0.2, 0.3);
    for k in 0..50 {
        let t = 0.5 * k as f64;
        let red = ReducedParameters::from_state(&phi).reduced_state(&drive, 0.1 * t, t);
        assert_eq!(red.coherence(), c(0.0, 0.0));
        assert!((red.population_plus() - 0.5).abs() < 1e-15);
    }
}
