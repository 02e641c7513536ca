mod common;

use common::random_system;
use mollow_core::correlations::{first_order, second_order, second_order_many, CorrelationKind};
use mollow_core::hilbert::{expectation, DensityOperator};
use mollow_core::lindblad::{steady_state, EvolveOptions, UniformGrid};
use mollow_core::models::{build_two_level, TwoLevelParams};
use mollow_core::{Error, C64};
use mollow_oracle as oracle;
use proptest::prelude::*;

fn tolerance(expect: &[C64]) -> f64 {
    1e-8 * (1.0 + expect.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn first_order_matches_exponential(sys in random_system()) {
        let l = sys.liouvillian();
        let rho = steady_state(&l).unwrap();
        let o = &sys.channels[0].1;
        let grid = UniformGrid::span(2.0, 0.25).unwrap();
        let got = first_order(&l, &rho, &sys.operator(o), &grid).unwrap();

        let r = rho.matrix();
        let mean = oracle::trace(&(o * r));
        let x0 = oracle::add(&(o * r), r, -mean);
        let dense_l = oracle::super_matrix(&sys.h, &sys.channels);
        let expect = oracle::two_time(&dense_l, &x0, &oracle::adjoint(o), &grid.points());
        let tol = tolerance(&expect);
        for (a, b) in got.values.iter().zip(&expect) {
            prop_assert!((a - b).norm() <= tol, "{a} vs {b}");
        }
        // τ = 0 is the variance
        let od = oracle::adjoint(o);
        let var = oracle::trace(&(&(&od * o) * r)) - mean.norm_sqr();
        prop_assert!((got.values[0] - var).norm() <= tol);
    }

    #[test]
    fn second_order_matches_exponential(sys in random_system()) {
        let l = sys.liouvillian();
        let rho = steady_state(&l).unwrap();
        let o1 = &sys.channels[0].1;
        let o2 = &sys.h;
        let grid = UniformGrid::span(2.0, 0.25).unwrap();
        let (a1, a2) = (sys.operator(o1), sys.operator(o2));
        let got = second_order_many(&l, &rho, &a1, &[&a1, &a2], &grid, &EvolveOptions::default()).unwrap();

        let r = rho.matrix();
        let dense_l = oracle::super_matrix(&sys.h, &sys.channels);
        let x0 = &(o1 * r) * &oracle::adjoint(o1);
        for (series, o2) in got.iter().zip([o1, o2]) {
            let n2 = &oracle::adjoint(o2) * o2;
            let d1 = oracle::trace(&(&(&oracle::adjoint(o1) * o1) * r)).re;
            let d2 = oracle::trace(&(&n2 * r)).re;
            let expect: Vec<C64> = oracle::two_time(&dense_l, &x0, &n2, &grid.points())
                .into_iter()
                .map(|v| v / (d1 * d2))
                .collect();
            let tol = tolerance(&expect);
            for (a, b) in series.values.iter().zip(&expect) {
                prop_assert!((a - b).norm() <= tol, "{a} vs {b}");
                prop_assert!(a.im == 0.0);
            }
            prop_assert!(series.max_imag <= 1e-8);
        }
        prop_assert_eq!(got[0].kind, CorrelationKind::SecondOrderAuto);
        prop_assert_eq!(got[1].kind, CorrelationKind::SecondOrderCross);
    }
}

#[test]
fn undriven_system_has_no_correlations() {
    let p = TwoLevelParams {
        omega_rabi: 0.0,
        n_max: 2,
        ..TwoLevelParams::default()
    };
    let sys = build_two_level(&p).unwrap();
    let rho = steady_state(&sys.liouvillian).unwrap();
    let grid = UniformGrid::span(1.0, 0.1).unwrap();
    let e = sys.operator("E").unwrap();
    let g1 = first_order(&sys.liouvillian, &rho, e, &grid).unwrap();
    assert!(g1.values.iter().all(|v| v.norm() < 1e-14));
    assert!(matches!(
        second_order(&sys.liouvillian, &rho, e, e, &grid),
        Err(Error::UndefinedCorrelation(_))
    ));
}

#[test]
fn non_stationary_state_is_rejected() {
    let p = TwoLevelParams {
        n_max: 1,
        ..TwoLevelParams::default()
    };
    let sys = build_two_level(&p).unwrap();
    let rho = DensityOperator::maximally_mixed(sys.layout.clone());
    let grid = UniformGrid::span(1.0, 0.1).unwrap();
    let e = sys.operator("E").unwrap();
    assert!(matches!(
        first_order(&sys.liouvillian, &rho, e, &grid),
        Err(Error::NotSteadyState { .. })
    ));
}

#[test]
fn atomic_first_order_at_zero_delay() {
    let p = TwoLevelParams {
        n_max: 1,
        g: 0.0,
        omega_rabi: 2.0,
        ..TwoLevelParams::default()
    };
    let sys = build_two_level(&p).unwrap();
    let rho = steady_state(&sys.liouvillian).unwrap();
    let sm = sys.operator("sigma_minus").unwrap();
    let grid = UniformGrid::span(0.5, 0.5).unwrap();
    let g1 = first_order(&sys.liouvillian, &rho, sm, &grid).unwrap();
    let pe = expectation(&rho, &(&sm.adjoint() * sm)).unwrap().re;
    let coh = expectation(&rho, sm).unwrap();
    assert!((g1.values[0].re - (pe - coh.norm_sqr())).abs() < 1e-12);
    // resonance fluorescence is antibunched
    let g2 = second_order(&sys.liouvillian, &rho, sm, sm, &grid).unwrap();
    assert!(g2.at_zero().abs() < 1e-12);
}
