use mollow_core::correlations::{cauchy_schwarz_report, second_order, second_order_many};
use mollow_core::hilbert::{expectation, DensityOperator};
use mollow_core::lindblad::{
    evolve, steady_state, steady_state_with, EvolveOptions, SteadyStateMethod,
    SteadyStateOptions, UniformGrid,
};
use mollow_core::models::{build_two_level, TwoLevelParams};
use mollow_core::C64;

fn params(g: f64, kappa: f64) -> TwoLevelParams {
    TwoLevelParams {
        g,
        kappa,
        ..TwoLevelParams::default()
    }
}

fn g2_at_zero(p: &TwoLevelParams, a: &str, b: &str) -> f64 {
    let sys = build_two_level(p).unwrap();
    let rho = steady_state(&sys.liouvillian).unwrap();
    let grid = UniformGrid::new(0.01, 1).unwrap();
    let (o1, o2) = (sys.operator(a).unwrap(), sys.operator(b).unwrap());
    second_order(&sys.liouvillian, &rho, o1, o2, &grid).unwrap().at_zero()
}

#[test]
fn quoted_correlations_at_unit_coupling() {
    let p = params(1.0, 1.0);
    let e = g2_at_zero(&p, "E", "E");
    let b = g2_at_zero(&p, "b", "b");
    let br = g2_at_zero(&p, "b", "r");
    assert!((e - 1.5).abs() <= 0.05, "g2_E(0) = {e}");
    assert!((b - 0.36).abs() <= 0.02, "g2_b(0) = {b}");
    assert!((br - 1.32).abs() <= 0.02, "g2_br(0) = {br}");
}

#[test]
fn frozen_values_at_unit_coupling() {
    // values from an independent dense prototype at n_max = 3
    let p = params(1.0, 1.0);
    assert!((g2_at_zero(&p, "E", "E") - 1.5047).abs() < 5e-4);
    assert!((g2_at_zero(&p, "b", "b") - 0.3610).abs() < 5e-4);
    assert!((g2_at_zero(&p, "r", "r") - 0.3610).abs() < 5e-4);
    assert!((g2_at_zero(&p, "b", "r") - 1.3174).abs() < 5e-4);
    assert!((g2_at_zero(&p, "r", "b") - 1.3174).abs() < 5e-4);
    let p = params(1.0, 2.5);
    assert!((g2_at_zero(&p, "b", "b") - 0.2152).abs() < 5e-4);
    assert!((g2_at_zero(&p, "b", "r") - 1.0925).abs() < 5e-4);
}

#[test]
fn undriven_uncoupled_relaxes_to_vacuum() {
    let p = TwoLevelParams {
        g: 0.0,
        omega_rabi: 0.0,
        ..TwoLevelParams::default()
    };
    let sys = build_two_level(&p).unwrap();
    let rho = steady_state(&sys.liouvillian).unwrap();
    let vac = DensityOperator::product_state(sys.layout.clone(), &[0, 0, 0]).unwrap();
    assert!(rho.max_abs_diff(&vac) < 1e-12);
}

#[test]
fn hamiltonian_is_hermitian() {
    for g in [0.0, 0.25, 1.0, 2.5] {
        let sys = build_two_level(&params(g, 2.5)).unwrap();
        assert_eq!(sys.liouvillian.hamiltonian().hermiticity_defect(), 0.0);
    }
}

#[test]
fn resolution_flag() {
    assert!(params(1.0, 1.0).modes_resolved());
    assert!(build_two_level(&params(1.0, 1.0)).unwrap().warnings.is_empty());
    let p = TwoLevelParams {
        delta0: 10.0,
        omega_rabi: 10.0,
        ..params(2.5, 2.5)
    };
    assert!(!p.modes_resolved());
    assert_eq!(build_two_level(&p).unwrap().warnings.len(), 1);
}

#[test]
fn mode_symmetry_of_auto_correlations() {
    let p = params(1.0, 1.0);
    let sys = build_two_level(&p).unwrap();
    let l = &sys.liouvillian;
    let rho = steady_state(l).unwrap();
    let grid = UniformGrid::span(5.0, 0.05).unwrap();
    let (r, b) = (sys.operator("r").unwrap(), sys.operator("b").unwrap());
    let gr = second_order(l, &rho, r, r, &grid).unwrap();
    let gb = second_order(l, &rho, b, b, &grid).unwrap();
    for (x, y) in gr.real().iter().zip(gb.real()) {
        assert!((x - y).abs() < 1e-6);
    }
}

#[test]
fn correlations_factorise_at_long_delay() {
    let p = params(0.25, 2.5);
    let sys = build_two_level(&p).unwrap();
    let l = &sys.liouvillian;
    let rho = steady_state(l).unwrap();
    let grid = UniformGrid::span(30.0, 0.5).unwrap();
    let (r, b, e) = (
        sys.operator("r").unwrap(),
        sys.operator("b").unwrap(),
        sys.operator("E").unwrap(),
    );
    for (o1, targets) in [(r, vec![r, b]), (b, vec![b, r]), (e, vec![e])] {
        for s in second_order_many(l, &rho, o1, &targets, &grid, &EvolveOptions::default()).unwrap() {
            let tail = s.values.last().unwrap().re;
            assert!((tail - 1.0).abs() < 0.01, "g2(30) = {tail}");
        }
    }
}

#[test]
fn cauchy_schwarz_violated_at_unit_coupling() {
    let sys = build_two_level(&params(1.0, 1.0)).unwrap();
    let l = &sys.liouvillian;
    let rho = steady_state(l).unwrap();
    let grid = UniformGrid::span(2.0, 0.02).unwrap();
    let (r, b) = (sys.operator("r").unwrap(), sys.operator("b").unwrap());
    let opts = EvolveOptions::default();
    let from_b = second_order_many(l, &rho, b, &[b, r], &grid, &opts).unwrap();
    let gr = second_order(l, &rho, r, r, &grid).unwrap();
    let rep = cauchy_schwarz_report(&from_b[0], &gr, &from_b[1]).unwrap();
    assert!(rep.single_mode[0].violated);
    assert!(rep.two_mode_at_zero.violated);
}

#[test]
fn steady_state_solvers_agree() {
    let sys = build_two_level(&TwoLevelParams {
        n_max: 2,
        ..params(1.0, 1.0)
    })
    .unwrap();
    let l = &sys.liouvillian;
    let direct = steady_state_with(
        l,
        &SteadyStateOptions {
            method: SteadyStateMethod::Direct,
            ..Default::default()
        },
    )
    .unwrap();
    let krylov = steady_state_with(
        l,
        &SteadyStateOptions {
            method: SteadyStateMethod::Krylov,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(direct.rho.max_abs_diff(&krylov.rho) < 1e-9);
    assert!(krylov.iterations > 0);
    assert!(krylov.residual <= krylov.target);
}

#[test]
fn excitation_number_conserved_without_drive_or_loss() {
    let p = TwoLevelParams {
        omega_rabi: 0.0,
        gamma: 1.0,
        ..params(1.0, 1.0)
    };
    let sys = build_two_level(&p).unwrap();
    // rebuild with the same Hamiltonian and no channels
    let l = mollow_core::lindblad::build_liouvillian(sys.liouvillian.hamiltonian().clone(), vec![])
        .unwrap();
    let sm = sys.operator("sigma_minus").unwrap();
    let (r, b) = (sys.operator("r").unwrap(), sys.operator("b").unwrap());
    let number = &(&(&sm.adjoint() * sm) + &(&r.adjoint() * r)) + &(&b.adjoint() * b);
    // excited atom with one photon in the red mode
    let rho0 = DensityOperator::product_state(sys.layout.clone(), &[1, 1, 0]).unwrap();
    let grid = UniformGrid::span(5.0, 0.25).unwrap();
    let n0 = expectation(&rho0, &number).unwrap();
    for rho in evolve(&l, &rho0, &grid, &EvolveOptions::default()).unwrap() {
        let n = expectation(&rho, &number).unwrap();
        assert!((n - n0).norm() < 1e-8);
        assert!((n0 - C64::new(2.0, 0.0)).norm() < 1e-15);
    }
}
