use mollow_core::correlations::second_order_many;
use mollow_core::lindblad::{steady_state, EvolveOptions, UniformGrid};
use mollow_core::models::{
    build_dressed_secular, build_two_level, dressed_g2_auto, dressed_g2_cross, BuiltSystem,
    TwoLevelParams,
};
use mollow_core::Error;

fn params(g: f64, kappa: f64) -> TwoLevelParams {
    TwoLevelParams {
        g,
        kappa,
        ..TwoLevelParams::default()
    }
}

/// `[g²_r, g²_rb]` on `τ ∈ [0, 10]`.
fn curves(sys: &BuiltSystem) -> [Vec<f64>; 2] {
    let l = &sys.liouvillian;
    let rho = steady_state(l).unwrap();
    let grid = UniformGrid::span(10.0, 0.05).unwrap();
    let (r, b) = (sys.operator("r").unwrap(), sys.operator("b").unwrap());
    let s = second_order_many(l, &rho, r, &[r, b], &grid, &EvolveOptions::default()).unwrap();
    [s[0].real(), s[1].real()]
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn closed_forms() {
    assert_eq!(dressed_g2_auto(0.0, 1.0), 0.0);
    assert!((dressed_g2_auto(2.0 * 2f64.ln(), 1.0) - 0.5).abs() < 1e-15);
    assert!((dressed_g2_auto(80.0, 1.0) - 1.0).abs() < 1e-15);
    assert!((dressed_g2_cross(0.0, 1.0, 2.5) - 1.0).abs() < 1e-15);
    assert!((dressed_g2_cross(80.0, 1.0, 2.5) - 1.0).abs() < 1e-15);
}

#[test]
fn off_resonance_is_rejected() {
    let p = TwoLevelParams {
        omega_rabi: 20.0,
        ..params(1.0, 1.0)
    };
    assert!(matches!(
        build_dressed_secular(&p),
        Err(Error::InvalidParameter { name: "omega_rabi", .. })
    ));
}

#[test]
fn uncoupled_modes_relax_to_vacuum() {
    let sys = build_dressed_secular(&params(0.0, 2.5)).unwrap();
    let rho = steady_state(&sys.liouvillian).unwrap();
    let r = rho.reduced_populations("red").unwrap();
    let b = rho.reduced_populations("blue").unwrap();
    assert!((r[0] - 1.0).abs() < 1e-12 && (b[0] - 1.0).abs() < 1e-12);
    // the dressed populations are equal
    let atom = rho.reduced_populations("atom").unwrap();
    assert!((atom[0] - 0.5).abs() < 1e-12);
}

#[test]
fn reduced_model_tracks_full_model() {
    // frozen from a run at n_max = 3: the reduced model is antibunched and
    // bunched in the same places as the full one, but not within 0.05
    let p = params(0.25, 2.5);
    let full = curves(&build_two_level(&p).unwrap());
    let reduced = curves(&build_dressed_secular(&p).unwrap());
    assert!((full[0][0] - 0.1847).abs() < 5e-4);
    assert!((reduced[0][0] - 0.0737).abs() < 5e-4);
    assert!((full[1][0] - 1.0823).abs() < 5e-4);
    assert!((reduced[1][0] - 1.1467).abs() < 5e-4);
    let auto = max_dev(&full[0], &reduced[0]);
    let cross = max_dev(&full[1], &reduced[1]);
    assert!((auto - 0.1110).abs() < 2e-3, "{auto}");
    assert!((cross - 0.0898).abs() < 2e-3, "{cross}");
}

#[test]
fn reduced_model_against_closed_forms() {
    let p = params(0.25, 2.5);
    let reduced = curves(&build_dressed_secular(&p).unwrap());
    let taus = UniformGrid::span(10.0, 0.05).unwrap().points();
    let auto: Vec<f64> = taus.iter().map(|&t| dressed_g2_auto(t, p.gamma)).collect();
    let cross: Vec<f64> = taus.iter().map(|&t| dressed_g2_cross(t, p.gamma, p.kappa)).collect();
    // both approach one at long delay
    assert!((reduced[0].last().unwrap() - 1.0).abs() < 0.01);
    assert!((reduced[1].last().unwrap() - 1.0).abs() < 0.01);
    assert!(max_dev(&reduced[0], &auto) < 0.1);
    assert!(max_dev(&reduced[1], &cross) > 0.2);
}
