use mollow_cli::config::{ModelKind, SweepParam};
use mollow_cli::model::Model;
use mollow_cli::scenarios::{flux, flux_sweep, spectra};
use mollow_cli::ScenarioConfig;
use mollow_core::lindblad::UniformGrid;

fn model(kind: ModelKind, g: f64, kappa: f64, n_max: usize) -> Model {
    let mut cfg = ScenarioConfig::default();
    cfg.model = kind;
    cfg.two_level.g = g;
    cfg.two_level.kappa = kappa;
    cfg.two_level.n_max = n_max;
    cfg.cesium.g = g;
    cfg.cesium.kappa = kappa;
    cfg.cesium.n_max = n_max;
    Model::from_config(&cfg)
}

fn central_height(m: &Model) -> f64 {
    let solved = m.solve().unwrap();
    let tau = UniformGrid::span(20.0, 0.01).unwrap();
    let s = spectra(&solved, &[("atomic", "atom")], &tau, &[0.0]).unwrap();
    s[0].spectrum.values[0]
}

#[test]
fn cesium_central_peak_is_suppressed_by_coupling() {
    let weak = central_height(&model(ModelKind::Cesium, 0.25, 2.5, 1));
    let strong = central_height(&model(ModelKind::Cesium, 2.5, 2.5, 1));
    assert!(weak > 0.0);
    assert!(strong / weak < 1.0, "ratio {}", strong / weak);
}

#[test]
fn stronger_coupling_gives_more_flux_on_resonance() {
    let at = |g| {
        let m = model(ModelKind::TwoLevel, g, 2.5, 3).with(SweepParam::OmegaRabi, 25.0);
        flux(&m.solve().unwrap(), 2.5).unwrap()
    };
    assert!(at(1.0) > at(0.25));
}

#[test]
fn sweep_keeps_going_past_failures() {
    // Ω = 0 with g = 0 leaves every cesium ground sublevel dark
    let m = model(ModelKind::Cesium, 0.0, 2.5, 1);
    let pts = flux_sweep(&m, SweepParam::OmegaRabi, &[0.0, 25.0]);
    assert!(pts[0].flux.is_none() && pts[0].error.is_some());
    assert!(pts[1].flux.is_some() && pts[1].error.is_none());
}
