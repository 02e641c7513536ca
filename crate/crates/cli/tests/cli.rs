use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

/// Data rows of a CSV, header comments skipped.
fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let cols = lines.next().unwrap().split(',').map(String::from).collect();
    let data = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (cols, data)
}

const SMALL: [&str; 10] = [
    "--set", "n_max=1",
    "--set", "tau_max=12",
    "--set", "tau_step=0.01",
    "--set", "omega_points=401",
    "--set", "omega_max=40",
];

#[test]
fn spectrum_writes_every_source_and_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let mut args = vec!["spectrum", "--out", d.path().to_str().unwrap()];
        args.extend(SMALL);
        let out = sim(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for src in ["atomic", "red", "blue", "total"] {
        let name = format!("spectrum_{src}.csv");
        let x = fs::read(a.path().join(&name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(&name)).unwrap(), "{name} differs between runs");
        let text = String::from_utf8(x).unwrap();
        assert!(text.starts_with("# code = mollow-cli "));
        assert!(text.contains("# set.n_max = 1"));
        let (cols, data) = rows(&a.path().join(&name));
        assert_eq!(cols, ["omega_over_gamma", "P"]);
        assert_eq!(data.len(), 401);
        assert_eq!(data[0][0], "-4.0000000000000000e1");
    }
    let jsonl = fs::read_to_string(a.path().join("spectrum_summary.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 4);
    let first: Value = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
    assert_eq!(first["source"], "atomic");
    assert!(first["peaks"].as_array().unwrap().len() >= 3);
}

#[test]
fn zero_drive_gives_zero_spectra() {
    let d = tempfile::tempdir().unwrap();
    let mut args = vec!["spectrum", "--out", d.path().to_str().unwrap(), "--set", "omega_rabi=0"];
    args.extend(SMALL);
    assert!(sim(&args).status.success());
    for src in ["atomic", "total"] {
        let (_, data) = rows(&d.path().join(format!("spectrum_{src}.csv")));
        assert!(data.iter().all(|r| r[1].parse::<f64>().unwrap() == 0.0));
    }
}

#[test]
fn flux_sweep_without_coupling_is_dark() {
    let d = tempfile::tempdir().unwrap();
    let out = sim(&[
        "flux-sweep", "--out", d.path().to_str().unwrap(),
        "--set", "g=0", "--set", "n_max=1",
        "--set", "sweep=omega_rabi", "--set", "sweep_min=15", "--set", "sweep_max=35", "--set", "sweep_step=5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (cols, data) = rows(&d.path().join("flux.csv"));
    assert_eq!(cols[..2], ["omega_rabi_over_gamma", "flux"]);
    assert_eq!(data.len(), 5);
    assert!(data.iter().all(|r| r[1].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn flux_sweep_peaks_at_resonance() {
    let d = tempfile::tempdir().unwrap();
    let out = sim(&[
        "flux-sweep", "--out", d.path().to_str().unwrap(),
        "--set", "kappa=2.5", "--set", "g=1",
        "--set", "sweep=omega_rabi", "--set", "sweep_min=15", "--set", "sweep_max=35", "--set", "sweep_step=1",
    ]);
    assert!(out.status.success());
    let s = summary(d.path());
    assert_eq!(s["result"]["argmax"].as_f64().unwrap(), 25.0);
    assert!(s["result"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn g2_summary_at_unit_coupling() {
    let d = tempfile::tempdir().unwrap();
    let out = sim(&["g2", "--out", d.path().to_str().unwrap()]);
    assert!(out.status.success());
    let p = &summary(d.path())["result"]["points"][0];
    assert!((p["g2_E"].as_f64().unwrap() - 1.5).abs() <= 0.05);
    assert!((p["g2_b"].as_f64().unwrap() - 0.36).abs() <= 0.02);
    assert!((p["g2_br"].as_f64().unwrap() - 1.32).abs() <= 0.02);
    assert_eq!(p["cauchy_schwarz"]["any_violation"], true);
}

#[test]
fn undefined_correlations_are_not_zero() {
    let d = tempfile::tempdir().unwrap();
    let out = sim(&["g2", "--out", d.path().to_str().unwrap(), "--set", "omega_rabi=0", "--set", "n_max=1"]);
    assert!(out.status.success());
    let (_, data) = rows(&d.path().join("g2_zero.csv"));
    assert_eq!(data[0][1], "undefined");
    assert_eq!(summary(d.path())["result"]["points"][0]["g2_b"], "undefined");
}

#[test]
fn dressed_runs_carry_analytic_columns() {
    let d = tempfile::tempdir().unwrap();
    let out = sim(&[
        "g2", "--out", d.path().to_str().unwrap(),
        "--set", "model=dressed", "--set", "g2_mode=tau", "--set", "g=0.25", "--set", "kappa=2.5",
        "--set", "tau_max=5", "--set", "tau_step=0.1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (cols, data) = rows(&d.path().join("g2_tau.csv"));
    assert!(cols.contains(&"analytic_auto".to_string()) && cols.contains(&"analytic_cross".to_string()));
    assert_eq!(data.len(), 51);
}

#[test]
fn cs_bounds_report() {
    let d = tempfile::tempdir().unwrap();
    let out = sim(&["cs-bounds", "--out", d.path().to_str().unwrap(), "--set", "tau_max=3", "--set", "tau_step=0.05"]);
    assert!(out.status.success());
    let r = &summary(d.path())["result"];
    assert_eq!(r["single_mode_b"]["violated"], true);
    assert_eq!(r["two_mode_at_zero"]["violated"], true);
}

#[test]
fn mhz_display() {
    let d = tempfile::tempdir().unwrap();
    let out = sim(&[
        "flux-sweep", "--mhz", "--out", d.path().to_str().unwrap(), "--set", "n_max=1",
        "--set", "sweep=omega_rabi", "--set", "sweep_min=25", "--set", "sweep_max=25", "--set", "sweep_step=1",
    ]);
    assert!(out.status.success());
    let (cols, data) = rows(&d.path().join("flux.csv"));
    assert_eq!(cols[..2], ["omega_rabi_over_2pi_mhz", "flux_per_us"]);
    assert!((data[0][0].parse::<f64>().unwrap() - 130.0).abs() < 1e-9);
}

#[test]
fn figure_one() {
    let d = tempfile::tempdir().unwrap();
    let mut args = vec!["figure", "fig1", "--out", d.path().to_str().unwrap()];
    args.extend(SMALL);
    let out = sim(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (cols, _) = rows(&d.path().join("fig1/atomic_spectra.csv"));
    assert_eq!(cols.len(), 4);
    let (_, t) = rows(&d.path().join("fig1/transmission.csv"));
    let peak = t.iter().map(|r| r[1].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!((peak - 1.0).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let dir = d.path().to_str().unwrap();
    assert_eq!(sim(&["g2", "--out", dir, "--set", "kappa=-1"]).status.code(), Some(1));
    assert_eq!(sim(&["g2", "--out", dir, "--set", "kapa=1"]).status.code(), Some(1));
    assert_eq!(sim(&["figure", "fig5", "--out", dir]).status.code(), Some(1));
    // every ground sublevel is dark without drive or coupling
    let dark = sim(&[
        "g2", "--out", dir, "--set", "model=cesium", "--set", "omega_rabi=0", "--set", "g=0", "--set", "n_max=1",
    ]);
    assert_eq!(dark.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&dark.stderr).contains("multiple steady states"));
}

#[test]
fn config_file_and_overrides() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.cfg");
    fs::write(&cfg, "# unit coupling\nmodel = two-level\ng = 1\nkappa = 2.5\nn_max = 1\n").unwrap();
    let out = sim(&[
        "g2", "--config", cfg.to_str().unwrap(), "--set", "kappa=1", "--out", d.path().join("o").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(d.path().join("o/g2_zero.csv")).unwrap();
    assert!(text.contains("# set.kappa = 1\n"));
    let (_, data) = rows(&d.path().join("o/g2_zero.csv"));
    assert_eq!(data[0][0].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn validate_exit_status_and_warnings() {
    let ok = sim(&["validate", "--only", "9"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("[PASS]  9"));

    let bad = sim(&["validate", "--only", "6"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stdout).starts_with("[FAIL]  6"));

    let coarse = sim(&["validate", "--only", "9", "--set", "n_max=1"]);
    assert!(String::from_utf8_lossy(&coarse.stderr).contains("n_max=1 not converged"));

    assert_eq!(sim(&["validate", "--set", "kappa=-2"]).status.code(), Some(1));
}
