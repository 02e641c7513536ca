//! Scenario runners. Each computes its data with the functions at the top of
//! this file and writes CSV tables plus a `summary.json`.

use std::path::Path;

use mollow_core::correlations::{
    cauchy_schwarz_report, first_order, second_order_many, BoundCheck, CauchySchwarzReport,
    CorrelationSeries,
};
use mollow_core::lindblad::{EvolveOptions, UniformGrid};
use mollow_core::models::{dressed_g2_auto, dressed_g2_cross};
use mollow_core::spectra::{power_spectrum, steady_flux, Spectrum, SpectrumOptions};
use mollow_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Figure, G2Mode, ModelKind, ScenarioConfig, Sweep, SweepParam};
use crate::error::{CliError, Context, Result};
use crate::model::{Model, Solved};
use crate::output::{Cell, OutputDir, Table, GAMMA_MHZ, VERSION};

/// Emission sources: label and operator name.
pub const SOURCES: [(&str, &str); 4] = [("atomic", "atom"), ("red", "r"), ("blue", "b"), ("total", "E")];

pub const FIGURE_COUPLINGS: [f64; 3] = [0.25, 1.0, 2.5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    Spectrum,
    FluxSweep,
    G2,
    CsBounds,
    Figure,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::FluxSweep => "flux-sweep",
            Self::G2 => "g2",
            Self::CsBounds => "cs-bounds",
            Self::Figure => "figure",
        }
    }
}

pub struct SourceSpectrum {
    pub label: &'static str,
    pub spectrum: Spectrum,
    /// `G(0)`, the incoherent intensity.
    pub incoherent: f64,
}

impl SourceSpectrum {
    /// `(∫P dω − G(0)) / G(0)`, zero when there is no emission.
    pub fn parseval_error(&self) -> f64 {
        if self.incoherent.abs() < 1e-300 {
            self.spectrum.integral().abs()
        } else {
            (self.spectrum.integral() - self.incoherent) / self.incoherent
        }
    }
}

pub fn spectra(
    solved: &Solved,
    sources: &[(&'static str, &str)],
    tau: &UniformGrid,
    omega: &[f64],
) -> Result<Vec<SourceSpectrum>> {
    let l = &solved.system.liouvillian;
    sources
        .iter()
        .map(|(label, op)| {
            let o = solved.system.operator(op).context(|| format!("{label} spectrum"))?;
            let corr = first_order(l, &solved.steady.rho, o, tau).context(|| format!("{label} correlation"))?;
            let spectrum = power_spectrum(&corr, omega, label, &SpectrumOptions::default())
                .context(|| format!("{label} spectrum"))?;
            Ok(SourceSpectrum {
                label,
                spectrum,
                incoherent: corr.values[0].re,
            })
        })
        .collect()
}

/// Local maxima above 1% of the largest value, as `(ω, P)`.
pub fn peaks(s: &Spectrum) -> Vec<(f64, f64)> {
    s.local_maxima(0.01).into_iter().map(|i| (s.omega[i], s.values[i])).collect()
}

pub fn flux(solved: &Solved, kappa: f64) -> Result<f64> {
    let e = solved.system.operator("E").context(|| "flux".into())?;
    steady_flux(&solved.steady.rho, kappa, &e.adjoint(), e).context(|| "flux".into())
}

/// Normalised second-order correlations of the cavity fields. `None` marks a
/// mode without photons.
#[derive(Clone, Debug, Default)]
pub struct G2Set {
    pub e: Option<CorrelationSeries>,
    pub b: Option<CorrelationSeries>,
    pub r: Option<CorrelationSeries>,
    pub br: Option<CorrelationSeries>,
    pub rb: Option<CorrelationSeries>,
}

impl G2Set {
    pub fn named(&self) -> [(&'static str, &Option<CorrelationSeries>); 5] {
        [
            ("g2_E", &self.e),
            ("g2_b", &self.b),
            ("g2_r", &self.r),
            ("g2_br", &self.br),
            ("g2_rb", &self.rb),
        ]
    }

    pub fn at_zero(s: &Option<CorrelationSeries>) -> Option<f64> {
        s.as_ref().map(CorrelationSeries::at_zero)
    }

    pub fn cauchy_schwarz(&self) -> Option<CauchySchwarzReport> {
        match (&self.b, &self.r, &self.br) {
            (Some(b), Some(r), Some(br)) => cauchy_schwarz_report(b, r, br).ok(),
            _ => None,
        }
    }
}

pub fn g2_set(solved: &Solved, grid: &UniformGrid) -> Result<G2Set> {
    let sys = &solved.system;
    let l = &sys.liouvillian;
    let rho = &solved.steady.rho;
    let op = |n: &str| sys.operator(n).context(|| "g2".into());
    let (e, b, r) = (op("E")?, op("b")?, op("r")?);
    let opts = EvolveOptions::default();
    let run = |o1, targets: &[&_]| -> Result<Option<Vec<CorrelationSeries>>> {
        match second_order_many(l, rho, o1, targets, grid, &opts) {
            Ok(v) => Ok(Some(v)),
            Err(Error::UndefinedCorrelation(_)) => Ok(None),
            Err(err) => Err(err).context(|| "second-order correlation".into()),
        }
    };
    let mut out = G2Set::default();
    if let Some(mut v) = run(b, &[b, r])? {
        out.br = v.pop();
        out.b = v.pop();
    }
    if let Some(mut v) = run(r, &[r, b])? {
        out.rb = v.pop();
        out.r = v.pop();
    }
    if let Some(mut v) = run(e, &[e])? {
        out.e = v.pop();
    }
    Ok(out)
}

fn zero_grid(cfg: &ScenarioConfig) -> UniformGrid {
    UniformGrid::new(cfg.tau_step, 1).expect("positive step")
}

fn bound_json(b: &BoundCheck) -> Value {
    json!({"lhs": b.lhs, "rhs": b.rhs, "margin": b.margin, "violated": b.violated, "tau": b.tau})
}

pub fn cs_json(rep: &CauchySchwarzReport) -> Value {
    json!({
        "single_mode_b": bound_json(&rep.single_mode[0]),
        "single_mode_r": bound_json(&rep.single_mode[1]),
        "temporal_b": bound_json(&rep.temporal[0]),
        "temporal_r": bound_json(&rep.temporal[1]),
        "two_mode_at_zero": bound_json(&rep.two_mode_at_zero),
        "two_mode": bound_json(&rep.two_mode),
        "any_violation": rep.any_violation(),
    })
}

fn opt_json(v: Option<f64>) -> Value {
    v.map_or(Value::String("undefined".into()), |x| json!(x))
}

/// Result of one sweep point; failures are kept instead of aborting.
pub struct FluxPoint {
    pub x: f64,
    pub flux: Option<f64>,
    pub residual: Option<f64>,
    pub error: Option<String>,
}

pub fn flux_sweep(model: &Model, param: SweepParam, values: &[f64]) -> Vec<FluxPoint> {
    values
        .par_iter()
        .map(|&x| {
            let m = model.with(param, x);
            let res = m.solve().and_then(|s| Ok((flux(&s, m.kappa())?, s.steady.residual)));
            match res {
                Ok((f, r)) => FluxPoint {
                    x,
                    flux: Some(f),
                    residual: Some(r),
                    error: None,
                },
                Err(e) => FluxPoint {
                    x,
                    flux: None,
                    residual: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

pub fn argmax(points: &[FluxPoint]) -> Option<(f64, f64)> {
    points
        .iter()
        .filter_map(|p| p.flux.map(|f| (p.x, f)))
        .fold(None, |best, c| match best {
            Some((_, bf)) if bf >= c.1 => best,
            _ => Some(c),
        })
}

/// Renames and rescales columns to MHz / μs for display.
pub fn to_mhz(t: &mut Table) {
    let two_pi_gamma = 2.0 * std::f64::consts::PI * GAMMA_MHZ;
    for name in t.columns.clone() {
        if let Some(stem) = name.strip_suffix("_over_gamma") {
            t.rescale(&name, GAMMA_MHZ, &format!("{stem}_over_2pi_mhz"));
        } else if name == "tau_times_gamma" {
            t.rescale(&name, 1.0 / two_pi_gamma, "tau_us");
        } else if name == "flux" || name.starts_with("flux_") {
            t.rescale(&name, two_pi_gamma, &format!("{name}_per_us"));
        } else if name == "P" || name.starts_with("P_") {
            t.rescale(&name, 1.0 / GAMMA_MHZ, &format!("{name}_per_mhz"));
        }
    }
}

pub struct Runner<'a> {
    pub cfg: &'a ScenarioConfig,
    pub out: OutputDir,
    pub mhz: bool,
}

pub fn header(cfg: &ScenarioConfig, scenario: Scenario) -> Vec<(String, String)> {
    let mut h = vec![
        ("code".to_string(), format!("mollow-cli {VERSION}")),
        ("scenario".to_string(), scenario.name().to_string()),
        ("model".to_string(), cfg.model.to_string()),
    ];
    match cfg.model {
        ModelKind::Cesium => {
            let p = &cfg.cesium;
            h.push(("params".into(), format!("{p:?}")));
        }
        _ => h.push(("params".into(), format!("{:?}", cfg.two_level))),
    }
    h.push(("tau_grid".into(), format!("[0, {}] step {}", cfg.tau_max, cfg.tau_step)));
    h.push((
        "omega_grid".into(),
        format!("[{}, {}] points {}", cfg.omega.min, cfg.omega.max, cfg.omega.points),
    ));
    for (k, v) in &cfg.raw {
        h.push((format!("set.{k}"), v.clone()));
    }
    h.push(("units".into(), "rates in units of gamma".into()));
    h
}

impl<'a> Runner<'a> {
    pub fn new(cfg: &'a ScenarioConfig, scenario: Scenario, dir: &Path, mhz: bool) -> Result<Self> {
        let mut h = header(cfg, scenario);
        if mhz {
            h.push(("display".into(), format!("MHz with gamma/2pi = {GAMMA_MHZ} MHz")));
        }
        Ok(Self {
            cfg,
            out: OutputDir::create(dir, h)?,
            mhz,
        })
    }

    fn csv(&mut self, name: &str, mut t: Table) -> Result<()> {
        if self.mhz {
            to_mhz(&mut t);
        }
        self.out.csv(name, &t)
    }

    pub fn run(&mut self, scenario: Scenario) -> Result<Value> {
        let summary = match scenario {
            Scenario::Spectrum => self.spectrum()?,
            Scenario::FluxSweep => self.flux_sweep()?,
            Scenario::G2 => self.g2()?,
            Scenario::CsBounds => self.cs_bounds()?,
            Scenario::Figure => self.figure()?,
        };
        let summary = json!({
            "scenario": scenario.name(),
            "code_version": VERSION,
            "model": self.cfg.model.to_string(),
            "result": summary,
        });
        self.out.json("summary.json", &summary)?;
        Ok(summary)
    }

    fn spectrum_table(omega: &[f64], columns: &[(String, &Spectrum)]) -> Table {
        let mut t = Table::new(
            std::iter::once("omega_over_gamma".to_string()).chain(columns.iter().map(|c| c.0.clone())),
        );
        for (i, w) in omega.iter().enumerate() {
            let mut row = vec![Cell::Num(*w)];
            row.extend(columns.iter().map(|c| Cell::Num(c.1.values[i])));
            t.push(row);
        }
        t
    }

    fn spectrum(&mut self) -> Result<Value> {
        let model = Model::from_config(self.cfg);
        let solved = model.solve()?;
        let omega = self.cfg.omega.values();
        let all = spectra(&solved, &SOURCES, &self.cfg.tau_grid(), &omega)?;
        let mut lines = Vec::new();
        for s in &all {
            let t = Self::spectrum_table(&omega, &[("P".into(), &s.spectrum)]);
            self.csv(&format!("spectrum_{}.csv", s.label), t)?;
            lines.push(json!({
                "source": s.label,
                "peaks": peaks(&s.spectrum).iter().map(|(w, p)| json!({"omega": w, "height": p})).collect::<Vec<_>>(),
                "integral": s.spectrum.integral(),
                "incoherent_intensity": s.incoherent,
                "parseval_rel_error": s.parseval_error(),
                "window_rate": s.spectrum.window_rate,
                "tail_ratio": s.spectrum.tail_ratio,
                "steady_residual": solved.steady.residual,
                "steady_target": solved.steady.target,
                "n_max": model.n_max(),
                "warnings": solved.system.warnings,
            }));
        }
        self.out.json_lines("spectrum_summary.jsonl", &lines)?;
        Ok(json!({"sources": lines}))
    }

    fn sweep_or(&self, param: SweepParam, min: f64, max: f64, step: f64) -> Result<Sweep> {
        match &self.cfg.sweep {
            Some(s) if s.param == param => Ok(s.clone()),
            Some(s) => Err(CliError::Config(format!(
                "this scenario sweeps {}, not {}",
                param.column(),
                s.param.column()
            ))),
            None => Ok(Sweep { param, min, max, step }),
        }
    }

    fn flux_sweep(&mut self) -> Result<Value> {
        let model = Model::from_config(self.cfg);
        let sweep = match &self.cfg.sweep {
            Some(s) => s.clone(),
            None => self.sweep_or(SweepParam::OmegaRabi, 15.0, 35.0, 0.5)?,
        };
        let points = flux_sweep(&model, sweep.param, &sweep.values());
        let mut t = Table::new([sweep.param.column(), "flux", "steady_residual", "error"]);
        for p in &points {
            t.push(vec![
                p.x.into(),
                p.flux.into(),
                p.residual.into(),
                Cell::Text(p.error.clone().unwrap_or_default()),
            ]);
        }
        self.csv("flux.csv", t)?;
        let best = argmax(&points);
        Ok(json!({
            "sweep": sweep.param.column(),
            "argmax": best.map(|b| b.0),
            "max_flux": best.map(|b| b.1),
            "failures": points.iter().filter(|p| p.error.is_some()).map(|p| json!({"x": p.x, "error": p.error})).collect::<Vec<_>>(),
        }))
    }

    fn g2(&mut self) -> Result<Value> {
        let model = Model::from_config(self.cfg);
        match self.cfg.g2_mode {
            G2Mode::Zero => {
                let sweep = match &self.cfg.sweep {
                    Some(s) => s.clone(),
                    None => {
                        let k = model.kappa();
                        Sweep { param: SweepParam::Kappa, min: k, max: k, step: 1.0 }
                    }
                };
                let grid = zero_grid(self.cfg);
                let rows: Vec<Result<(f64, G2Set, Vec<String>)>> = sweep
                    .values()
                    .par_iter()
                    .map(|&x| {
                        let m = model.with(sweep.param, x);
                        let s = m.solve()?;
                        Ok((x, g2_set(&s, &grid)?, s.system.warnings.clone()))
                    })
                    .collect();
                let mut t = Table::new([
                    sweep.param.column(),
                    "g2_E",
                    "g2_b",
                    "g2_r",
                    "g2_br",
                    "g2_rb",
                    "cs_single_mode_violated",
                    "cs_two_mode_violated",
                ]);
                let mut points = Vec::new();
                for row in rows {
                    let (x, set, warnings) = row?;
                    let cs = set.cauchy_schwarz();
                    let flag = |v: Option<bool>| v.map_or(Cell::Undefined, |b| Cell::Num(b as u8 as f64));
                    let mut cells = vec![Cell::Num(x)];
                    cells.extend(set.named().iter().map(|(_, s)| Cell::from(G2Set::at_zero(s))));
                    cells.push(flag(cs.as_ref().map(|c| c.single_mode.iter().any(|b| b.violated))));
                    cells.push(flag(cs.as_ref().map(|c| c.two_mode_at_zero.violated)));
                    t.push(cells);
                    let mut point = serde_json::Map::new();
                    point.insert(sweep.param.column().into(), json!(x));
                    for (name, s) in set.named() {
                        point.insert(name.into(), opt_json(G2Set::at_zero(s)));
                    }
                    point.insert("cauchy_schwarz".into(), cs.as_ref().map_or(Value::Null, cs_json));
                    point.insert("warnings".into(), json!(warnings));
                    points.push(Value::Object(point));
                }
                self.csv("g2_zero.csv", t)?;
                Ok(json!({"mode": "zero", "points": points}))
            }
            G2Mode::Tau => {
                let solved = model.solve()?;
                let grid = self.cfg.tau_grid();
                let set = g2_set(&solved, &grid)?;
                let dressed = model.kind() == ModelKind::Dressed;
                let mut cols = vec!["tau_times_gamma".to_string()];
                cols.extend(set.named().iter().map(|(n, _)| n.to_string()));
                if dressed {
                    cols.push("analytic_auto".into());
                    cols.push("analytic_cross".into());
                }
                let mut t = Table::new(cols);
                let (gamma, kappa) = (model.gamma(), model.kappa());
                for (k, tau) in grid.points().into_iter().enumerate() {
                    let mut row = vec![Cell::Num(tau)];
                    row.extend(set.named().iter().map(|(_, s)| Cell::from(s.as_ref().map(|s| s.values[k].re))));
                    if dressed {
                        row.push(dressed_g2_auto(tau, gamma).into());
                        row.push(dressed_g2_cross(tau, gamma, kappa).into());
                    }
                    t.push(row);
                }
                self.csv("g2_tau.csv", t)?;
                let mut zero = serde_json::Map::new();
                let mut last = serde_json::Map::new();
                for (name, s) in set.named() {
                    zero.insert(name.into(), opt_json(G2Set::at_zero(s)));
                    last.insert(name.into(), opt_json(s.as_ref().map(|s| s.values.last().unwrap().re)));
                }
                Ok(json!({
                    "mode": "tau",
                    "at_zero": zero,
                    "at_tau_max": last,
                    "cauchy_schwarz": set.cauchy_schwarz().as_ref().map_or(Value::Null, cs_json),
                    "warnings": solved.system.warnings,
                }))
            }
        }
    }

    fn cs_bounds(&mut self) -> Result<Value> {
        let model = Model::from_config(self.cfg);
        let solved = model.solve()?;
        let grid = self.cfg.tau_grid();
        let set = g2_set(&solved, &grid)?;
        let rep = set
            .cauchy_schwarz()
            .ok_or_else(|| CliError::Validation("cavity modes carry no photons; bounds undefined".into()))?;
        let bound = rep.two_mode_at_zero.rhs;
        let mut t = Table::new(["tau_times_gamma", "g2_b", "g2_r", "g2_br", "g2_rb", "two_mode_bound"]);
        for (k, tau) in grid.points().into_iter().enumerate() {
            let v = |s: &Option<CorrelationSeries>| Cell::from(s.as_ref().map(|s| s.values[k].re));
            t.push(vec![tau.into(), v(&set.b), v(&set.r), v(&set.br), v(&set.rb), bound.into()]);
        }
        self.csv("cs_bounds.csv", t)?;
        Ok(cs_json(&rep))
    }

    fn figure(&mut self) -> Result<Value> {
        let fig = self
            .cfg
            .figure
            .ok_or_else(|| CliError::Config("figure scenario needs `figure = fig1|fig2|fig3|fig4|fig6|fig7`".into()))?;
        let two_level = Model::TwoLevel(self.cfg.two_level.clone());
        let cesium = Model::Cesium(self.cfg.cesium.clone());
        let omega = self.cfg.omega.values();
        let tau = self.cfg.tau_grid();
        let summary = match fig {
            Figure::Fig1 => {
                let p = &self.cfg.two_level;
                let (k, d) = (p.kappa, p.delta0);
                let mut t = Table::new(["omega_over_gamma", "transmission"]);
                for w in &omega {
                    let lor = |c: f64| k * k / ((w - c).powi(2) + k * k);
                    t.push(vec![(*w).into(), (lor(d) + lor(-d)).into()]);
                }
                self.csv("fig1/transmission.csv", t)?;
                let free = Model::TwoLevel(mollow_core::models::TwoLevelParams { g: 0.0, n_max: 1, ..p.clone() });
                let rabis: Vec<f64> = [0.5, 1.0, 1.5].iter().map(|f| f * d).collect();
                let runs: Vec<Result<Spectrum>> = rabis
                    .par_iter()
                    .map(|&o| {
                        let s = free.with(SweepParam::OmegaRabi, o).solve()?;
                        Ok(spectra(&s, &SOURCES[..1], &tau, &omega)?.remove(0).spectrum)
                    })
                    .collect();
                let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
                let cols: Vec<(String, &Spectrum)> =
                    rabis.iter().zip(&runs).map(|(o, s)| (format!("P_rabi_{o}"), s)).collect();
                self.csv("fig1/atomic_spectra.csv", Self::spectrum_table(&omega, &cols))?;
                json!({"schematic_transmission": true, "rabi_frequencies": rabis})
            }
            Figure::Fig2 | Figure::Fig6 => {
                let base = if fig == Figure::Fig2 { &two_level } else { &cesium };
                let base = base.with(SweepParam::Kappa, 2.5);
                let dir = fig.to_string();
                let mut out = serde_json::Map::new();
                if fig == Figure::Fig2 {
                    let sweep = self.sweep_or(SweepParam::OmegaRabi, 15.0, 35.0, 0.5)?;
                    let xs = sweep.values();
                    let curves: Vec<Vec<FluxPoint>> = FIGURE_COUPLINGS
                        .iter()
                        .map(|&g| flux_sweep(&base.with(SweepParam::G, g), SweepParam::OmegaRabi, &xs))
                        .collect();
                    let mut t = Table::new(
                        std::iter::once("omega_rabi_over_gamma".to_string())
                            .chain(FIGURE_COUPLINGS.iter().map(|g| format!("flux_g{g}"))),
                    );
                    for (i, x) in xs.iter().enumerate() {
                        let mut row = vec![Cell::Num(*x)];
                        row.extend(curves.iter().map(|c| Cell::from(c[i].flux)));
                        t.push(row);
                    }
                    self.csv(&format!("{dir}/flux.csv"), t)?;
                    out.insert(
                        "flux_argmax".into(),
                        json!(curves.iter().map(|c| argmax(c).map(|a| a.0)).collect::<Vec<_>>()),
                    );
                }
                let runs: Vec<Result<Vec<SourceSpectrum>>> = FIGURE_COUPLINGS
                    .par_iter()
                    .map(|&g| spectra(&base.with(SweepParam::G, g).solve()?, &SOURCES, &tau, &omega))
                    .collect();
                let mut central = Vec::new();
                for (g, run) in FIGURE_COUPLINGS.iter().zip(runs) {
                    let run = run?;
                    let cols: Vec<(String, &Spectrum)> =
                        run.iter().map(|s| (format!("P_{}", s.label), &s.spectrum)).collect();
                    self.csv(&format!("{dir}/spectra_g{g}.csv"), Self::spectrum_table(&omega, &cols))?;
                    central.push(run[0].spectrum.value_near(0.0));
                }
                out.insert("atomic_central_height".into(), json!(central));
                Value::Object(out)
            }
            Figure::Fig3 => {
                let sweep = self.sweep_or(SweepParam::Kappa, 0.25, 5.0, 0.25)?;
                let xs = sweep.values();
                let grid = zero_grid(self.cfg);
                let pts: Vec<(f64, f64)> =
                    FIGURE_COUPLINGS.iter().flat_map(|&g| xs.iter().map(move |&k| (g, k))).collect();
                let sets: Vec<Result<G2Set>> = pts
                    .par_iter()
                    .map(|&(g, k)| {
                        let m = two_level.with(SweepParam::G, g).with(SweepParam::Kappa, k);
                        g2_set(&m.solve()?, &grid)
                    })
                    .collect();
                let sets = sets.into_iter().collect::<Result<Vec<_>>>()?;
                let mut cols = vec!["kappa_over_gamma".to_string()];
                for g in FIGURE_COUPLINGS {
                    for n in ["g2_E", "g2_b", "g2_br"] {
                        cols.push(format!("{n}_g{g}"));
                    }
                }
                let mut t = Table::new(cols);
                let mut violations = 0;
                for (i, k) in xs.iter().enumerate() {
                    let mut row = vec![Cell::Num(*k)];
                    for gi in 0..FIGURE_COUPLINGS.len() {
                        let s = &sets[gi * xs.len() + i];
                        row.push(G2Set::at_zero(&s.e).into());
                        row.push(G2Set::at_zero(&s.b).into());
                        row.push(G2Set::at_zero(&s.br).into());
                        if s.cauchy_schwarz().is_some_and(|c| c.single_mode[0].violated && c.two_mode_at_zero.violated) {
                            violations += 1;
                        }
                    }
                    t.push(row);
                }
                self.csv("fig3/g2_zero.csv", t)?;
                json!({"points": pts.len(), "points_violating_both_bounds": violations})
            }
            Figure::Fig4 | Figure::Fig7 => {
                let (base, couplings): (&Model, &[f64]) = if fig == Figure::Fig4 {
                    (&two_level, &FIGURE_COUPLINGS)
                } else {
                    (&cesium, &[1.0])
                };
                let dir = fig.to_string();
                let mut out = serde_json::Map::new();
                for kappa in [1.0, 2.5] {
                    let sets: Vec<Result<G2Set>> = couplings
                        .par_iter()
                        .map(|&g| g2_set(&base.with(SweepParam::G, g).with(SweepParam::Kappa, kappa).solve()?, &tau))
                        .collect();
                    let sets = sets.into_iter().collect::<Result<Vec<_>>>()?;
                    let mut cols = vec!["tau_times_gamma".to_string()];
                    for g in couplings {
                        for n in ["g2_br", "g2_rb", "g2_b", "g2_r"] {
                            cols.push(format!("{n}_g{g}"));
                        }
                    }
                    let mut t = Table::new(cols);
                    for (k, x) in tau.points().into_iter().enumerate() {
                        let mut row = vec![Cell::Num(x)];
                        for s in &sets {
                            for series in [&s.br, &s.rb, &s.b, &s.r] {
                                row.push(series.as_ref().map(|v| v.values[k].re).into());
                            }
                        }
                        t.push(row);
                    }
                    self.csv(&format!("{dir}/g2_tau_kappa{kappa}.csv"), t)?;
                    out.insert(
                        format!("kappa{kappa}"),
                        json!(sets.iter().map(|s| s.cauchy_schwarz().as_ref().map_or(Value::Null, cs_json)).collect::<Vec<_>>()),
                    );
                }
                Value::Object(out)
            }
        };
        Ok(json!({"figure": fig.to_string(), "data": summary}))
    }
}
