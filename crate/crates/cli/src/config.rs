//! Flat `key = value` configuration.
//!
//! A config file holds one assignment per line; `#` starts a comment. Command
//! line `--set key=value` overrides are applied afterwards, in order. Every
//! rate is in units of γ.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use mollow_core::lindblad::UniformGrid;
use mollow_core::models::{CesiumParams, Manifold, TwoLevelParams};
use mollow_core::spectra::linspace;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    TwoLevel,
    Dressed,
    Cesium,
}

impl FromStr for ModelKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-level" => Ok(Self::TwoLevel),
            "dressed" => Ok(Self::Dressed),
            "cesium" => Ok(Self::Cesium),
            _ => Err(CliError::Config(format!(
                "model must be two-level, dressed or cesium, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::TwoLevel => "two-level",
            Self::Dressed => "dressed",
            Self::Cesium => "cesium",
        })
    }
}

/// Parameter varied by a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    OmegaRabi,
    Kappa,
    G,
}

impl SweepParam {
    pub fn column(self) -> &'static str {
        match self {
            Self::OmegaRabi => "omega_rabi_over_gamma",
            Self::Kappa => "kappa_over_gamma",
            Self::G => "g_over_gamma",
        }
    }
}

impl FromStr for SweepParam {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega_rabi" => Ok(Self::OmegaRabi),
            "kappa" => Ok(Self::Kappa),
            "g" => Ok(Self::G),
            _ => Err(CliError::Config(format!(
                "sweep must be omega_rabi, kappa or g, got `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Sweep {
    /// `min, min + step, …` up to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.min + k as f64 * self.step).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum G2Mode {
    /// `g²(0)` at each sweep point.
    Zero,
    /// Full delay dependence.
    Tau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig6,
    Fig7,
}

impl FromStr for Figure {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Self::Fig1),
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            "fig6" => Ok(Self::Fig6),
            "fig7" => Ok(Self::Fig7),
            _ => Err(CliError::Config(format!(
                "figure must be one of fig1, fig2, fig3, fig4, fig6, fig7, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Self::Fig1 => 1,
            Self::Fig2 => 2,
            Self::Fig3 => 3,
            Self::Fig4 => 4,
            Self::Fig6 => 6,
            Self::Fig7 => 7,
        };
        write!(f, "fig{n}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl OmegaGrid {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.points)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    /// Used by the two-level and dressed models.
    pub two_level: TwoLevelParams,
    pub cesium: CesiumParams,
    pub tau_max: f64,
    pub tau_step: f64,
    pub omega: OmegaGrid,
    pub sweep: Option<Sweep>,
    pub g2_mode: G2Mode,
    pub figure: Option<Figure>,
    /// Every assignment as given, for the output headers.
    pub raw: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "model",
    "gamma",
    "kappa",
    "g",
    "omega_rabi",
    "delta0",
    "n_max",
    "polarization",
    "manifolds",
    "ground_splitting",
    "detuning_4",
    "detuning_3",
    "detuning_2",
    "tau_max",
    "tau_step",
    "omega_min",
    "omega_max",
    "omega_points",
    "sweep",
    "sweep_min",
    "sweep_max",
    "sweep_step",
    "g2_mode",
    "figure",
];

/// Parses `key = value` lines.
pub fn parse_assignments(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(split_assignment(line).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("line {}: {msg}", n + 1)),
            other => other,
        })?);
    }
    Ok(out)
}

pub fn split_assignment(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("expected key=value, got `{s}`")))?;
    let (k, v) = (k.trim(), v.trim());
    if !KEYS.contains(&k) {
        return Err(CliError::Config(format!("unknown key `{k}`")));
    }
    if v.is_empty() {
        return Err(CliError::Config(format!("empty value for `{k}`")));
    }
    Ok((k.to_string(), v.to_string()))
}

impl ScenarioConfig {
    /// Reads `path` (if any) and applies `overrides` on top.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut pairs = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                parse_assignments(&text)?
            }
            None => Vec::new(),
        };
        for o in overrides {
            pairs.push(split_assignment(o)?);
        }
        Self::from_pairs(pairs)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let raw: BTreeMap<String, String> = pairs.into_iter().collect();
        let get = |k: &str| raw.get(k).map(String::as_str);
        let num = |k: &str| -> Result<Option<f64>> {
            get(k)
                .map(|v| {
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| CliError::Config(format!("`{k}` must be a number, got `{v}`")))
                })
                .transpose()
        };
        let count = |k: &str| -> Result<Option<usize>> {
            get(k)
                .map(|v| {
                    v.parse::<usize>().map_err(|_| {
                        CliError::Config(format!("`{k}` must be a non-negative integer, got `{v}`"))
                    })
                })
                .transpose()
        };

        let model = get("model").unwrap_or("two-level").parse()?;

        let mut tl = TwoLevelParams::default();
        let mut cs = CesiumParams::default();
        macro_rules! both {
            ($key:literal, $field:ident) => {
                if let Some(v) = num($key)? {
                    tl.$field = v;
                    cs.$field = v;
                }
            };
        }
        both!("gamma", gamma);
        both!("kappa", kappa);
        both!("g", g);
        both!("omega_rabi", omega_rabi);
        both!("delta0", delta0);
        if let Some(n) = count("n_max")? {
            tl.n_max = n;
            cs.n_max = n;
        }
        if let Some(q) = get("polarization") {
            cs.polarization = q
                .parse()
                .map_err(|_| CliError::Config(format!("`polarization` must be -1 or 1, got `{q}`")))?;
        }
        if let Some(list) = get("manifolds") {
            cs.included_manifolds = if list == "all" {
                Manifold::ALL.into_iter().collect()
            } else {
                list.split(',')
                    .map(|m| m.parse::<Manifold>().map_err(|e| CliError::Config(e.to_string())))
                    .collect::<Result<_>>()?
            };
        }
        if let Some(v) = num("ground_splitting")? {
            cs.ground_splitting = v;
        }
        for fp in [2u32, 3, 4] {
            if let Some(v) = num(&format!("detuning_{fp}"))? {
                cs.excited_detunings.insert(fp, v);
            }
        }

        let tau_max = num("tau_max")?.unwrap_or(40.0);
        let tau_step = num("tau_step")?.unwrap_or(0.005);
        UniformGrid::span(tau_max, tau_step).map_err(|e| CliError::Config(e.to_string()))?;

        let omega = OmegaGrid {
            min: num("omega_min")?.unwrap_or(-40.0),
            max: num("omega_max")?.unwrap_or(40.0),
            points: count("omega_points")?.unwrap_or(4001),
        };
        if omega.points < 2 || omega.max <= omega.min {
            return Err(CliError::Config(
                "omega grid needs omega_max > omega_min and at least 2 points".into(),
            ));
        }

        let sweep = match get("sweep") {
            None => None,
            Some(p) => {
                let param: SweepParam = p.parse()?;
                let (min, max, step) = match (num("sweep_min")?, num("sweep_max")?, num("sweep_step")?) {
                    (Some(a), Some(b), Some(c)) => (a, b, c),
                    _ => {
                        return Err(CliError::Config(
                            "a sweep needs sweep_min, sweep_max and sweep_step".into(),
                        ))
                    }
                };
                if !(step > 0.0) || max < min {
                    return Err(CliError::Config(format!(
                        "bad sweep range [{min}, {max}] with step {step}"
                    )));
                }
                Some(Sweep { param, min, max, step })
            }
        };

        let g2_mode = match get("g2_mode").unwrap_or("zero") {
            "zero" => G2Mode::Zero,
            "tau" => G2Mode::Tau,
            other => {
                return Err(CliError::Config(format!(
                    "g2_mode must be zero or tau, got `{other}`"
                )))
            }
        };
        let figure = get("figure").map(str::parse).transpose()?;

        let cfg = Self {
            model,
            two_level: tl,
            cesium: cs,
            tau_max,
            tau_step,
            omega,
            sweep,
            g2_mode,
            figure,
            raw,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parameter checks of the selected model.
    pub fn validate(&self) -> Result<()> {
        let res = match self.model {
            ModelKind::Cesium => self.cesium.validate(),
            _ => self.two_level.validate(),
        };
        res.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn tau_grid(&self) -> UniformGrid {
        UniformGrid::span(self.tau_max, self.tau_step).expect("checked at load")
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::from_pairs(Vec::new()).expect("defaults are valid")
    }
}
