use mollow_core::lindblad::{steady_state_with, SteadyState, SteadyStateOptions};
use mollow_core::models::{
    build_cesium, build_dressed_secular, build_two_level, BuiltSystem, CesiumParams,
    TwoLevelParams,
};

use crate::config::{ModelKind, ScenarioConfig, SweepParam};
use crate::error::{Context, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    TwoLevel(TwoLevelParams),
    Dressed(TwoLevelParams),
    Cesium(CesiumParams),
}

/// A built model with its steady state.
pub struct Solved {
    pub system: BuiltSystem,
    pub steady: SteadyState,
}

impl Model {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        match cfg.model {
            ModelKind::TwoLevel => Self::TwoLevel(cfg.two_level.clone()),
            ModelKind::Dressed => Self::Dressed(cfg.two_level.clone()),
            ModelKind::Cesium => Self::Cesium(cfg.cesium.clone()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Self::TwoLevel(_) => ModelKind::TwoLevel,
            Self::Dressed(_) => ModelKind::Dressed,
            Self::Cesium(_) => ModelKind::Cesium,
        }
    }

    pub fn kappa(&self) -> f64 {
        match self {
            Self::TwoLevel(p) | Self::Dressed(p) => p.kappa,
            Self::Cesium(p) => p.kappa,
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            Self::TwoLevel(p) | Self::Dressed(p) => p.gamma,
            Self::Cesium(p) => p.gamma,
        }
    }

    pub fn delta0(&self) -> f64 {
        match self {
            Self::TwoLevel(p) | Self::Dressed(p) => p.delta0,
            Self::Cesium(p) => p.delta0,
        }
    }

    pub fn n_max(&self) -> usize {
        match self {
            Self::TwoLevel(p) | Self::Dressed(p) => p.n_max,
            Self::Cesium(p) => p.n_max,
        }
    }

    /// Copy with one parameter replaced. The dressed model keeps `Ω = Δ₀`.
    pub fn with(&self, param: SweepParam, v: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::TwoLevel(p) | Self::Dressed(p) => match param {
                SweepParam::OmegaRabi => p.omega_rabi = v,
                SweepParam::Kappa => p.kappa = v,
                SweepParam::G => p.g = v,
            },
            Self::Cesium(p) => match param {
                SweepParam::OmegaRabi => p.omega_rabi = v,
                SweepParam::Kappa => p.kappa = v,
                SweepParam::G => p.g = v,
            },
        }
        out
    }

    pub fn with_n_max(&self, n: usize) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::TwoLevel(p) | Self::Dressed(p) => p.n_max = n,
            Self::Cesium(p) => p.n_max = n,
        }
        out
    }

    pub fn label(&self) -> String {
        match self {
            Self::TwoLevel(p) | Self::Dressed(p) => format!(
                "{} g={} kappa={} omega_rabi={} delta0={} n_max={}",
                self.kind(),
                p.g,
                p.kappa,
                p.omega_rabi,
                p.delta0,
                p.n_max
            ),
            Self::Cesium(p) => format!(
                "cesium g={} kappa={} omega_rabi={} delta0={} n_max={}",
                p.g, p.kappa, p.omega_rabi, p.delta0, p.n_max
            ),
        }
    }

    pub fn build(&self) -> Result<BuiltSystem> {
        match self {
            Self::TwoLevel(p) => build_two_level(p),
            Self::Dressed(p) => build_dressed_secular(p),
            Self::Cesium(p) => build_cesium(p),
        }
        .context(|| format!("building {}", self.label()))
    }

    pub fn solve(&self) -> Result<Solved> {
        let system = self.build()?;
        let steady = steady_state_with(&system.liouvillian, &SteadyStateOptions::default())
            .context(|| format!("steady state of {}", self.label()))?;
        Ok(Solved { system, steady })
    }
}
