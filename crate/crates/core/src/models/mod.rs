//! Concrete systems: the two-level atom with two cavity modes, its dressed
//! secular reduction, and the cesium D2 hyperfine atom.
//!
//! Subsystems are always ordered (atom, red mode, blue mode).

mod angular;
mod cesium;
mod dressed;
mod two_level;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hilbert::{Operator, SpaceLayout};
use crate::lindblad::Liouvillian;

pub use angular::{clebsch_gordan, wigner_3j, wigner_6j};
pub use cesium::{build_cesium, population_confinement, CesiumParams, Manifold, GAMMA_MHZ};
pub use dressed::{build_dressed_secular, dressed_g2_auto, dressed_g2_cross, dressed_operators};
pub use two_level::{build_two_level, TwoLevelParams};

pub const ATOM: &str = "atom";
pub const RED: &str = "red";
pub const BLUE: &str = "blue";

/// Ratio above which a frequency separation counts as "much larger than".
pub const RESOLVED_RATIO: f64 = 5.0;

/// A model ready for simulation.
#[derive(Debug)]
pub struct BuiltSystem {
    pub layout: Arc<SpaceLayout>,
    pub liouvillian: Liouvillian,
    pub operators: BTreeMap<String, Operator>,
    /// Validity conditions of the model that the parameters do not meet.
    pub warnings: Vec<String>,
}

impl BuiltSystem {
    pub fn operator(&self, name: &str) -> Result<&Operator> {
        self.operators
            .get(name)
            .ok_or_else(|| Error::MissingOperator(name.to_string()))
    }
}

pub(crate) fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive, got {v}"),
        })
    }
}

pub(crate) fn check_non_negative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be non-negative, got {v}"),
        })
    }
}

/// Outcome of re-running a computation one Fock level higher.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub n_max: usize,
    pub values: Vec<f64>,
    pub refined: Vec<f64>,
    /// Largest `|refined - value| / max(|refined|, floor)`.
    pub max_rel_change: f64,
}

impl ConvergenceReport {
    pub fn converged(&self, tol: f64) -> bool {
        self.max_rel_change <= tol
    }
}

/// Evaluates `observables` at `n_max` and `n_max + 1` and compares.
pub fn truncation_convergence(
    n_max: usize,
    mut observables: impl FnMut(usize) -> Result<Vec<f64>>,
) -> Result<ConvergenceReport> {
    let values = observables(n_max)?;
    let refined = observables(n_max + 1)?;
    if values.len() != refined.len() {
        return Err(Error::DimensionMismatch {
            expected: values.len(),
            found: refined.len(),
        });
    }
    let max_rel_change = values
        .iter()
        .zip(&refined)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1e-12))
        .fold(0.0, f64::max);
    Ok(ConvergenceReport {
        n_max,
        values,
        refined,
        max_rel_change,
    })
}
