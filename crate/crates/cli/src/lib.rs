//! Scenario runner for the driven-atom / two-mode-cavity simulator: spectra,
//! flux sweeps, photon correlations, classical-bound reports, figure data and
//! the acceptance suite.

pub mod config;
pub mod error;
pub mod model;
pub mod output;
pub mod scenarios;
pub mod validate;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use scenarios::{Runner, Scenario};
