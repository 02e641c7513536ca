//! Driven-atom cavity QED in the Lindblad picture: composite Hilbert spaces,
//! Liouvillians and their steady states, regression-formula correlation
//! functions, power spectra, and the two-level, dressed and cesium models.
//!
//! All rates and frequencies are in units of the atomic linewidth γ.

pub mod correlations;
mod dense;
pub mod error;
pub mod hilbert;
pub mod lindblad;
pub mod models;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
