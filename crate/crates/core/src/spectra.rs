//! Power spectra from first-order correlations, and photon fluxes.
//!
//! `P(ω) = (1/π) Re ∫₀^∞ G(τ) e^{−iωτ} dτ` where `G` is the covariance
//! series from [`first_order`](crate::correlations::first_order). The
//! integral is done exactly for the piecewise-linear interpolant of `G`, so
//! oscillations faster than the τ step do not alias.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::correlations::{CorrelationKind, CorrelationSeries};
use crate::error::{Error, Result};
use crate::hilbert::{expectation, DensityOperator, Operator};

/// Tail-to-peak ratio below which no window is applied.
pub const TAIL_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    /// Apply an exponential window when the tail is too large instead of
    /// failing.
    pub allow_window: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { allow_window: true }
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub source_label: String,
    /// Decay rate of the applied window, zero if none was needed.
    pub window_rate: f64,
    /// Tail magnitude relative to the peak of `|G|`, before windowing.
    pub tail_ratio: f64,
}

impl Spectrum {
    pub fn windowed(&self) -> bool {
        self.window_rate > 0.0
    }

    /// Trapezoidal `∫ P dω` over the grid.
    pub fn integral(&self) -> f64 {
        self.omega
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(w, v)| 0.5 * (w[1] - w[0]) * (v[0] + v[1]))
            .sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of interior local maxima at least `min_rel` of the global
    /// maximum.
    pub fn local_maxima(&self, min_rel: f64) -> Vec<usize> {
        let floor = min_rel * self.max();
        (1..self.values.len().saturating_sub(1))
            .filter(|&i| {
                let v = self.values[i];
                v >= floor && v > self.values[i - 1] && v >= self.values[i + 1]
            })
            .collect()
    }

    /// Value at the grid point closest to `w`.
    pub fn value_near(&self, w: f64) -> f64 {
        let i = self
            .omega
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - w).abs().total_cmp(&(b.1 - w).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.values[i]
    }
}

/// `∫₀¹ (1 − u) e^{−iθu} du`.
fn edge_weight(theta: f64) -> C64 {
    if theta.abs() < 1e-4 {
        C64::new(0.5 - theta * theta / 24.0, -theta / 6.0)
    } else {
        let e = C64::new(theta.cos(), -theta.sin());
        (C64::new(1.0, -theta) - e) / (theta * theta)
    }
}

/// Spectrum of a first-order series on `omega` (units of γ, relative to the
/// frame frequency).
///
/// The tail is the largest `|G|` over the last 5% of the τ grid. When it
/// exceeds [`TAIL_THRESHOLD`] of the peak, `G` is multiplied by `e^{−ατ}` with
/// `α` chosen to bring the end of the series down to the threshold.
pub fn power_spectrum(
    corr: &CorrelationSeries,
    omega: &[f64],
    label: &str,
    opts: &SpectrumOptions,
) -> Result<Spectrum> {
    if corr.kind != CorrelationKind::FirstOrder {
        return Err(Error::NotFirstOrder);
    }
    let len = corr.values.len();
    let h = corr.tau.step();
    let t_max = corr.tau.t_max();
    let peak = corr.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tail_start = len - (len / 20).max(1);
    let tail = corr.values[tail_start..]
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let tail_ratio = if peak > 0.0 { tail / peak } else { 0.0 };

    let mut window_rate = 0.0;
    if tail_ratio > TAIL_THRESHOLD {
        if !opts.allow_window || len < 2 {
            return Err(Error::TailTooLong {
                tail: tail_ratio,
                threshold: TAIL_THRESHOLD,
            });
        }
        window_rate = (tail_ratio / TAIL_THRESHOLD).ln() / t_max;
    }
    let g: Vec<C64> = corr
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| v * (-window_rate * corr.tau.point(k)).exp())
        .collect();

    let values = omega
        .iter()
        .map(|&w| {
            if len < 2 {
                return 0.0;
            }
            let theta = w * h;
            let a = edge_weight(theta);
            let interior = if theta.abs() < 1e-8 {
                1.0
            } else {
                let x = 0.5 * theta;
                (x.sin() / x).powi(2)
            };
            let (s, c) = (-theta).sin_cos();
            let step = C64::new(c, s);
            let mut phase = C64::new(1.0, 0.0);
            let mut acc = g[0] * a;
            for (k, gk) in g.iter().enumerate().skip(1) {
                // recompute the phase exactly every so often to stop drift
                phase = if k % 256 == 0 {
                    let (s, c) = (-w * corr.tau.point(k)).sin_cos();
                    C64::new(c, s)
                } else {
                    phase * step
                };
                if k == len - 1 {
                    acc += gk * phase * a.conj();
                } else {
                    acc += gk * phase * interior;
                }
            }
            (acc * h).re / PI
        })
        .collect();

    Ok(Spectrum {
        omega: omega.to_vec(),
        values,
        source_label: label.to_string(),
        window_rate,
        tail_ratio,
    })
}

/// Evenly spaced frequencies from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Photon flux `2κ ⟨E⁻E⁺⟩`.
pub fn steady_flux(
    rho_ss: &DensityOperator,
    kappa: f64,
    e_minus: &Operator,
    e_plus: &Operator,
) -> Result<f64> {
    let adj = e_plus.adjoint();
    let diff = e_minus.try_sub(&adj)?;
    if diff.matrix().max_abs() > 1e-12 * (1.0 + adj.matrix().max_abs()) {
        return Err(Error::NotAdjointPair);
    }
    let flux = 2.0 * kappa * expectation(rho_ss, &(e_minus * e_plus))?.re;
    if flux < -1e-10 {
        return Err(Error::NegativeFlux(flux));
    }
    Ok(flux.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::UniformGrid;

    fn exp_series(rate: f64, t_max: f64, step: f64) -> CorrelationSeries {
        let tau = UniformGrid::span(t_max, step).unwrap();
        CorrelationSeries {
            values: tau.points().iter().map(|t| C64::new((-rate * t).exp(), 0.0)).collect(),
            tau,
            kind: CorrelationKind::FirstOrder,
            normalization: 1.0,
            max_imag: 0.0,
        }
    }

    #[test]
    fn lorentzian_pair() {
        let corr = exp_series(0.5, 40.0, 0.005);
        let omega = linspace(-5.0, 5.0, 201);
        let s = power_spectrum(&corr, &omega, "test", &SpectrumOptions::default()).unwrap();
        for (w, p) in omega.iter().zip(&s.values) {
            let exact = 0.5 / (PI * (0.25 + w * w));
            assert!((p - exact).abs() < 1e-6, "w = {w}: {p} vs {exact}");
        }
        assert!((s.value_near(0.0) - 2.0 / PI).abs() < 1e-6);
        assert!(!s.windowed());
    }

    #[test]
    fn window_applied_only_when_needed() {
        let corr = exp_series(0.05, 20.0, 0.01);
        let omega = [0.0];
        let s = power_spectrum(&corr, &omega, "t", &SpectrumOptions::default()).unwrap();
        assert!(s.windowed());
        let err = power_spectrum(&corr, &omega, "t", &SpectrumOptions { allow_window: false });
        assert!(matches!(err, Err(Error::TailTooLong { .. })));
    }

    #[test]
    fn rejects_second_order_input() {
        let mut corr = exp_series(0.5, 1.0, 0.1);
        corr.kind = CorrelationKind::SecondOrderAuto;
        assert!(matches!(
            power_spectrum(&corr, &[0.0], "t", &SpectrumOptions::default()),
            Err(Error::NotFirstOrder)
        ));
    }

    #[test]
    fn oscillating_series_peaks_at_its_frequency() {
        let tau = UniformGrid::span(40.0, 0.005).unwrap();
        let values = tau
            .points()
            .iter()
            .map(|t| C64::new(0.0, 25.0 * t).exp() * (-0.5 * t).exp())
            .collect();
        let corr = CorrelationSeries {
            tau,
            values,
            kind: CorrelationKind::FirstOrder,
            normalization: 1.0,
            max_imag: 0.0,
        };
        let omega = linspace(-40.0, 40.0, 801);
        let s = power_spectrum(&corr, &omega, "t", &SpectrumOptions::default()).unwrap();
        let peaks = s.local_maxima(0.5);
        assert_eq!(peaks.len(), 1);
        assert!((omega[peaks[0]] - 25.0).abs() < 1e-9);
    }
}
