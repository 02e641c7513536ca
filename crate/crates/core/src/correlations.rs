//! Two-time correlation functions from the quantum regression formulae and
//! the classical Cauchy-Schwarz bounds on them.

use num_complex::Complex64 as C64;

use crate::dense;
use crate::error::{Error, Result};
use crate::hilbert::{expectation, CsrMatrix, DensityOperator, Operator};
use crate::lindblad::{check_steady_state, propagate, EvolveOptions, Liouvillian, UniformGrid};

/// Imaginary parts of normalised second-order values above this are errors.
pub const IMAG_TOL: f64 = 1e-8;
/// Denominators at or below this count as zero flux.
pub const FLUX_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelationKind {
    FirstOrder,
    SecondOrderAuto,
    SecondOrderCross,
}

#[derive(Clone, Debug)]
pub struct CorrelationSeries {
    pub tau: UniformGrid,
    pub values: Vec<C64>,
    pub kind: CorrelationKind,
    /// Steady-state denominator the raw correlation was divided by.
    pub normalization: f64,
    /// Largest imaginary part discarded from a second-order series.
    pub max_imag: f64,
}

impl CorrelationSeries {
    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn at_zero(&self) -> f64 {
        self.values[0].re
    }
}

/// `Tr(A X)` for a column-major `X`.
fn trace_product(a: &CsrMatrix, x: &[C64], n: usize) -> C64 {
    a.iter().map(|(i, k, v)| v * x[k + i * n]).sum()
}

/// `⟨O†(τ) O(0)⟩ − |⟨O⟩|²`, evaluated as `Tr(O† e^{Lτ}[(O − ⟨O⟩)ρ])`.
pub fn first_order(
    l: &Liouvillian,
    rho_ss: &DensityOperator,
    op: &Operator,
    grid: &UniformGrid,
) -> Result<CorrelationSeries> {
    first_order_with(l, rho_ss, op, grid, &EvolveOptions::default())
}

pub fn first_order_with(
    l: &Liouvillian,
    rho_ss: &DensityOperator,
    op: &Operator,
    grid: &UniformGrid,
    opts: &EvolveOptions,
) -> Result<CorrelationSeries> {
    check_steady_state(l, rho_ss)?;
    let n = l.dim();
    let mean = expectation(rho_ss, op)?;
    let rho = dense::to_col_major(rho_ss.matrix());
    let mut x0 = vec![C64::new(0.0, 0.0); n * n];
    op.matrix().left_mul_acc(C64::new(1.0, 0.0), &rho, &mut x0);
    for (x, r) in x0.iter_mut().zip(&rho) {
        *x -= mean * r;
    }
    let od = op.matrix().adjoint();
    let mut values = vec![C64::new(0.0, 0.0); grid.len()];
    propagate(l, x0, grid, opts, |k, x| values[k] = trace_product(&od, x, n))?;
    Ok(CorrelationSeries {
        tau: grid.clone(),
        values,
        kind: CorrelationKind::FirstOrder,
        normalization: 1.0,
        max_imag: 0.0,
    })
}

/// `g²_{O1 O2}(τ) = Tr(O2†O2 e^{Lτ}[O1 ρ O1†]) / (⟨O1†O1⟩⟨O2†O2⟩)`.
pub fn second_order(
    l: &Liouvillian,
    rho_ss: &DensityOperator,
    o1: &Operator,
    o2: &Operator,
    grid: &UniformGrid,
) -> Result<CorrelationSeries> {
    let mut out = second_order_many(l, rho_ss, o1, &[o2], grid, &EvolveOptions::default())?;
    Ok(out.remove(0))
}

fn intensity(rho: &DensityOperator, op: &Operator, which: &str) -> Result<(f64, CsrMatrix)> {
    let num = op.matrix().adjoint().matmul(op.matrix());
    let d = expectation(rho, &Operator::new(op.layout().clone(), num.clone())?)?.re;
    if !(d > FLUX_FLOOR) {
        return Err(Error::UndefinedCorrelation(which.to_string()));
    }
    Ok((d, num))
}

/// Second-order correlations sharing the conditioning operator `o1`, from a
/// single propagation.
pub fn second_order_many(
    l: &Liouvillian,
    rho_ss: &DensityOperator,
    o1: &Operator,
    targets: &[&Operator],
    grid: &UniformGrid,
    opts: &EvolveOptions,
) -> Result<Vec<CorrelationSeries>> {
    check_steady_state(l, rho_ss)?;
    let n = l.dim();
    let (d1, _) = intensity(rho_ss, o1, "O1")?;
    let mut numerators = Vec::with_capacity(targets.len());
    for o2 in targets {
        let (d2, num) = intensity(rho_ss, o2, "O2")?;
        numerators.push((d1 * d2, num));
    }

    let rho = dense::to_col_major(rho_ss.matrix());
    let mut tmp = vec![C64::new(0.0, 0.0); n * n];
    o1.matrix().left_mul_acc(C64::new(1.0, 0.0), &rho, &mut tmp);
    let mut x0 = vec![C64::new(0.0, 0.0); n * n];
    o1.matrix().right_mul_adjoint_acc(C64::new(1.0, 0.0), &tmp, &mut x0);

    let mut values = vec![vec![C64::new(0.0, 0.0); grid.len()]; targets.len()];
    propagate(l, x0, grid, opts, |k, x| {
        for (series, (den, num)) in values.iter_mut().zip(&numerators) {
            series[k] = trace_product(num, x, n) / *den;
        }
    })?;

    values
        .into_iter()
        .zip(targets.iter().zip(&numerators))
        .map(|(vals, (o2, (den, _)))| {
            let max_imag = vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            if max_imag > IMAG_TOL {
                return Err(Error::NonRealCorrelation(max_imag));
            }
            let kind = if *o2 == o1 {
                CorrelationKind::SecondOrderAuto
            } else {
                CorrelationKind::SecondOrderCross
            };
            Ok(CorrelationSeries {
                tau: grid.clone(),
                values: vals.into_iter().map(|v| C64::new(v.re, 0.0)).collect(),
                kind,
                normalization: *den,
                max_imag,
            })
        })
        .collect()
}

/// One classical inequality `lhs ≤ rhs` (or `≥`, see [`CauchySchwarzReport`]).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Amount by which the classical bound is broken; negative when it holds.
    pub margin: f64,
    pub violated: bool,
    /// Delay at which the worst case occurs.
    pub tau: f64,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64, margin: f64, tau: f64) -> Self {
        Self {
            lhs,
            rhs,
            margin,
            violated: margin > 1e-12,
            tau,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CauchySchwarzReport {
    /// `g²ᵢ(0) ≥ 1` for each auto-correlation.
    pub single_mode: [BoundCheck; 2],
    /// `g²ᵢ(0) ≥ g²ᵢ(τ)`, worst delay for each auto-correlation.
    pub temporal: [BoundCheck; 2],
    /// `|g²₁₂(0)| ≤ √(g²₁(0) g²₂(0))`.
    pub two_mode_at_zero: BoundCheck,
    /// The same bound at the worst delay.
    pub two_mode: BoundCheck,
}

impl CauchySchwarzReport {
    pub fn any_violation(&self) -> bool {
        self.single_mode.iter().any(|b| b.violated)
            || self.temporal.iter().any(|b| b.violated)
            || self.two_mode.violated
            || self.two_mode_at_zero.violated
    }
}

pub fn cauchy_schwarz_report(
    auto1: &CorrelationSeries,
    auto2: &CorrelationSeries,
    cross: &CorrelationSeries,
) -> Result<CauchySchwarzReport> {
    if auto1.tau != auto2.tau || auto1.tau != cross.tau {
        return Err(Error::InvalidGrid("correlation series use different tau grids".into()));
    }
    let grid = &auto1.tau;
    let single = |s: &CorrelationSeries| {
        let g0 = s.at_zero();
        BoundCheck::new(g0, 1.0, 1.0 - g0, 0.0)
    };
    let temporal = |s: &CorrelationSeries| {
        let g0 = s.at_zero();
        let (k, gmax) = s
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| (k, v.re))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        BoundCheck::new(g0, gmax, gmax - g0, grid.point(k))
    };
    let bound = (auto1.at_zero() * auto2.at_zero()).max(0.0).sqrt();
    let (k, worst) = cross
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| (k, v.norm()))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let c0 = cross.values[0].norm();
    Ok(CauchySchwarzReport {
        single_mode: [single(auto1), single(auto2)],
        temporal: [temporal(auto1), temporal(auto2)],
        two_mode_at_zero: BoundCheck::new(c0, bound, c0 - bound, 0.0),
        two_mode: BoundCheck::new(worst, bound, worst - bound, grid.point(k)),
    })
}
