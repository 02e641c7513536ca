//! Time propagation under `d/dt vec(ρ) = L vec(ρ)` with an adaptive
//! Dormand-Prince 5(4) integrator and quartic dense output.

use num_complex::Complex64 as C64;

use super::Liouvillian;
use crate::dense;
use crate::error::{Error, Result};
use crate::hilbert::DensityOperator;

/// Equally spaced times `0, dt, 2 dt, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformGrid {
    step: f64,
    len: usize,
}

impl UniformGrid {
    pub fn new(step: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        Ok(Self { step, len })
    }

    /// Grid covering `[0, t_max]`; `t_max` must be a multiple of `step`.
    pub fn span(t_max: f64, step: f64) -> Result<Self> {
        if !(t_max >= 0.0) || !(step > 0.0) {
            return Err(Error::InvalidGrid(format!("span {t_max} with step {step}")));
        }
        let intervals = (t_max / step).round();
        if (intervals * step - t_max).abs() > 1e-9 * t_max.max(step) {
            return Err(Error::InvalidGrid(format!(
                "t_max {t_max} is not a multiple of step {step}"
            )));
        }
        Self::new(step, intervals as usize + 1)
    }

    /// Validates explicit sample times: start at 0, increasing, uniform.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        match points {
            [] => Err(Error::InvalidGrid("grid is empty".into())),
            [t] if *t == 0.0 => Self::new(1.0, 1),
            [t0, t1, ..] => {
                if *t0 != 0.0 {
                    return Err(Error::InvalidGrid(format!("grid starts at {t0}, not 0")));
                }
                let step = t1 - t0;
                if !(step > 0.0) {
                    return Err(Error::InvalidGrid("grid is not increasing".into()));
                }
                for (k, t) in points.iter().enumerate() {
                    if (t - k as f64 * step).abs() > 1e-9 * step.max(t.abs()) {
                        return Err(Error::InvalidGrid(format!("point {k} breaks uniformity")));
                    }
                }
                Self::new(step, points.len())
            }
            [t] => Err(Error::InvalidGrid(format!("grid starts at {t}, not 0"))),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn point(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn t_max(&self) -> f64 {
        self.point(self.len - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.point(k)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 50_000_000,
        }
    }
}

#[cfg(test)]
const C: [f64; 6] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];
const A: [[f64; 5]; 6] = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// difference between the fifth- and fourth-order weights, seven stages
const E: [f64; 7] = [
    -71.0 / 57600.0,
    0.0,
    71.0 / 16695.0,
    -71.0 / 1920.0,
    17253.0 / 339200.0,
    -22.0 / 525.0,
    1.0 / 40.0,
];
// quartic dense-output coefficients, one row per stage
const P: [[f64; 4]; 7] = [
    [
        1.0,
        -8048581381.0 / 2820520608.0,
        8663915743.0 / 2820520608.0,
        -12715105075.0 / 11282082432.0,
    ],
    [0.0, 0.0, 0.0, 0.0],
    [
        0.0,
        131558114200.0 / 32700410799.0,
        -68118460800.0 / 10900136933.0,
        87487479700.0 / 32700410799.0,
    ],
    [
        0.0,
        -1754552775.0 / 470086768.0,
        14199869525.0 / 1410260304.0,
        -10690763975.0 / 1880347072.0,
    ],
    [
        0.0,
        127303824393.0 / 49829197408.0,
        -318862633887.0 / 49829197408.0,
        701980252875.0 / 199316789632.0,
    ],
    [
        0.0,
        -282668133.0 / 205662961.0,
        2019193451.0 / 616988883.0,
        -1453857185.0 / 822651844.0,
    ],
    [
        0.0,
        40617522.0 / 29380423.0,
        -110615467.0 / 29380423.0,
        69997945.0 / 29380423.0,
    ],
];

fn rms_scaled(v: &[C64], y: &[C64], rtol: f64, atol: f64) -> f64 {
    let s: f64 = v
        .iter()
        .zip(y)
        .map(|(e, yi)| (e.norm() / (atol + rtol * yi.norm())).powi(2))
        .sum();
    (s / v.len() as f64).sqrt()
}

/// Integrates `ẋ = L[x]` from `x0` (column-major, any matrix, Hermitian or
/// not) and hands the state at each grid time to `observer`.
pub fn propagate(
    l: &Liouvillian,
    x0: Vec<C64>,
    grid: &UniformGrid,
    opts: &EvolveOptions,
    mut observer: impl FnMut(usize, &[C64]),
) -> Result<()> {
    let n = l.dim();
    let len = n * n;
    if x0.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: x0.len(),
        });
    }
    let zero = C64::new(0.0, 0.0);
    let mut y = x0;
    observer(0, &y);
    if grid.len() == 1 {
        return Ok(());
    }
    let t_end = grid.t_max();
    let (rtol, atol) = (opts.rtol, opts.atol);

    let mut k: Vec<Vec<C64>> = vec![vec![zero; len]; 7];
    l.apply(&y, &mut k[0]);

    let mut h = {
        let d0 = rms_scaled(&y, &y, rtol, atol);
        let d1 = rms_scaled(&k[0], &y, rtol, atol);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1: Vec<C64> = y.iter().zip(&k[0]).map(|(a, b)| a + b * h0).collect();
        let mut f1 = vec![zero; len];
        l.apply(&y1, &mut f1);
        let diff: Vec<C64> = f1.iter().zip(&k[0]).map(|(a, b)| a - b).collect();
        let d2 = rms_scaled(&diff, &y, rtol, atol) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(t_end)
    };

    let mut t = 0.0;
    let mut next = 1;
    let mut stage = vec![zero; len];
    let mut y_new = vec![zero; len];
    let mut err = vec![zero; len];
    let mut out = vec![zero; len];
    let mut steps = 0;

    while next < grid.len() {
        if t + h >= t_end || t_end - (t + h) < 1e-12 * t_end {
            h = t_end - t;
        }
        for s in 1..6 {
            stage.copy_from_slice(&y);
            for (j, a) in A[s].iter().enumerate().take(s) {
                if *a != 0.0 {
                    let w = h * a;
                    for (st, kj) in stage.iter_mut().zip(&k[j]) {
                        *st += kj * w;
                    }
                }
            }
            l.apply(&stage, &mut k[s]);
        }
        y_new.copy_from_slice(&y);
        for (j, b) in B.iter().enumerate() {
            if *b != 0.0 {
                let w = h * b;
                for (yn, kj) in y_new.iter_mut().zip(&k[j]) {
                    *yn += kj * w;
                }
            }
        }
        l.apply(&y_new, &mut k[6]);
        err.fill(zero);
        for (j, e) in E.iter().enumerate() {
            if *e != 0.0 {
                let w = h * e;
                for (er, kj) in err.iter_mut().zip(&k[j]) {
                    *er += kj * w;
                }
            }
        }
        let err_norm = {
            let s: f64 = err
                .iter()
                .zip(y.iter().zip(&y_new))
                .map(|(e, (a, b))| (e.norm() / (atol + rtol * a.norm().max(b.norm()))).powi(2))
                .sum();
            (s / len as f64).sqrt()
        };
        steps += 1;

        if err_norm <= 1.0 {
            let t_new = if h == t_end - t { t_end } else { t + h };
            while next < grid.len() && grid.point(next) <= t_new {
                let theta = (grid.point(next) - t) / h;
                if theta >= 1.0 {
                    observer(next, &y_new);
                } else {
                    out.copy_from_slice(&y);
                    let powers = [theta, theta * theta, theta.powi(3), theta.powi(4)];
                    for (j, row) in P.iter().enumerate() {
                        let w: f64 = h * row.iter().zip(&powers).map(|(p, q)| p * q).sum::<f64>();
                        if w != 0.0 {
                            for (o, kj) in out.iter_mut().zip(&k[j]) {
                                *o += kj * w;
                            }
                        }
                    }
                    observer(next, &out);
                }
                next += 1;
            }
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            let factor = if err_norm == 0.0 {
                10.0
            } else {
                (0.9 * err_norm.powf(-0.2)).min(10.0)
            };
            h *= factor;
        } else {
            h *= (0.9 * err_norm.powf(-0.2)).max(0.2);
        }
        if next < grid.len() && (h < 10.0 * f64::EPSILON * t.abs().max(1.0) || steps >= opts.max_steps) {
            return Err(Error::StepSizeUnderflow { t });
        }
    }
    Ok(())
}

/// Trajectory of `rho0` sampled on `grid`.
pub fn evolve(
    l: &Liouvillian,
    rho0: &DensityOperator,
    grid: &UniformGrid,
    opts: &EvolveOptions,
) -> Result<Vec<DensityOperator>> {
    if **l.layout() != **rho0.layout() {
        return Err(Error::LayoutMismatch);
    }
    let n = l.dim();
    let mut frames = Vec::with_capacity(grid.len());
    propagate(l, dense::to_col_major(rho0.matrix()), grid, opts, |_, x| {
        frames.push(dense::from_col_major(x, n));
    })?;
    frames
        .into_iter()
        .map(|m| DensityOperator::from_matrix_unchecked(l.layout().clone(), m))
        .collect()
}
