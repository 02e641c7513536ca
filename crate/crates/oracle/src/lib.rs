//! Brute-force dense reference computations.
//!
//! Everything here is written directly from the defining formulas with dense
//! matrices and no shortcuts, so that the sparse, matrix-free and adaptive
//! code in `mollow-core` has something independent to be checked against.
//! Only suitable for small systems.

use faer::Mat;
use num_complex::Complex64 as C64;

pub type Channel = (f64, Mat<C64>);

pub fn zeros(n: usize, m: usize) -> Mat<C64> {
    Mat::<C64>::zeros(n, m)
}

pub fn identity(n: usize) -> Mat<C64> {
    Mat::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn adjoint(a: &Mat<C64>) -> Mat<C64> {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn add(a: &Mat<C64>, b: &Mat<C64>, alpha: C64) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] + alpha * b[(i, j)])
}

pub fn scale(a: &Mat<C64>, s: C64) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| s * a[(i, j)])
}

pub fn trace(a: &Mat<C64>) -> C64 {
    (0..a.nrows()).map(|i| a[(i, i)]).sum()
}

pub fn max_abs_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// `a ⊗ b` with `a`'s index as the slow one.
pub fn kron(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    let (p, q) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * p, a.ncols() * q, |i, j| a[(i / p, j / q)] * b[(i % p, j % q)])
}

/// `-i[H, ρ] + Σ c (OρO† − ½O†Oρ − ½ρO†O)`.
pub fn lindblad_rhs(h: &Mat<C64>, channels: &[Channel], rho: &Mat<C64>) -> Mat<C64> {
    let comm = add(&(h * rho), &(rho * h), C64::new(-1.0, 0.0));
    let mut out = scale(&comm, C64::new(0.0, -1.0));
    for (rate, o) in channels {
        let od = adjoint(o);
        let odo = &od * o;
        let jump = &(o * rho) * &od;
        let anti = add(&(&odo * rho), &(rho * &odo), C64::new(1.0, 0.0));
        let d = add(&jump, &anti, C64::new(-0.5, 0.0));
        out = add(&out, &d, C64::new(*rate, 0.0));
    }
    out
}

/// Column-stacked `vec(X)`.
pub fn vec(x: &Mat<C64>) -> Mat<C64> {
    let n = x.nrows();
    Mat::from_fn(n * x.ncols(), 1, |k, _| x[(k % n, k / n)])
}

pub fn unvec(v: &Mat<C64>, n: usize) -> Mat<C64> {
    Mat::from_fn(n, v.nrows() / n, |i, j| v[(i + j * n, 0)])
}

/// Dense super-matrix assembled column by column from `lindblad_rhs` on the
/// matrix units `E_ij`.
pub fn super_matrix(h: &Mat<C64>, channels: &[Channel]) -> Mat<C64> {
    let n = h.nrows();
    let mut out = zeros(n * n, n * n);
    for j in 0..n {
        for i in 0..n {
            let mut e = zeros(n, n);
            e[(i, j)] = C64::new(1.0, 0.0);
            let col = vec(&lindblad_rhs(h, channels, &e));
            for k in 0..n * n {
                out[(k, i + j * n)] = col[(k, 0)];
            }
        }
    }
    out
}

fn norm_one(a: &Mat<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &Mat<C64>) -> Mat<C64> {
    let n = a.nrows();
    let norm = norm_one(a);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let s = scale(a, C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=24 {
        term = scale(&(&term * &s), C64::new(1.0 / k as f64, 0.0));
        sum = add(&sum, &term, C64::new(1.0, 0.0));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `ρ(t) = unvec(exp(L t) vec(ρ₀))`.
pub fn propagate(l: &Mat<C64>, rho0: &Mat<C64>, t: f64) -> Mat<C64> {
    let n = rho0.nrows();
    let p = expm(&scale(l, C64::new(t, 0.0)));
    unvec(&(&p * &vec(rho0)), n)
}

/// `Tr(B e^{Lτ}[X₀])` at each `tau`, with every delay exponentiated from
/// scratch.
pub fn two_time(l: &Mat<C64>, x0: &Mat<C64>, b: &Mat<C64>, taus: &[f64]) -> Vec<C64> {
    taus.iter().map(|&t| trace(&(b * &propagate(l, x0, t)))).collect()
}

/// Long-time limit `exp(L t)` applied to the maximally mixed state.
pub fn relaxed_state(l: &Mat<C64>, n: usize, t: f64) -> Mat<C64> {
    let rho0 = scale(&identity(n), C64::new(1.0 / n as f64, 0.0));
    propagate(l, &rho0, t)
}
