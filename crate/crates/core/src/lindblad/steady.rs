//! Steady states of a Liouvillian.
//!
//! Small systems use a sparse LU factorisation of the super-matrix with one
//! diagonal row replaced by the trace constraint. Larger ones use GMRES,
//! right-preconditioned by the inverse of the no-jump part
//! `S[X] = A X + X A†`, which is diagonal in the eigenbasis of `A`.

use faer::linalg::solvers::DenseSolveCore;
use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use num_complex::Complex64 as C64;

use super::gmres::gmres;
use super::Liouvillian;
use crate::dense;
use crate::error::{Error, Result};
use crate::hilbert::DensityOperator;

/// Relative residual demanded of a steady state, in units of
/// [`Liouvillian::norm_bound`].
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Independent solves further apart than this signal a degenerate kernel.
pub const DEGENERACY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SteadyStateMethod {
    /// Direct below [`SteadyStateOptions::direct_max_dim`], Krylov above.
    Auto,
    Direct,
    Krylov,
}

#[derive(Clone, Debug)]
pub struct SteadyStateOptions {
    pub method: SteadyStateMethod,
    pub direct_max_dim: usize,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            method: SteadyStateMethod::Auto,
            direct_max_dim: 200,
            restart: 40,
            max_iter: 2000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityOperator,
    /// Largest entry of `L[ρ]`.
    pub residual: f64,
    pub target: f64,
    pub method: SteadyStateMethod,
    /// GMRES iterations summed over both solves; zero for the direct path.
    pub iterations: usize,
}

pub fn steady_state(l: &Liouvillian) -> Result<DensityOperator> {
    steady_state_with(l, &SteadyStateOptions::default()).map(|s| s.rho)
}

pub fn steady_state_with(l: &Liouvillian, opts: &SteadyStateOptions) -> Result<SteadyState> {
    if !l.is_dissipative() {
        return Err(Error::NoDissipation);
    }
    let n = l.dim();
    let method = match opts.method {
        SteadyStateMethod::Auto if n <= opts.direct_max_dim => SteadyStateMethod::Direct,
        SteadyStateMethod::Auto => SteadyStateMethod::Krylov,
        m => m,
    };
    let target = RESIDUAL_TOL * l.norm_bound();

    let (first, second, iterations) = match method {
        SteadyStateMethod::Direct => {
            let a = solve_direct(l, 0)?;
            let b = solve_direct(l, (n - 1) * (n + 1))?;
            (a, b, 0)
        }
        _ => {
            let pre = Preconditioner::new(l)?;
            let (a, ia) = solve_krylov(l, &pre, mixed_start(n, 0.0), target, opts)?;
            let (b, ib) = solve_krylov(l, &pre, mixed_start(n, 1e-3), target, opts)?;
            (a, b, ia + ib)
        }
    };

    let spread = first
        .iter()
        .zip(&second)
        .map(|(p, q)| (p - q).norm())
        .fold(0.0, |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) });
    if spread.is_nan() || spread > DEGENERACY_TOL {
        return Err(Error::DegenerateSteadyState(if spread.is_nan() {
            f64::INFINITY
        } else {
            spread
        }));
    }

    let mut x = first;
    dense::hermitize(&mut x, n);
    let tr = dense::trace(&x, n).re;
    x.iter_mut().for_each(|v| *v /= tr);
    let mut lx = vec![C64::new(0.0, 0.0); n * n];
    l.apply(&x, &mut lx);
    let residual = dense::max_abs(&lx);
    if !(residual <= target) {
        return Err(Error::NotConverged { residual, target });
    }
    let rho = DensityOperator::new(l.layout().clone(), dense::from_col_major(&x, n))?;
    Ok(SteadyState {
        rho,
        residual,
        target,
        method,
        iterations,
    })
}

/// Verifies that `rho` is stationary under `l`, returning the residual.
pub fn check_steady_state(l: &Liouvillian, rho: &DensityOperator) -> Result<f64> {
    if **l.layout() != **rho.layout() {
        return Err(Error::LayoutMismatch);
    }
    let residual = l.residual(rho.matrix());
    let target = RESIDUAL_TOL * l.norm_bound();
    if residual <= target {
        Ok(residual)
    } else {
        Err(Error::NotSteadyState { residual, target })
    }
}

fn solve_direct(l: &Liouvillian, row: usize) -> Result<Vec<C64>> {
    let n = l.dim();
    let big = n * n;
    let mut trip: Vec<Triplet<usize, usize, C64>> = l
        .super_matrix()
        .iter()
        .filter(|&(i, _, _)| i != row)
        .map(|(i, j, v)| Triplet::new(i, j, v))
        .collect();
    trip.extend((0..n).map(|k| Triplet::new(row, k * (n + 1), C64::new(1.0, 0.0))));
    let m = SparseColMat::<usize, C64>::try_new_from_triplets(big, big, &trip)
        .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
    let lu = m
        .sp_lu()
        .map_err(|_| Error::DegenerateSteadyState(f64::INFINITY))?;
    let mut rhs = Mat::<C64>::zeros(big, 1);
    rhs[(row, 0)] = C64::new(1.0, 0.0);
    lu.solve_in_place(rhs.as_mut());
    Ok(rhs.col_as_slice(0).to_vec())
}

/// `I/n` plus an optional traceless Hermitian perturbation.
fn mixed_start(n: usize, eps: f64) -> Vec<C64> {
    let mut x = vec![C64::new(0.0, 0.0); n * n];
    let mid = (n as f64 - 1.0) / 2.0;
    for i in 0..n {
        x[i * (n + 1)] = C64::new(1.0 / n as f64 + eps * (i as f64 - mid) / n as f64, 0.0);
        if i + 1 < n {
            let c = C64::new(0.5 * eps, 0.25 * eps);
            x[i + (i + 1) * n] = c;
            x[(i + 1) + i * n] = c.conj();
        }
    }
    x
}

/// Inverse of `X ↦ A X + X A† - σ X` through `A = V diag(a) V⁻¹`.
struct Preconditioner {
    v: Mat<C64>,
    v_inv: Mat<C64>,
    denom: Mat<C64>,
}

impl Preconditioner {
    fn new(l: &Liouvillian) -> Result<Self> {
        let a = l.drift.to_dense();
        let eig = a
            .eigen()
            .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
        let v = eig.U().to_owned();
        let vals: Vec<C64> = (0..a.nrows()).map(|i| eig.S().column_vector()[i]).collect();
        let v_inv = v.partial_piv_lu().inverse();
        let n = vals.len();
        let scale = vals.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let mut dmin = f64::INFINITY;
        for ai in &vals {
            for aj in &vals {
                dmin = dmin.min((ai + aj.conj()).norm());
            }
        }
        let sigma = if dmin < 1e-8 * scale { 1e-8 * scale } else { 0.0 };
        let denom = Mat::from_fn(n, n, |i, j| vals[i] + vals[j].conj() - sigma);
        Ok(Self { v, v_inv, denom })
    }

    fn apply(&self, c: &[C64]) -> Vec<C64> {
        let n = self.denom.nrows();
        let cm = MatRef::from_column_major_slice(c, n, n);
        let mut y = &(&self.v_inv * cm) * self.v_inv.adjoint();
        for j in 0..n {
            for i in 0..n {
                y[(i, j)] /= self.denom[(i, j)];
            }
        }
        let x = &(&self.v * &y) * self.v.adjoint();
        dense::to_col_major(&x)
    }
}

fn remove_trace(x: &mut [C64], n: usize) {
    let t = dense::trace(x, n) / n as f64;
    for i in 0..n {
        x[i * (n + 1)] -= t;
    }
}

fn solve_krylov(
    l: &Liouvillian,
    pre: &Preconditioner,
    start: Vec<C64>,
    target: f64,
    opts: &SteadyStateOptions,
) -> Result<(Vec<C64>, usize)> {
    let n = l.dim();
    let mut b = vec![C64::new(0.0, 0.0); n * n];
    l.apply(&start, &mut b);
    b.iter_mut().for_each(|v| *v = -*v);
    let op = |y: &[C64], out: &mut [C64]| {
        let mut z = pre.apply(y);
        remove_trace(&mut z, n);
        l.apply(&z, out);
    };
    // the GMRES residual is exactly L[ρ] in the 2-norm
    let tol = 1e-2 * target;
    let out = gmres(op, &b, vec![C64::new(0.0, 0.0); n * n], tol, opts.restart, opts.max_iter);
    if !out.converged && !(out.residual <= target) {
        return Err(Error::NotConverged {
            residual: out.residual,
            target,
        });
    }
    let mut z = pre.apply(&out.x);
    remove_trace(&mut z, n);
    let x = start.iter().zip(&z).map(|(s, d)| s + d).collect();
    Ok((x, out.iterations))
}
