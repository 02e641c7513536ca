//! Liouvillian superoperators, steady states and time propagation.
//!
//! Superoperators use the column-stacking convention
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. The generator is
//!
//! ```text
//! L[ρ] = -i[H, ρ] + Σ_k c_k (O_k ρ O_k† - ½{O_k†O_k, ρ})
//! ```
//!
//! and is applied matrix-free as `A ρ + ρ A† + Σ_k c_k O_k ρ O_k†` with
//! `A = -i H_eff`, `H_eff = H - (i/2) Σ_k c_k O_k†O_k`.

mod evolve;
mod gmres;
mod steady;

use std::sync::{Arc, OnceLock};

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::dense;
use crate::error::{Error, Result};
use crate::hilbert::{CsrMatrix, DensityOperator, Operator, SpaceLayout, HERMITIAN_TOL};

pub use evolve::{evolve, propagate, EvolveOptions, UniformGrid};
pub use steady::{
    check_steady_state, steady_state, steady_state_with, SteadyState, SteadyStateMethod,
    SteadyStateOptions,
};

/// A dissipative channel `rate · D(op)`.
#[derive(Clone, Debug)]
pub struct CollapseChannel {
    op: Operator,
    rate: f64,
}

impl CollapseChannel {
    pub fn new(op: Operator, rate: f64) -> Result<Self> {
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::NegativeRate(rate));
        }
        Ok(Self { op, rate })
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

#[derive(Debug)]
pub struct Liouvillian {
    layout: Arc<SpaceLayout>,
    hamiltonian: Operator,
    channels: Vec<CollapseChannel>,
    // -i H_eff
    drift: CsrMatrix,
    jumps: Vec<(f64, CsrMatrix)>,
    super_matrix: OnceLock<CsrMatrix>,
}

/// `D(O)[ρ] = O ρ O† - ½ O†O ρ - ½ ρ O†O`.
pub fn dissipator(op: &Operator, rho: &DensityOperator) -> Result<Mat<C64>> {
    if **op.layout() != **rho.layout() {
        return Err(Error::LayoutMismatch);
    }
    let o = op.to_dense();
    let r = rho.matrix();
    let od = o.adjoint().to_owned();
    let odo = &od * &o;
    let a = &(&o * r) * &od;
    let b = &odo * r;
    let c = r * &odo;
    Ok(Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        a[(i, j)] - (b[(i, j)] + c[(i, j)]) * 0.5
    }))
}

/// Assembles `L` from a Hermitian Hamiltonian and collapse channels.
pub fn build_liouvillian(h: Operator, channels: Vec<CollapseChannel>) -> Result<Liouvillian> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let layout = h.layout().clone();
    for ch in &channels {
        if **ch.op.layout() != *layout {
            return Err(Error::LayoutMismatch);
        }
    }
    let n = layout.total_dim();
    let minus_i = C64::new(0.0, -1.0);
    let mut drift = h.matrix().scale(minus_i);
    let mut jumps = Vec::new();
    for ch in &channels {
        if ch.rate == 0.0 {
            continue;
        }
        let o = ch.op.matrix();
        let odo = o.adjoint().matmul(o);
        drift = drift.lin_comb(C64::new(1.0, 0.0), &odo, C64::new(-0.5 * ch.rate, 0.0));
        jumps.push((ch.rate, o.clone()));
    }
    debug_assert_eq!(drift.nrows(), n);
    let l = Liouvillian {
        layout,
        hamiltonian: h,
        channels,
        drift,
        jumps,
        super_matrix: OnceLock::new(),
    };
    if cfg!(debug_assertions) && n <= 16 {
        l.debug_self_check();
    }
    Ok(l)
}

impl Liouvillian {
    pub fn layout(&self) -> &Arc<SpaceLayout> {
        &self.layout
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[CollapseChannel] {
        &self.channels
    }

    /// Hilbert-space dimension `n`; superoperators act on `n²` vectors.
    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn is_dissipative(&self) -> bool {
        !self.jumps.is_empty()
    }

    /// Cheap upper bound on the induced ∞-norm of the super-matrix.
    pub fn norm_bound(&self) -> f64 {
        2.0 * self.drift.norm_inf()
            + self
                .jumps
                .iter()
                .map(|(c, o)| c * o.norm_inf() * o.adjoint().norm_inf())
                .sum::<f64>()
    }

    /// `out = L[X]` on column-major `n × n` buffers.
    pub fn apply(&self, x: &[C64], out: &mut [C64]) {
        let n = self.dim();
        assert_eq!(x.len(), n * n);
        assert_eq!(out.len(), n * n);
        out.fill(C64::new(0.0, 0.0));
        let one = C64::new(1.0, 0.0);
        self.drift.left_mul_acc(one, x, out);
        self.drift.right_mul_adjoint_acc(one, x, out);
        if self.jumps.is_empty() {
            return;
        }
        let mut tmp = vec![C64::new(0.0, 0.0); n * n];
        for (rate, o) in &self.jumps {
            tmp.fill(C64::new(0.0, 0.0));
            o.left_mul_acc(one, x, &mut tmp);
            o.right_mul_adjoint_acc(C64::new(*rate, 0.0), &tmp, out);
        }
    }

    pub fn apply_mat(&self, x: &Mat<C64>) -> Mat<C64> {
        let n = self.dim();
        let xv = dense::to_col_major(x);
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        self.apply(&xv, &mut out);
        dense::from_col_major(&out, n)
    }

    /// Sparse `n² × n²` matrix of the generator, built on first use.
    pub fn super_matrix(&self) -> &CsrMatrix {
        self.super_matrix.get_or_init(|| {
            let n = self.dim();
            let id = CsrMatrix::identity(n);
            let one = C64::new(1.0, 0.0);
            let mut m = id
                .kron(&self.drift)
                .lin_comb(one, &self.drift.conj().kron(&id), one);
            for (rate, o) in &self.jumps {
                m = m.lin_comb(one, &o.conj().kron(o), C64::new(*rate, 0.0));
            }
            m
        })
    }

    /// Largest entry of `L[ρ]`.
    pub fn residual(&self, rho: &Mat<C64>) -> f64 {
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        self.apply(&dense::to_col_major(rho), &mut out);
        dense::max_abs(&out)
    }

    fn debug_self_check(&self) {
        let n = self.dim();
        let x = Mat::<C64>::from_fn(n, n, |i, j| {
            C64::new(((3 * i + 7 * j) % 5) as f64 - 2.0, ((i * j + 1) % 3) as f64)
        });
        let h = self.hamiltonian.to_dense();
        let (hx, xh) = (&h * &x, &x * &h);
        let mut direct = Mat::<C64>::from_fn(n, n, |i, j| C64::new(0.0, -1.0) * (hx[(i, j)] - xh[(i, j)]));
        for ch in &self.channels {
            let o = ch.op.to_dense();
            let od = o.adjoint().to_owned();
            let odo = &od * &o;
            let (oxo, ax, xa) = (&(&o * &x) * &od, &odo * &x, &x * &odo);
            for j in 0..n {
                for i in 0..n {
                    direct[(i, j)] += (oxo[(i, j)] - (ax[(i, j)] + xa[(i, j)]) * 0.5) * ch.rate;
                }
            }
        }
        let got = self.apply_mat(&x);
        let scale = 1.0 + self.norm_bound() * dense::max_abs(&dense::to_col_major(&x));
        for j in 0..n {
            for i in 0..n {
                debug_assert!(
                    (got[(i, j)] - direct[(i, j)]).norm() <= 1e-12 * scale,
                    "matrix-free Liouvillian disagrees with direct formula"
                );
            }
        }
    }
}
