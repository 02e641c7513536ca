//! Restarted GMRES for complex linear operators.

use num_complex::Complex64 as C64;

use crate::dense::norm2;

pub(crate) struct GmresOutcome {
    pub x: Vec<C64>,
    /// Euclidean norm of `b - A x` at exit.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(p, q)| p.conj() * q).sum()
}

fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Rotation `(c, s)` with `[c s; -s̄ c] [a; b] = [ρ; 0]`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if a.norm() == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

fn rotate(c: f64, s: C64, x: &mut C64, y: &mut C64) {
    let (a, b) = (*x, *y);
    *x = a * c + s * b;
    *y = -s.conj() * a + b * c;
}

/// Solves `A x = b` to an absolute residual of `tol`.
pub(crate) fn gmres(
    mut op: impl FnMut(&[C64], &mut [C64]),
    b: &[C64],
    mut x: Vec<C64>,
    tol: f64,
    restart: usize,
    max_iter: usize,
) -> GmresOutcome {
    let len = b.len();
    let zero = C64::new(0.0, 0.0);
    let mut w = vec![zero; len];
    let mut iterations = 0;
    let mut r = vec![zero; len];

    loop {
        op(&x, &mut w);
        for ((ri, bi), wi) in r.iter_mut().zip(b).zip(&w) {
            *ri = bi - wi;
        }
        let beta = norm2(&r);
        if beta <= tol || iterations >= max_iter {
            return GmresOutcome {
                x,
                residual: beta,
                iterations,
                converged: beta <= tol,
            };
        }

        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(restart + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut hess: Vec<Vec<C64>> = Vec::with_capacity(restart);
        let mut rot: Vec<(f64, C64)> = Vec::with_capacity(restart);
        let mut g = vec![zero; restart + 1];
        g[0] = C64::new(beta, 0.0);

        let mut k = 0;
        while k < restart && iterations < max_iter {
            op(&basis[k], &mut w);
            iterations += 1;
            let mut h = vec![zero; k + 2];
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for (j, v) in basis.iter().enumerate() {
                    let d = dot(v, &w);
                    h[j] += d;
                    axpy(-d, v, &mut w);
                }
            }
            let hn = norm2(&w);
            h[k + 1] = C64::new(hn, 0.0);
            for (j, &(c, s)) in rot.iter().enumerate() {
                let (lo, hi) = h.split_at_mut(j + 1);
                rotate(c, s, &mut lo[j], &mut hi[0]);
            }
            let (c, s) = givens(h[k], h[k + 1]);
            {
                let (lo, hi) = h.split_at_mut(k + 1);
                rotate(c, s, &mut lo[k], &mut hi[0]);
            }
            {
                let (lo, hi) = g.split_at_mut(k + 1);
                rotate(c, s, &mut lo[k], &mut hi[0]);
            }
            rot.push((c, s));
            hess.push(h);
            k += 1;
            if g[k].norm() <= tol || hn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }

        // back substitution on the triangular factor
        let mut y = vec![zero; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for j in i + 1..k {
                acc -= hess[j][i] * y[j];
            }
            y[i] = acc / hess[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            axpy(*yj, &basis[j], &mut x);
        }
    }
}
