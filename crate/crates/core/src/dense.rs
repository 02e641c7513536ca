//! Conversions between faer matrices and column-major buffers.

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;

pub(crate) fn to_col_major(m: &Mat<C64>) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for j in 0..m.ncols() {
        out.extend_from_slice(m.col_as_slice(j));
    }
    out
}

pub(crate) fn from_col_major(v: &[C64], n: usize) -> Mat<C64> {
    MatRef::from_column_major_slice(v, n, v.len() / n).to_owned()
}

/// Σ Xᵢᵢ of a column-major square buffer.
pub(crate) fn trace(v: &[C64], n: usize) -> C64 {
    (0..n).map(|i| v[i * (n + 1)]).sum()
}

/// `(X + X†) / 2` in place.
pub(crate) fn hermitize(v: &mut [C64], n: usize) {
    for j in 0..n {
        for i in 0..j {
            let avg = (v[i + j * n] + v[j + i * n].conj()) * 0.5;
            v[i + j * n] = avg;
            v[j + i * n] = avg.conj();
        }
        let d = &mut v[j * (n + 1)];
        *d = C64::new(d.re, 0.0);
    }
}

pub(crate) fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
