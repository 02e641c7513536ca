//! Compressed-sparse-row storage for complex operators.
//!
//! Dense matrices elsewhere in the crate are column-major, so the kernels at
//! the bottom of this file operate on column-major slices.

use faer::Mat;
use num_complex::Complex64 as C64;

/// Entries with magnitude at or below this are never stored.
pub const DROP_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_triplets(
            diag.len(),
            diag.len(),
            diag.iter().enumerate().map(|(i, &v)| (i, i, v)),
        )
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed; the summed entry is dropped if it falls under
    /// [`DROP_TOLERANCE`].
    ///
    /// Panics if an index is out of bounds.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, C64)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) out of bounds");
            rows[i].push((j, v));
        }
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let col = row[k].0;
                let mut acc = C64::new(0.0, 0.0);
                while k < row.len() && row[k].0 == col {
                    acc += row[k].1;
                    k += 1;
                }
                if acc.norm() > DROP_TOLERANCE {
                    indices.push(col);
                    data.push(acc);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            data,
        }
    }

    pub fn from_dense(m: &Mat<C64>) -> Self {
        let mut trip = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                trip.push((i, j, m[(i, j)]));
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), trip)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// Iterates over stored `(row, col, value)` entries in row order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            (self.indptr[i]..self.indptr[i + 1]).map(move |p| (i, self.indices[p], self.data[p]))
        })
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        (self.indptr[i]..self.indptr[i + 1]).map(move |p| (self.indices[p], self.data[p]))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (lo, hi) = (self.indptr[i], self.indptr[i + 1]);
        match self.indices[lo..hi].binary_search(&j) {
            Ok(p) => self.data[lo + p],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn to_dense(&self) -> Mat<C64> {
        let mut m = Mat::<C64>::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.iter().map(|(i, j, v)| (j, i, v.conj())),
        )
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.iter().map(|(i, j, v)| (j, i, v)))
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v = v.conj());
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.iter().map(|(i, j, v)| (i, j, v * s)),
        )
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.iter()
                .map(|(i, j, v)| (i, j, a * v))
                .chain(other.iter().map(|(i, j, v)| (i, j, b * v))),
        )
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions differ");
        let mut trip = Vec::new();
        for i in 0..self.nrows {
            for (k, a) in self.row(i) {
                for (j, b) in rhs.row(k) {
                    trip.push((i, j, a * b));
                }
            }
        }
        Self::from_triplets(self.nrows, rhs.ncols, trip)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let mut trip = Vec::with_capacity(self.nnz() * rhs.nnz());
        for (i, j, a) in self.iter() {
            for (k, l, b) in rhs.iter() {
                trip.push((i * rhs.nrows + k, j * rhs.ncols + l, a * b));
            }
        }
        Self::from_triplets(self.nrows * rhs.nrows, self.ncols * rhs.ncols, trip)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Induced ∞-norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `y += alpha * self * x`.
    pub fn matvec_acc(&self, alpha: C64, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[p] * x[self.indices[p]];
            }
            *yi += alpha * acc;
        }
    }

    /// `out += alpha * self * X` for a column-major `X` with `self.ncols` rows.
    pub(crate) fn left_mul_acc(&self, alpha: C64, x: &[C64], out: &mut [C64]) {
        let (n, m) = (self.ncols, self.nrows);
        let cols = x.len() / n;
        debug_assert_eq!(out.len(), m * cols);
        for c in 0..cols {
            self.matvec_acc(alpha, &x[c * n..(c + 1) * n], &mut out[c * m..(c + 1) * m]);
        }
    }

    /// `out += alpha * X * self†` for a column-major `X` with `self.ncols`
    /// columns.
    pub(crate) fn right_mul_adjoint_acc(&self, alpha: C64, x: &[C64], out: &mut [C64]) {
        let rows = x.len() / self.ncols;
        debug_assert_eq!(out.len(), rows * self.nrows);
        // column j of X A† is sum_k conj(A[j,k]) X[:, k]
        for j in 0..self.nrows {
            let dst = &mut out[j * rows..(j + 1) * rows];
            for p in self.indptr[j]..self.indptr[j + 1] {
                let w = alpha * self.data[p].conj();
                let k = self.indices[p];
                let src = &x[k * rows..(k + 1) * rows];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed_and_dust_dropped() {
        let m = CsrMatrix::from_triplets(
            2,
            2,
            [
                (0, 1, c(1.0, 0.0)),
                (0, 1, c(2.0, 0.5)),
                (1, 0, c(1e-15, 0.0)),
            ],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(3.0, 0.5));
        assert_eq!(m.get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn kron_matches_block_layout() {
        let a = CsrMatrix::from_triplets(2, 2, [(0, 1, c(2.0, 0.0)), (1, 0, c(0.0, 1.0))]);
        let b = CsrMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!(k.nrows(), 6);
        for i in 0..3 {
            assert_eq!(k.get(i, 3 + i), c(2.0, 0.0));
            assert_eq!(k.get(3 + i, i), c(0.0, 1.0));
        }
        assert_eq!(k.nnz(), 6);
    }

    #[test]
    fn dense_kernels_agree_with_products() {
        let a = CsrMatrix::from_triplets(
            3,
            3,
            [
                (0, 0, c(1.0, 1.0)),
                (0, 2, c(-2.0, 0.0)),
                (1, 1, c(0.5, 0.0)),
                (2, 0, c(0.0, 3.0)),
            ],
        );
        let x: Vec<C64> = (0..9).map(|k| c(k as f64, -(k as f64) / 3.0)).collect();
        let xd = faer::MatRef::from_column_major_slice(&x, 3, 3).to_owned();
        let ad = a.to_dense();

        let mut out = vec![c(0.0, 0.0); 9];
        a.left_mul_acc(c(1.0, 0.0), &x, &mut out);
        let expect = &ad * &xd;
        for j in 0..3 {
            for i in 0..3 {
                assert!((out[i + 3 * j] - expect[(i, j)]).norm() < 1e-12);
            }
        }

        let mut out = vec![c(0.0, 0.0); 9];
        a.right_mul_adjoint_acc(c(1.0, 0.0), &x, &mut out);
        let expect = &xd * ad.adjoint();
        for j in 0..3 {
            for i in 0..3 {
                assert!((out[i + 3 * j] - expect[(i, j)]).norm() < 1e-12);
            }
        }
    }
}
