//! Composite Hilbert spaces, sparse operators on them, and density operators.
//!
//! Basis ordering follows the layout: the first subsystem is the slowest
//! varying index of the flat basis, the last one the fastest.

mod sparse;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub use sparse::{CsrMatrix, DROP_TOLERANCE};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

/// Ordered tensor-product structure of a Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceLayout {
    subsystems: Vec<Subsystem>,
    total_dim: usize,
}

impl SpaceLayout {
    pub fn new<S: Into<String>>(subsystems: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut out: Vec<Subsystem> = Vec::new();
        for (label, dim) in subsystems {
            let label = label.into();
            if dim == 0 {
                return Err(Error::EmptySubsystem(label));
            }
            if out.iter().any(|s| s.label == label) {
                return Err(Error::DuplicateLabel(label));
            }
            out.push(Subsystem { label, dim });
        }
        let total_dim = out.iter().map(|s| s.dim).product();
        Ok(Self {
            subsystems: out,
            total_dim,
        })
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownSubsystem(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.subsystems[self.position(label)?].dim)
    }

    /// Flat basis index of a product state given one index per subsystem.
    pub fn flat_index(&self, local: &[usize]) -> Result<usize> {
        if local.len() != self.subsystems.len() {
            return Err(Error::DimensionMismatch {
                expected: self.subsystems.len(),
                found: local.len(),
            });
        }
        let mut idx = 0;
        for (s, &k) in self.subsystems.iter().zip(local) {
            if k >= s.dim {
                return Err(Error::StateOutOfRange {
                    label: s.label.clone(),
                    index: k,
                    dim: s.dim,
                });
            }
            idx = idx * s.dim + k;
        }
        Ok(idx)
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn local_indices(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (slot, s) in out.iter_mut().zip(&self.subsystems).rev() {
            *slot = flat % s.dim;
            flat /= s.dim;
        }
        out
    }
}

impl fmt::Display for SpaceLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .subsystems
            .iter()
            .map(|s| format!("{}[{}]", s.label, s.dim))
            .collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}

/// Sparse operator on a [`SpaceLayout`].
///
/// The arithmetic operator impls panic when the operands live on different
/// layouts; use [`Operator::try_mul`] and friends to get an error instead.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    layout: Arc<SpaceLayout>,
    matrix: CsrMatrix,
}

impl Operator {
    pub fn new(layout: Arc<SpaceLayout>, matrix: CsrMatrix) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { layout, matrix })
    }

    pub fn identity(layout: Arc<SpaceLayout>) -> Self {
        let n = layout.total_dim();
        Self {
            layout,
            matrix: CsrMatrix::identity(n),
        }
    }

    pub fn zero(layout: Arc<SpaceLayout>) -> Self {
        let n = layout.total_dim();
        Self {
            layout,
            matrix: CsrMatrix::zeros(n, n),
        }
    }

    /// Operator on a single anonymous subsystem, for building blocks that are
    /// later [`embed`]ded.
    pub fn local(label: &str, matrix: CsrMatrix) -> Result<Self> {
        let layout = SpaceLayout::new([(label, matrix.nrows())])?;
        Self::new(Arc::new(layout), matrix)
    }

    pub fn layout(&self) -> &Arc<SpaceLayout> {
        &self.layout
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            layout: self.layout.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, s: impl Into<C64>) -> Self {
        Self {
            layout: self.layout.clone(),
            matrix: self.matrix.scale(s.into()),
        }
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.layout, &other.layout) || self.layout == other.layout {
            Ok(())
        } else {
            Err(Error::LayoutMismatch)
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_layout(rhs)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: self.matrix.matmul(&rhs.matrix),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.lin_comb(1.0, rhs, 1.0)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.lin_comb(1.0, rhs, -1.0)
    }

    fn lin_comb(&self, a: impl Into<C64>, rhs: &Self, b: impl Into<C64>) -> Result<Self> {
        self.check_layout(rhs)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: self.matrix.lin_comb(a.into(), &rhs.matrix, b.into()),
        })
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.try_mul(rhs)?.try_sub(&rhs.try_mul(self)?)
    }

    /// Largest elementwise `|A - A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix
            .lin_comb(C64::new(1.0, 0.0), &self.matrix.adjoint(), C64::new(-1.0, 0.0))
            .max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn to_dense(&self) -> Mat<C64> {
        self.matrix.to_dense()
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                self.$try(rhs).expect("operator layouts differ")
            }
        }
        impl $trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                (&self).$try(&rhs).expect("operator layouts differ")
            }
        }
    };
}
impl_binop!(Mul, mul, try_mul);
impl_binop!(Add, add, try_add);
impl_binop!(Sub, sub, try_sub);

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

impl Mul<&Operator> for C64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

/// Lowering operator on the truncated Fock space `{0, …, n_max}`.
pub fn annihilation(n_max: usize) -> Result<Operator> {
    if n_max == 0 {
        return Err(Error::InvalidTruncation);
    }
    let m = CsrMatrix::from_triplets(
        n_max + 1,
        n_max + 1,
        (1..=n_max).map(|n| (n - 1, n, C64::new((n as f64).sqrt(), 0.0))),
    );
    Operator::local("fock", m)
}

/// Kronecker-embeds `op` into the `label` factor of `layout`, with identities
/// on every other factor.
pub fn embed(op: &Operator, layout: &Arc<SpaceLayout>, label: &str) -> Result<Operator> {
    let pos = layout.position(label)?;
    let subs = layout.subsystems();
    if op.dim() != subs[pos].dim {
        return Err(Error::DimensionMismatch {
            expected: subs[pos].dim,
            found: op.dim(),
        });
    }
    let left: usize = subs[..pos].iter().map(|s| s.dim).product();
    let right: usize = subs[pos + 1..].iter().map(|s| s.dim).product();
    let m = CsrMatrix::identity(left)
        .kron(op.matrix())
        .kron(&CsrMatrix::identity(right));
    Operator::new(layout.clone(), m)
}

/// `|to⟩⟨from|` on subsystem `label`, identity elsewhere.
pub fn transition(
    layout: &Arc<SpaceLayout>,
    label: &str,
    from: usize,
    to: usize,
) -> Result<Operator> {
    let dim = layout.dim_of(label)?;
    for index in [from, to] {
        if index >= dim {
            return Err(Error::StateOutOfRange {
                label: label.to_string(),
                index,
                dim,
            });
        }
    }
    let local = CsrMatrix::from_triplets(dim, dim, [(to, from, C64::new(1.0, 0.0))]);
    embed(&Operator::local(label, local)?, layout, label)
}

/// Hermitian, unit-trace, positive semidefinite state.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    layout: Arc<SpaceLayout>,
    matrix: Mat<C64>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(layout: Arc<SpaceLayout>, matrix: Mat<C64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(layout, matrix)?;
        let defect = rho.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotUnity(tr));
        }
        let min = rho.min_eigenvalue()?;
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(layout: Arc<SpaceLayout>, matrix: Mat<C64>) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { layout, matrix })
    }

    /// Projector onto a single flat basis state.
    pub fn basis_state(layout: Arc<SpaceLayout>, flat: usize) -> Result<Self> {
        let n = layout.total_dim();
        if flat >= n {
            return Err(Error::StateOutOfRange {
                label: layout.to_string(),
                index: flat,
                dim: n,
            });
        }
        let mut m = Mat::<C64>::zeros(n, n);
        m[(flat, flat)] = C64::new(1.0, 0.0);
        Ok(Self { layout, matrix: m })
    }

    /// Projector onto a product basis state, one index per subsystem.
    pub fn product_state(layout: Arc<SpaceLayout>, local: &[usize]) -> Result<Self> {
        let flat = layout.flat_index(local)?;
        Self::basis_state(layout, flat)
    }

    pub fn maximally_mixed(layout: Arc<SpaceLayout>) -> Self {
        let n = layout.total_dim();
        let m = Mat::<C64>::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(1.0 / n as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self { layout, matrix: m }
    }

    pub fn layout(&self) -> &Arc<SpaceLayout> {
        &self.layout
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let eig = self
            .matrix
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
        Ok(eig.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// Diagonal of the density matrix.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Populations of the basis states of one subsystem, traced over the rest.
    pub fn reduced_populations(&self, label: &str) -> Result<Vec<f64>> {
        let pos = self.layout.position(label)?;
        let mut out = vec![0.0; self.layout.subsystems()[pos].dim];
        for (flat, p) in self.populations().into_iter().enumerate() {
            out[self.layout.local_indices(flat)[pos]] += p;
        }
        Ok(out)
    }

    /// Largest elementwise difference to another state.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((self.matrix[(i, j)] - other.matrix[(i, j)]).norm());
            }
        }
        worst
    }
}

/// `Tr(op ρ)`.
///
/// The imaginary part is returned as computed; for Hermitian `op` it is at
/// the level of round-off.
pub fn expectation(rho: &DensityOperator, op: &Operator) -> Result<C64> {
    if **rho.layout() != **op.layout() {
        return Err(Error::LayoutMismatch);
    }
    Ok(op
        .matrix()
        .iter()
        .map(|(i, k, v)| v * rho.matrix()[(k, i)])
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom_mode(n_max: usize) -> Arc<SpaceLayout> {
        Arc::new(SpaceLayout::new([("atom", 2), ("mode", n_max + 1)]).unwrap())
    }

    #[test]
    fn annihilation_entries() {
        let a = annihilation(1).unwrap();
        assert_eq!(a.matrix().nnz(), 1);
        assert_eq!(a.matrix().get(0, 1), C64::new(1.0, 0.0));

        let a = annihilation(2).unwrap();
        assert_eq!(a.matrix().get(0, 1), C64::new(1.0, 0.0));
        assert_eq!(a.matrix().get(1, 2), C64::new(2f64.sqrt(), 0.0));
        assert_eq!(a.matrix().nnz(), 2);
    }

    #[test]
    fn number_operator_is_diagonal() {
        let a = annihilation(3).unwrap();
        let n = &a.adjoint() * &a;
        let d = n.to_dense();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { i as f64 } else { 0.0 };
                assert!((d[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_truncation_rejected() {
        assert_eq!(annihilation(0).unwrap_err(), Error::InvalidTruncation);
    }

    #[test]
    fn layout_rejects_duplicates_and_empty() {
        assert!(matches!(
            SpaceLayout::new([("a", 2), ("a", 3)]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            SpaceLayout::new([("a", 0)]),
            Err(Error::EmptySubsystem(_))
        ));
    }

    #[test]
    fn flat_index_round_trip() {
        let l = SpaceLayout::new([("a", 2), ("b", 3), ("c", 4)]).unwrap();
        assert_eq!(l.total_dim(), 24);
        for flat in 0..24 {
            assert_eq!(l.flat_index(&l.local_indices(flat)).unwrap(), flat);
        }
        assert_eq!(l.flat_index(&[1, 0, 0]).unwrap(), 12);
    }

    #[test]
    fn raising_squared_vanishes() {
        let l = Arc::new(SpaceLayout::new([("atom", 2)]).unwrap());
        let sp = transition(&l, "atom", 0, 1).unwrap();
        assert_eq!((&sp * &sp).matrix().nnz(), 0);
    }

    #[test]
    fn pauli_anticommutator_is_identity() {
        let l = atom_mode(2);
        let sp = transition(&l, "atom", 0, 1).unwrap();
        let sm = sp.adjoint();
        let anti = &(&sp * &sm) + &(&sm * &sp);
        assert_eq!(anti, Operator::identity(l));
    }

    #[test]
    fn embedded_transition_dimension() {
        let n_max = 4;
        let sp = transition(&atom_mode(n_max), "atom", 0, 1).unwrap();
        assert_eq!(sp.dim(), 2 * (n_max + 1));
    }

    #[test]
    fn transition_errors() {
        let l = atom_mode(1);
        assert!(matches!(
            transition(&l, "cavity", 0, 1),
            Err(Error::UnknownSubsystem(_))
        ));
        assert!(matches!(
            transition(&l, "atom", 0, 2),
            Err(Error::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn embed_identity_and_mismatch() {
        let l = atom_mode(2);
        let id = Operator::local("mode", CsrMatrix::identity(3)).unwrap();
        assert_eq!(embed(&id, &l, "mode").unwrap(), Operator::identity(l.clone()));
        let a = annihilation(3).unwrap();
        assert!(matches!(
            embed(&a, &l, "mode"),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn disjoint_embeddings_commute() {
        let l = atom_mode(3);
        let a = embed(&annihilation(3).unwrap(), &l, "mode").unwrap();
        let s = transition(&l, "atom", 1, 0).unwrap();
        assert_eq!(a.commutator(&s).unwrap().matrix().max_abs(), 0.0);
        assert_eq!(a.adjoint().commutator(&s).unwrap().matrix().max_abs(), 0.0);
    }

    #[test]
    fn expectation_basics() {
        let l = atom_mode(2);
        let mixed = DensityOperator::maximally_mixed(l.clone());
        let id = Operator::identity(l.clone());
        assert!((expectation(&mixed, &id).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-14);

        let a = embed(&annihilation(2).unwrap(), &l, "mode").unwrap();
        let vac = DensityOperator::product_state(l.clone(), &[0, 0]).unwrap();
        assert_eq!(expectation(&vac, &(&a.adjoint() * &a)).unwrap(), C64::new(0.0, 0.0));

        let atom = Arc::new(SpaceLayout::new([("atom", 2)]).unwrap());
        let sp = transition(&atom, "atom", 0, 1).unwrap();
        let mixed = DensityOperator::maximally_mixed(atom);
        let pe = expectation(&mixed, &(&sp * &sp.adjoint())).unwrap();
        assert!((pe.re - 0.5).abs() < 1e-15 && pe.im == 0.0);
    }

    #[test]
    fn expectation_layout_mismatch() {
        let rho = DensityOperator::maximally_mixed(atom_mode(1));
        let other = Operator::identity(atom_mode(2));
        assert_eq!(expectation(&rho, &other).unwrap_err(), Error::LayoutMismatch);
    }

    #[test]
    fn density_operator_validation() {
        let l = Arc::new(SpaceLayout::new([("q", 2)]).unwrap());
        let m = Mat::<C64>::from_fn(2, 2, |i, j| if i == j { C64::new(0.7, 0.0) } else { C64::new(0.0, 0.0) });
        assert!(matches!(
            DensityOperator::new(l.clone(), m),
            Err(Error::TraceNotUnity(_))
        ));
        let m = Mat::<C64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(1.5, 0.0),
            (1, 1) => C64::new(-0.5, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        assert!(matches!(
            DensityOperator::new(l.clone(), m),
            Err(Error::NotPositive(_))
        ));
        let m = Mat::<C64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => C64::new(0.5, 0.0),
            (0, 1) => C64::new(0.1, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        assert!(matches!(
            DensityOperator::new(l, m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn reduced_populations_sum_over_other_factors() {
        let l = atom_mode(1);
        let rho = DensityOperator::product_state(l, &[1, 1]).unwrap();
        assert_eq!(rho.reduced_populations("atom").unwrap(), vec![0.0, 1.0]);
        assert_eq!(rho.reduced_populations("mode").unwrap(), vec![0.0, 1.0]);
    }
}
