#![allow(dead_code)]

use std::sync::Arc;

use faer::Mat;
use mollow_core::hilbert::{CsrMatrix, Operator, SpaceLayout};
use mollow_core::lindblad::{build_liouvillian, CollapseChannel, Liouvillian};
use mollow_core::C64;
use proptest::prelude::*;

/// A random open system small enough for dense brute force.
#[derive(Clone, Debug)]
pub struct RandomSystem {
    pub dims: Vec<usize>,
    pub h: Mat<C64>,
    pub channels: Vec<(f64, Mat<C64>)>,
    pub rho: Mat<C64>,
}

impl RandomSystem {
    pub fn n(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn layout(&self) -> Arc<SpaceLayout> {
        let labels = ["a", "b", "c"];
        Arc::new(SpaceLayout::new(labels.iter().zip(&self.dims).map(|(l, d)| (*l, *d))).unwrap())
    }

    pub fn operator(&self, m: &Mat<C64>) -> Operator {
        Operator::new(self.layout(), CsrMatrix::from_dense(m)).unwrap()
    }

    pub fn liouvillian(&self) -> Liouvillian {
        let channels = self
            .channels
            .iter()
            .map(|(r, o)| CollapseChannel::new(self.operator(o), *r).unwrap())
            .collect();
        build_liouvillian(self.operator(&self.h), channels).unwrap()
    }
}

fn matrix(n: usize) -> impl Strategy<Value = Mat<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| Mat::from_fn(n, n, |i, j| C64::new(v[i + n * j].0, v[i + n * j].1)))
}

fn hermitian(n: usize) -> impl Strategy<Value = Mat<C64>> {
    matrix(n).prop_map(move |a| Mat::from_fn(n, n, |i, j| a[(i, j)] + a[(j, i)].conj()))
}

/// Positive, unit-trace `B B† / Tr(B B†)`.
fn state(n: usize) -> impl Strategy<Value = Mat<C64>> {
    matrix(n).prop_map(move |b| {
        let p = &b * b.adjoint();
        let tr: f64 = (0..n).map(|i| p[(i, i)].re).sum();
        Mat::from_fn(n, n, |i, j| {
            let v = p[(i, j)] / tr;
            if i == j {
                C64::new(v.re, 0.0)
            } else {
                v
            }
        })
    })
}

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![
        (2usize..=8).prop_map(|d| vec![d]),
        (2usize..=4).prop_map(|d| vec![2, d]),
        Just(vec![2, 2, 2]),
    ]
}

pub fn random_system() -> impl Strategy<Value = RandomSystem> {
    dims().prop_flat_map(|dims| {
        let n: usize = dims.iter().product();
        (
            Just(dims),
            hermitian(n),
            prop::collection::vec((0.5f64..2.0, matrix(n)), 1..=3),
            state(n),
        )
            .prop_map(|(dims, h, channels, rho)| RandomSystem {
                dims,
                h,
                channels,
                rho,
            })
    })
}

pub fn max_abs_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
    mollow_oracle::max_abs_diff(a, b)
}

pub fn max_abs(a: &Mat<C64>) -> f64 {
    mollow_oracle::max_abs_diff(a, &Mat::zeros(a.nrows(), a.ncols()))
}
