use alloc::vec::Vec;

use super::KzParams;
use crate::ring::{Matrix, Ring};
use crate::{Error, Result};

/// The matrices `Ω_{ij}` of the KZ system with `n = gq + 1` points and the
/// Gaudin Hamiltonians `H_i(z) = (1/q)·Σ_{j≠i} Ω_{ij}/(z_i − z_j)` built from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaudinData {
    pub n: usize,
    pub q: u64,
}

impl GaudinData {
    pub fn new(params: &KzParams) -> Self {
        GaudinData { n: params.n, q: params.q }
    }

    /// `Ω_{ij}` (0-based, `i ≠ j`): `−1` at `(i,i)` and `(j,j)`, `+1` at `(i,j)` and `(j,i)`.
    pub fn omega(&self, i: usize, j: usize) -> Matrix<i64> {
        assert!(i != j && i < self.n && j < self.n, "omega needs two distinct indices");
        let mut m = Matrix::from_fn(self.n, self.n, |_, _| 0i64);
        m.set(i, i, -1);
        m.set(j, j, -1);
        m.set(i, j, 1);
        m.set(j, i, 1);
        m
    }

    /// `H_i(a)` over `ring`; fails with `NotAUnit` when `q` or some `a_i − a_j`
    /// is not invertible.
    pub fn hamiltonian_at<R: Ring>(&self, ring: &R, a: &[R::Elem], i: usize) -> Result<Matrix<R::Elem>> {
        let q_inv = ring.try_inverse(&ring.from_i64(self.q as i64)).ok_or(Error::NotAUnit)?;
        let mut h = Matrix::zeros(ring, self.n, self.n);
        for j in (0..self.n).filter(|&j| j != i) {
            let c = ring.try_inverse(&ring.sub(&a[i], &a[j])).ok_or(Error::NotAUnit)?;
            let c = ring.mul(&c, &q_inv);
            let omega = self.omega(i, j).map(|x| ring.mul(&ring.from_i64(*x), &c));
            h = h.add(ring, &omega);
        }
        Ok(h)
    }

    /// All `H_i(a)`.
    pub fn hamiltonians_at<R: Ring>(&self, ring: &R, a: &[R::Elem]) -> Result<Vec<Matrix<R::Elem>>> {
        (0..self.n).map(|i| self.hamiltonian_at(ring, a, i)).collect()
    }
}
