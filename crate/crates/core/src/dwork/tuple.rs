use alloc::format;
use alloc::vec::Vec;

use super::TuplePoly;
use crate::ring::is_prime;
use crate::{Error, Result};

/// A finite set of lattice points in `Z^r`, kept sorted; matrix rows and
/// columns follow this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexSet(Vec<Vec<i64>>);

impl IndexSet {
    pub fn new(mut points: Vec<Vec<i64>>) -> Result<Self> {
        points.sort();
        points.dedup();
        let r = points.first().map_or(0, Vec::len);
        if r == 0 || points.iter().any(|q| q.len() != r) {
            return Err(Error::InvalidTuple("index set points must share a positive dimension".into()));
        }
        Ok(IndexSet(points))
    }

    /// `{1, …, g}` in one dimension.
    pub fn range(g: usize) -> Self {
        IndexSet((1..=g as i64).map(|i| alloc::vec![i]).collect())
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0[0].len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.0.binary_search_by(|q| q.as_slice().cmp(v)).is_ok()
    }
}

/// The data `(e, Δ, Λ)`: exponents `e_1..e_l`, index sets `Δ_0..Δ_l` of a
/// common size `g` and polynomials `Λ_0..Λ_l`.
#[derive(Clone, Debug)]
pub struct DworkTuple<P> {
    p: u64,
    e: Vec<u32>,
    delta: Vec<IndexSet>,
    lambda: Vec<P>,
}

impl<P: TuplePoly> DworkTuple<P> {
    pub fn new(p: u64, e: Vec<u32>, delta: Vec<IndexSet>, lambda: Vec<P>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        let l = e.len();
        if delta.len() != l + 1 || lambda.len() != l + 1 {
            return Err(Error::InvalidTuple(format!(
                "expected {} index sets and polynomials for {} exponents, got {} and {}",
                l + 1,
                l,
                delta.len(),
                lambda.len()
            )));
        }
        if e.contains(&0) {
            return Err(Error::InvalidTuple("exponents e_j must be positive".into()));
        }
        let g = delta[0].len();
        if delta.iter().any(|d| d.len() != g) {
            return Err(Error::InvalidTuple("index sets must all have the same size".into()));
        }
        let layout = lambda[0].layout();
        if lambda.iter().any(|f| f.layout() != layout) {
            return Err(Error::LayoutMismatch);
        }
        if delta.iter().any(|d| d.dim() != layout.r) {
            return Err(Error::InvalidTuple("index set dimension differs from the number of t variables".into()));
        }
        Ok(DworkTuple { p, e, delta, lambda })
    }

    /// The same polynomial repeated, with `e_j = e` and `Δ_j = Δ`.
    pub fn constant(p: u64, e: u32, delta: IndexSet, lambda: P, l: usize) -> Result<Self> {
        Self::new(p, alloc::vec![e; l], alloc::vec![delta; l + 1], alloc::vec![lambda; l + 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of steps `l`.
    pub fn l(&self) -> usize {
        self.e.len()
    }

    pub fn g(&self) -> usize {
        self.delta[0].len()
    }

    pub fn e(&self) -> &[u32] {
        &self.e
    }

    pub fn delta(&self) -> &[IndexSet] {
        &self.delta
    }

    pub fn lambda(&self) -> &[P] {
        &self.lambda
    }

    /// `E_j = e_1 + … + e_j` (so `E_0 = 0`).
    pub fn cumulative(&self, j: usize) -> u32 {
        self.e[..j].iter().sum()
    }

    /// Replace `Λ_j`.
    pub fn with_lambda(&self, j: usize, f: P) -> Result<Self> {
        let mut lambda = self.lambda.clone();
        lambda[j] = f;
        Self::new(self.p, self.e.clone(), self.delta.clone(), lambda)
    }

    /// Keep `Λ_0..Λ_k`.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        Self::new(self.p, self.e[..k].to_vec(), self.delta[..=k].to_vec(), self.lambda[..=k].to_vec())
    }
}
