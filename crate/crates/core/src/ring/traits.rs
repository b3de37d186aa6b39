use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;

use super::Valuation;

/// A commutative ring whose elements are plain values and whose context
/// (modulus, defining polynomial, ...) lives in `self`.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `None` when `a` is not a unit.
    fn try_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.try_inverse(a).is_some()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Product of dense coefficient vectors (index = degree).
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        schoolbook(self, a, b)
    }
}

pub(crate) fn schoolbook<R: Ring + ?Sized>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let prod = ring.mul(x, y);
            out[i + j] = ring.add(&out[i + j], &prod);
        }
    }
    out
}

/// A ring with a p-adic valuation truncated at a working precision.
pub trait PadicRing: Ring {
    fn prime(&self) -> u64;
    fn precision(&self) -> u32;
    fn valuation(&self, a: &Self::Elem) -> Valuation;

    /// `a^(p^k)`. On Teichmüller tuples this is the Frobenius `σ^k`.
    fn frobenius(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..k {
            x = self.pow(&x, self.prime());
        }
        x
    }
}
