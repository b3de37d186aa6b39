use alloc::vec::Vec;

use super::traits::Ring;

/// A Laurent polynomial in one variable `t` over a ring: `Σ coeffs[i]·t^{low+i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly<E> {
    pub low: i64,
    pub coeffs: Vec<E>,
}

impl<E: Clone> TPoly<E> {
    pub fn zero() -> Self {
        TPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn constant<R: Ring<Elem = E>>(ring: &R, c: E) -> Self {
        TPoly { low: 0, coeffs: alloc::vec![c] }.trimmed(ring)
    }

    pub fn one<R: Ring<Elem = E>>(ring: &R) -> Self {
        Self::constant(ring, ring.one())
    }

    /// `c·t^k`
    pub fn monomial<R: Ring<Elem = E>>(ring: &R, c: E, k: i64) -> Self {
        TPoly { low: k, coeffs: alloc::vec![c] }.trimmed(ring)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent present (`None` for zero).
    pub fn high(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff<R: Ring<Elem = E>>(&self, ring: &R, k: i64) -> E {
        let idx = k - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            ring.zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    fn trimmed<R: Ring<Elem = E>>(mut self, ring: &R) -> Self {
        while self.coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| ring.is_zero(c)).count();
        if lead == self.coeffs.len() {
            return TPoly::zero();
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        self
    }

    pub fn from_coeffs<R: Ring<Elem = E>>(ring: &R, low: i64, coeffs: Vec<E>) -> Self {
        TPoly { low, coeffs }.trimmed(ring)
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.combine(ring, other, |a, b| ring.add(a, b), |b| b.clone())
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.combine(ring, other, |a, b| ring.sub(a, b), |b| ring.neg(b))
    }

    fn combine<R: Ring<Elem = E>>(&self, ring: &R, other: &Self, op: impl Fn(&E, &E) -> E, only_b: impl Fn(&E) -> E) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return TPoly { low: other.low, coeffs: other.coeffs.iter().map(only_b).collect() };
        }
        let low = self.low.min(other.low);
        let high = self.high().unwrap().max(other.high().unwrap());
        let coeffs = (low..=high).map(|k| op(&self.coeff(ring, k), &other.coeff(ring, k))).collect();
        TPoly { low, coeffs }.trimmed(ring)
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        TPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| ring.mul(c, x)).collect() }.trimmed(ring)
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        TPoly { low: self.low + other.low, coeffs: ring.poly_mul(&self.coeffs, &other.coeffs) }.trimmed(ring)
    }

    pub fn pow<R: Ring<Elem = E>>(&self, ring: &R, mut e: u64) -> Self {
        let mut acc = TPoly::one(ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    /// Coefficient of `t^k` in `self·other` without forming the product.
    pub fn product_coeff<R: Ring<Elem = E>>(&self, ring: &R, other: &Self, k: i64) -> E {
        let mut acc = ring.zero();
        for (i, b) in other.coeffs.iter().enumerate() {
            let j = k - other.low - i as i64;
            let a = self.coeff(ring, j);
            if !ring.is_zero(&a) {
                acc = ring.add(&acc, &ring.mul(&a, b));
            }
        }
        acc
    }

    /// `t ↦ t^k`.
    pub fn stretch<R: Ring<Elem = E>>(&self, ring: &R, k: u64) -> Self {
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let k = k as usize;
        let mut coeffs = Vec::with_capacity((self.coeffs.len() - 1) * k + 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.extend(core::iter::repeat_with(|| ring.zero()).take(k - 1));
            }
            coeffs.push(c.clone());
        }
        TPoly { low: self.low * k as i64, coeffs }
    }

    pub fn map<F: Clone, R: Ring<Elem = F>>(&self, ring: &R, f: impl FnMut(&E) -> F) -> TPoly<F> {
        TPoly { low: self.low, coeffs: self.coeffs.iter().map(f).collect() }.trimmed(ring)
    }
}
