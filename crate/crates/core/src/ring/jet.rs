use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::traits::{PadicRing, Ring};
use super::Valuation;

/// Coefficients of a truncated jet, indexed like [`JetRing::monomials`].
pub type JetElem<E> = Vec<E>;

/// Truncated jets `R[ε_1, ε_2]/I` for a monomial ideal `I`.
///
/// Evaluating a polynomial at `a + ε·e_v` and reading the `ε` coefficient
/// gives `∂_v F(a)`; the supported shapes cover first and second
/// derivatives.
#[derive(Clone, Debug)]
pub struct JetRing<R> {
    base: R,
    monomials: Vec<[u8; 2]>,
    // table[i * len + j] = index of monomial_i * monomial_j, if it survives
    table: Vec<Option<usize>>,
}

impl<R: Ring> JetRing<R> {
    fn with_monomials(base: R, monomials: Vec<[u8; 2]>) -> Self {
        let len = monomials.len();
        let mut table = vec![None; len * len];
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                let prod = [a[0] + b[0], a[1] + b[1]];
                table[i * len + j] = monomials.iter().position(|m| *m == prod);
            }
        }
        JetRing { base, monomials, table }
    }

    /// `R[ε]/(ε²)`.
    pub fn first_order(base: R) -> Self {
        Self::with_monomials(base, vec![[0, 0], [1, 0]])
    }

    /// `R[ε]/(ε³)`.
    pub fn second_order(base: R) -> Self {
        Self::with_monomials(base, vec![[0, 0], [1, 0], [2, 0]])
    }

    /// `R[ε_1, ε_2]/(ε_1², ε_2²)`.
    pub fn mixed(base: R) -> Self {
        Self::with_monomials(base, vec![[0, 0], [1, 0], [0, 1], [1, 1]])
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn monomials(&self) -> &[[u8; 2]] {
        &self.monomials
    }

    /// Constant jet.
    pub fn constant(&self, c: R::Elem) -> JetElem<R::Elem> {
        let mut v = vec![self.base.zero(); self.monomials.len()];
        v[0] = c;
        v
    }

    /// `c + ε_k` for the nilpotent with index `k ∈ {0, 1}`.
    pub fn variable(&self, c: R::Elem, k: usize) -> JetElem<R::Elem> {
        let mut v = self.constant(c);
        let mut mono = [0u8; 2];
        mono[k] = 1;
        let idx = self.index_of(mono).expect("nilpotent present in this jet ring");
        v[idx] = self.base.one();
        v
    }

    pub fn index_of(&self, mono: [u8; 2]) -> Option<usize> {
        self.monomials.iter().position(|m| *m == mono)
    }

    /// Coefficient of `ε_1^a ε_2^b`.
    pub fn coefficient(&self, x: &JetElem<R::Elem>, mono: [u8; 2]) -> R::Elem {
        self.index_of(mono).map_or_else(|| self.base.zero(), |i| x[i].clone())
    }
}

impl<R: Ring> Ring for JetRing<R> {
    type Elem = JetElem<R::Elem>;

    fn zero(&self) -> Self::Elem {
        self.constant(self.base.zero())
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn from_i64(&self, v: i64) -> Self::Elem {
        self.constant(self.base.from_i64(v))
    }
    fn from_bigint(&self, v: &BigInt) -> Self::Elem {
        self.constant(self.base.from_bigint(v))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let len = self.monomials.len();
        let mut out = self.zero();
        for i in 0..len {
            if self.base.is_zero(&a[i]) {
                continue;
            }
            for j in 0..len {
                if let Some(k) = self.table[i * len + j] {
                    let t = self.base.mul(&a[i], &b[j]);
                    out[k] = self.base.add(&out[k], &t);
                }
            }
        }
        out
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.base.is_unit(&a[0])
    }
    fn try_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        // (c + N)^{-1} = c^{-1} Σ (−N c^{-1})^i, and N^3 = 0 in every shape here
        let c_inv = self.base.try_inverse(&a[0])?;
        let u = self.constant(c_inv);
        let y = self.sub(&self.one(), &self.mul(a, &u));
        let y2 = self.mul(&y, &y);
        let series = self.add(&self.add(&self.one(), &y), &y2);
        Some(self.mul(&u, &series))
    }
    fn poly_mul(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let len = self.monomials.len();
        let split = |v: &[Self::Elem], k: usize| -> Vec<R::Elem> { v.iter().map(|e| e[k].clone()).collect() };
        let pa: Vec<Vec<R::Elem>> = (0..len).map(|k| split(a, k)).collect();
        let pb: Vec<Vec<R::Elem>> = (0..len).map(|k| split(b, k)).collect();
        let out_len = a.len() + b.len() - 1;
        let mut out = vec![self.zero(); out_len];
        for i in 0..len {
            if pa[i].iter().all(|x| self.base.is_zero(x)) {
                continue;
            }
            for j in 0..len {
                let Some(k) = self.table[i * len + j] else { continue };
                let prod = self.base.poly_mul(&pa[i], &pb[j]);
                for (slot, v) in out.iter_mut().zip(prod) {
                    slot[k] = self.base.add(&slot[k], &v);
                }
            }
        }
        out
    }
}

impl<R: PadicRing> PadicRing for JetRing<R> {
    fn prime(&self) -> u64 {
        self.base.prime()
    }
    fn precision(&self) -> u32 {
        self.base.precision()
    }
    fn valuation(&self, a: &Self::Elem) -> Valuation {
        a.iter()
            .map(|x| self.base.valuation(x))
            .fold(Valuation::saturated(self.base.precision()), Valuation::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ModulusContext;

    #[test]
    fn first_derivative_of_power() {
        let ctx = ModulusContext::new(7, 4).unwrap();
        let jets = JetRing::first_order(ctx.clone());
        // d/dz z^5 at z=3 is 5·3^4 = 405
        let x = jets.variable(3, 0);
        let y = jets.pow(&x, 5);
        assert_eq!(y[0], 243);
        assert_eq!(y[1], 405);
    }

    #[test]
    fn second_derivative_reads_twice_the_square_coefficient() {
        let ctx = ModulusContext::new(7, 4).unwrap();
        let jets = JetRing::second_order(ctx.clone());
        let x = jets.variable(2, 0);
        let y = jets.pow(&x, 4);
        // f'' = 12 z^2 = 48 at z=2
        assert_eq!(ctx.mul(&2, &jets.coefficient(&y, [2, 0])), 48);
    }

    #[test]
    fn mixed_partials() {
        let ctx = ModulusContext::new(7, 4).unwrap();
        let jets = JetRing::mixed(ctx.clone());
        let x = jets.variable(2, 0);
        let y = jets.variable(5, 1);
        // ∂x∂y (x^3 y^2) = 6 x^2 y = 120
        let f = jets.mul(&jets.pow(&x, 3), &jets.pow(&y, 2));
        assert_eq!(jets.coefficient(&f, [1, 1]), 120);
    }

    #[test]
    fn inverse_of_jet() {
        let ctx = ModulusContext::new(7, 3).unwrap();
        for jets in [JetRing::first_order(ctx.clone()), JetRing::second_order(ctx.clone()), JetRing::mixed(ctx.clone())] {
            let a: Vec<u64> = (0..jets.monomials().len() as u64).map(|i| 3 + 10 * i).collect();
            let inv = jets.try_inverse(&a).unwrap();
            assert_eq!(jets.mul(&a, &inv), jets.one());
            let mut non_unit = a.clone();
            non_unit[0] = 14;
            assert!(jets.try_inverse(&non_unit).is_none());
        }
    }

    #[test]
    fn polynomial_product_matches_schoolbook() {
        let ctx = ModulusContext::new(13, 3).unwrap();
        let jets = JetRing::mixed(ctx);
        let a: Vec<Vec<u64>> = (0..60u64).map(|i| vec![i, i * 3 % 2197, 7, i * i % 2197]).collect();
        let b: Vec<Vec<u64>> = (0..50u64).map(|i| vec![i + 1, 2, i * 5 % 2197, 11]).collect();
        assert_eq!(jets.poly_mul(&a, &b), crate::ring::traits::schoolbook(&jets, &a, &b));
    }
}
