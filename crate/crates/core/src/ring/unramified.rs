use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::fp::{find_defining_polynomial, is_irreducible_mod_p};
use super::traits::{PadicRing, Ring};
use super::{ModulusContext, Valuation};
use crate::{Error, Result};

/// `Z_p^(m)` modulo `p^M`, as `(Z/p^M)[w]/(h(w))` with `h` monic and
/// irreducible mod `p`.
///
/// Elements are coordinate vectors `[a_0, …, a_{m-1}]` in the basis
/// `1, w, …, w^{m-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedRing {
    base: ModulusContext,
    // h(w) = w^m + Σ c_i w^i, stored as [c_0, …, c_{m-1}]
    defining: Vec<u64>,
}

impl UnramifiedRing {
    /// Uses the smallest irreducible defining polynomial of degree `m`.
    pub fn new(p: u64, m: usize, precision: u32) -> Result<Self> {
        let base = ModulusContext::new(p, precision)?;
        if m == 0 {
            return Err(Error::InvalidParams("extension degree must be positive".into()));
        }
        let defining = find_defining_polynomial(p, m);
        Ok(UnramifiedRing { base, defining })
    }

    /// `h` given low to high without the leading 1.
    pub fn with_defining_polynomial(base: ModulusContext, defining: Vec<u64>) -> Result<Self> {
        let mut h = defining.clone();
        h.push(1);
        if defining.is_empty() || !is_irreducible_mod_p(&h, base.p()) {
            return Err(Error::InvalidParams("defining polynomial is not irreducible mod p".into()));
        }
        let defining = defining.iter().map(|c| c % base.modulus()).collect();
        Ok(UnramifiedRing { base, defining })
    }

    pub fn base(&self) -> &ModulusContext {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.defining.len()
    }

    pub fn defining_polynomial(&self) -> &[u64] {
        &self.defining
    }

    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = a % self.base.modulus();
        v
    }

    pub fn generator(&self) -> Vec<u64> {
        let mut v = self.embed(0);
        if self.degree() > 1 {
            v[1] = 1;
        } else {
            v[0] = self.base.neg(&self.defining[0]);
        }
        v
    }

    /// Reduction to `F_{p^m}` in the same basis.
    pub fn residue(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|c| c % self.base.p()).collect()
    }

    /// Lift of `u ∈ F_{p^m}` fixed by `x ↦ x^{p^m}`.
    pub fn teichmuller_lift(&self, u: &[u64]) -> Vec<u64> {
        assert_eq!(u.len(), self.degree());
        let mut a: Vec<u64> = u.iter().map(|c| c % self.base.p()).collect();
        loop {
            let next = self.frobenius(&a, self.degree() as u32);
            if next == a {
                return a;
            }
            a = next;
        }
    }

    // w^m ↦ -Σ c_i w^i applied from the top down
    fn reduce(&self, mut prod: Vec<u64>) -> Vec<u64> {
        let m = self.degree();
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for (i, hi) in self.defining.iter().enumerate() {
                let t = self.base.mul(&c, hi);
                prod[top - m + i] = self.base.sub(&prod[top - m + i], &t);
            }
        }
        prod.truncate(m);
        prod.resize(m, 0);
        prod
    }

    fn residue_inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        // in F_{p^m}: a^{-1} = a^{p^m - 2}
        let p = self.base.p();
        let field = UnramifiedRing { base: ModulusContext::new(p, 1).ok()?, defining: self.residue(&self.defining) };
        let r = field.residue(a);
        if r.iter().all(|c| *c == 0) {
            return None;
        }
        let order = p.checked_pow(self.degree() as u32)?;
        Some(field.pow(&r, order - 2))
    }
}

impl Ring for UnramifiedRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn from_i64(&self, v: i64) -> Vec<u64> {
        self.embed(self.base.from_i64(v))
    }
    fn from_bigint(&self, v: &BigInt) -> Vec<u64> {
        self.embed(self.base.from_bigint(v))
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let m = self.degree();
        if m == 1 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                prod[i + j] = self.base.add(&prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|c| *c == 0)
    }
    fn is_unit(&self, a: &Vec<u64>) -> bool {
        a.iter().any(|c| c % self.base.p() != 0)
    }
    fn try_inverse(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        // Newton iteration x ← x(2 − a x) from the residue inverse
        let mut x = self.residue_inverse(a)?;
        let two = self.from_i64(2);
        let mut correct = 1;
        while correct < self.base.precision() {
            let ax = self.mul(a, &x);
            x = self.mul(&x, &self.sub(&two, &ax));
            correct *= 2;
        }
        Some(x)
    }
    fn poly_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let m = self.degree();
        let split = |v: &[Vec<u64>], k: usize| -> Vec<u64> { v.iter().map(|e| e[k]).collect() };
        let pa: Vec<Vec<u64>> = (0..m).map(|k| split(a, k)).collect();
        let pb: Vec<Vec<u64>> = (0..m).map(|k| split(b, k)).collect();
        let len = a.len() + b.len() - 1;
        // coordinate products land in degrees 0..2m-1 of w, reduced per slot afterwards
        let mut wide = vec![vec![0u64; len]; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                let prod = self.base.poly_mul(&pa[i], &pb[j]);
                for (slot, v) in wide[i + j].iter_mut().zip(prod) {
                    *slot = self.base.add(slot, &v);
                }
            }
        }
        (0..len)
            .map(|t| self.reduce(wide.iter().map(|row| row[t]).collect()))
            .collect()
    }
}

impl PadicRing for UnramifiedRing {
    fn prime(&self) -> u64 {
        self.base.p()
    }
    fn precision(&self) -> u32 {
        self.base.precision()
    }
    fn valuation(&self, a: &Vec<u64>) -> Valuation {
        a.iter()
            .map(|c| self.base.valuation(c))
            .fold(Valuation::saturated(self.base.precision()), Valuation::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_residues(ring: &UnramifiedRing) -> Vec<Vec<u64>> {
        let p = ring.prime();
        let m = ring.degree();
        let total = p.pow(m as u32);
        (0..total)
            .map(|mut idx| {
                (0..m)
                    .map(|_| {
                        let c = idx % p;
                        idx /= p;
                        c
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn teichmuller_lifts_are_fixed_exhaustively() {
        for (p, m, prec) in [(7, 1, 4), (7, 2, 3), (13, 2, 3), (5, 3, 3), (3, 4, 4), (47, 2, 2)] {
            let ring = UnramifiedRing::new(p, m, prec).unwrap();
            for u in all_residues(&ring) {
                let lift = ring.teichmuller_lift(&u);
                assert_eq!(ring.residue(&lift), u);
                let power = ring.pow(&lift, p.pow(m as u32));
                assert_eq!(power, lift, "p={p} m={m} u={u:?}");
            }
        }
    }

    #[test]
    fn frobenius_of_lift_is_lift_of_power() {
        let ring = UnramifiedRing::new(7, 2, 4).unwrap();
        let u = ring.generator();
        let lift = ring.teichmuller_lift(&u);
        let field = UnramifiedRing::new(7, 2, 1).unwrap();
        let u7 = field.pow(&u, 7);
        assert_eq!(ring.frobenius(&lift, 1), ring.teichmuller_lift(&u7));
        assert_eq!(ring.frobenius(&lift, 0), lift);
        assert_eq!(ring.frobenius(&lift, 2), lift);
    }

    #[test]
    fn degree_one_matches_integers() {
        let ring = UnramifiedRing::new(7, 1, 2).unwrap();
        assert_eq!(ring.teichmuller_lift(&[3]), vec![31]);
        assert_eq!(ring.frobenius(&vec![31], 1), vec![31]);
    }

    #[test]
    fn inverses_and_units() {
        let ring = UnramifiedRing::new(13, 2, 4).unwrap();
        assert_eq!(ring.defining_polynomial(), &[2, 0]);
        for u in all_residues(&ring).into_iter().skip(1).step_by(7) {
            let x: Vec<u64> = u.iter().map(|c| c + 13 * 5).collect();
            let inv = ring.try_inverse(&x).unwrap();
            assert_eq!(ring.mul(&x, &inv), ring.one());
        }
        assert!(ring.try_inverse(&vec![13, 26]).is_none());
        assert_eq!(ring.valuation(&vec![13, 169]), Valuation::exact(1));
        assert_eq!(ring.valuation(&ring.zero()), Valuation::saturated(4));
    }

    #[test]
    fn rejects_reducible_defining_polynomial() {
        let base = ModulusContext::new(13, 2).unwrap();
        assert!(UnramifiedRing::with_defining_polynomial(base.clone(), vec![1, 0]).is_err());
        assert!(UnramifiedRing::with_defining_polynomial(base, vec![2, 0]).is_ok());
    }

    #[test]
    fn componentwise_polynomial_product() {
        let ring = UnramifiedRing::new(13, 2, 3).unwrap();
        let a: Vec<Vec<u64>> = (0..70u64).map(|i| vec![(i * 31 + 1) % 2197, (i * 17) % 2197]).collect();
        let b: Vec<Vec<u64>> = (0..55u64).map(|i| vec![(i * 5) % 2197, (i * i + 3) % 2197]).collect();
        let fast = ring.poly_mul(&a, &b);
        let slow = super::super::traits::schoolbook(&ring, &a, &b);
        assert_eq!(fast, slow);
    }
}
