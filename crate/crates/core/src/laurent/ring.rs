use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use super::{LaurentPoly, VarLayout};
use crate::ring::Ring;

/// Laurent polynomials as a [`Ring`], optionally with coefficients reduced
/// modulo an integer. Lets matrices of polynomials reuse the generic
/// determinant, adjugate and product code.
#[derive(Clone, Debug)]
pub struct PolyRing {
    layout: VarLayout,
    modulus: Option<BigInt>,
}

impl PolyRing {
    pub fn exact(layout: VarLayout) -> Self {
        PolyRing { layout, modulus: None }
    }

    pub fn modular(layout: VarLayout, modulus: BigInt) -> Self {
        PolyRing { layout, modulus: Some(modulus) }
    }

    pub fn layout(&self) -> VarLayout {
        self.layout
    }

    fn finish(&self, f: LaurentPoly) -> LaurentPoly {
        match &self.modulus {
            Some(m) => f.reduce_mod(m),
            None => f,
        }
    }
}

impl Ring for PolyRing {
    type Elem = LaurentPoly;

    fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero(self.layout)
    }
    fn one(&self) -> LaurentPoly {
        self.finish(LaurentPoly::one(self.layout))
    }
    fn from_i64(&self, v: i64) -> LaurentPoly {
        self.finish(LaurentPoly::constant(self.layout, v))
    }
    fn from_bigint(&self, v: &BigInt) -> LaurentPoly {
        self.finish(LaurentPoly::constant(self.layout, v.clone()))
    }
    fn add(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        self.finish(a.add(b).expect("layouts agree inside a PolyRing"))
    }
    fn sub(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        self.finish(a.sub(b).expect("layouts agree inside a PolyRing"))
    }
    fn neg(&self, a: &LaurentPoly) -> LaurentPoly {
        self.finish(a.neg())
    }
    fn mul(&self, a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        match &self.modulus {
            Some(m) => a.mul_mod(b, m),
            None => a.mul(b),
        }
        .expect("layouts agree and exponents stay in range")
    }
    fn is_zero(&self, a: &LaurentPoly) -> bool {
        a.is_zero()
    }
    fn try_inverse(&self, a: &LaurentPoly) -> Option<LaurentPoly> {
        // only ±monomials with unit coefficient over Z
        if a.len() != 1 {
            return None;
        }
        let (e, c) = a.terms().next()?;
        if self.modulus.is_some() || c.abs() != BigInt::from(1) {
            return None;
        }
        let inv: Vec<i32> = e.iter().map(|x| -x).collect();
        Some(LaurentPoly::monomial(self.layout, &inv, c.clone()))
    }
}
