use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::kronecker;
use super::traits::{PadicRing, Ring};
use crate::{Error, Result};

/// Trial division; the primes in play are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A p-adic valuation truncated at the working precision.
///
/// `saturated` means the true valuation is at least `value` (this is how
/// zero is reported).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Valuation {
    pub value: u32,
    pub saturated: bool,
}

impl Valuation {
    pub const fn exact(value: u32) -> Self {
        Valuation { value, saturated: false }
    }

    pub const fn saturated(precision: u32) -> Self {
        Valuation { value: precision, saturated: true }
    }

    pub fn at_least(&self, k: u32) -> bool {
        self.value >= k
    }

    /// Valuation of a sum bound: the smaller value wins, ties keep exactness.
    pub fn min(self, other: Valuation) -> Valuation {
        match self.value.cmp(&other.value) {
            core::cmp::Ordering::Less => self,
            core::cmp::Ordering::Greater => other,
            core::cmp::Ordering::Equal => Valuation {
                value: self.value,
                saturated: self.saturated && other.saturated,
            },
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.saturated {
            write!(f, ">={}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// `min(cap, v_p(a))` for an exact integer.
pub fn valuation_of_integer(p: u64, a: &BigInt, cap: u32) -> Valuation {
    if a.is_zero() {
        return Valuation::saturated(cap);
    }
    let pb = BigInt::from(p);
    let mut x = a.clone();
    let mut v = 0;
    while v < cap {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::exact(v);
        }
        x = q;
        v += 1;
    }
    Valuation::saturated(cap)
}

/// `a^{-1} mod m` by the extended Euclidean algorithm.
pub fn invert_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// The ring `Z/p^M` with residues in `[0, p^M)`.
///
/// Only moduli below `2^62` are supported so that products fit in `u128`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusContext {
    p: u64,
    precision: u32,
    modulus: u64,
}

impl ModulusContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let mut modulus: u64 = 1;
        for _ in 0..precision {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m < 1 << 62)
                .ok_or(Error::ModulusTooLarge { p, precision })?;
        }
        Ok(ModulusContext { p, precision, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        ModulusContext::new(self.p, precision)
    }

    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }

    /// Inverse modulo `p^M`; fails exactly when `p | a`.
    pub fn invert(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::NotAUnit);
        }
        invert_mod(a, self.modulus).ok_or(Error::NotAUnit)
    }

    /// Teichmüller lift of `u ∈ F_p` by iterating `a ↦ a^p` to its fixed point.
    pub fn teichmuller(&self, u: u64) -> u64 {
        let mut a = u % self.p;
        loop {
            let next = self.pow(&a, self.p);
            if next == a {
                return a;
            }
            a = next;
        }
    }

    /// Balanced representative in `(-p^M/2, p^M/2]`.
    pub fn balanced(&self, a: u64) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }
}

impl Ring for ModulusContext {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        if let Some(x) = v.to_i128() {
            return self.reduce_i128(x);
        }
        let r = v.mod_floor(&BigInt::from(self.modulus));
        match r.to_u64_digits() {
            (Sign::NoSign, _) => 0,
            (_, d) => d[0],
        }
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn try_inverse(&self, a: &u64) -> Option<u64> {
        self.invert(*a).ok()
    }
    fn is_unit(&self, a: &u64) -> bool {
        a % self.p != 0
    }
    fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        kronecker::mul_mod(a, b, self.modulus)
    }
}

impl PadicRing for ModulusContext {
    fn prime(&self) -> u64 {
        self.p
    }
    fn precision(&self) -> u32 {
        self.precision
    }
    fn valuation(&self, a: &u64) -> Valuation {
        if *a == 0 {
            return Valuation::saturated(self.precision);
        }
        let mut x = *a;
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        Valuation::exact(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<u64> = (0..40).filter(|n| is_prime(*n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(ModulusContext::new(4, 2), Err(Error::NotPrime(4)));
        assert_eq!(ModulusContext::new(2, 2), Err(Error::EvenPrime));
        assert_eq!(ModulusContext::new(7, 0), Err(Error::ZeroPrecision));
        assert!(matches!(ModulusContext::new(7, 40), Err(Error::ModulusTooLarge { .. })));
    }

    #[test]
    fn valuations() {
        let ctx = ModulusContext::new(7, 3).unwrap();
        assert_eq!(ctx.valuation(&0), Valuation::saturated(3));
        assert_eq!(ctx.valuation(&49), Valuation::exact(2));
        let ctx = ModulusContext::new(7, 5).unwrap();
        assert_eq!(ctx.valuation(&170), Valuation::exact(0));
        assert_eq!(valuation_of_integer(7, &BigInt::from(-203), 5), Valuation::exact(1));
        assert_eq!(valuation_of_integer(7, &BigInt::from(0), 5), Valuation::saturated(5));
        assert_eq!(valuation_of_integer(7, &BigInt::from(7i64.pow(6)), 5), Valuation::saturated(5));
    }

    #[test]
    fn inverses() {
        let ctx = ModulusContext::new(7, 2).unwrap();
        assert_eq!(ctx.invert(1), Ok(1));
        assert_eq!(ctx.invert(2), Ok(25));
        assert_eq!(ctx.invert(7), Err(Error::NotAUnit));
    }

    #[test]
    fn teichmuller_lifts() {
        let ctx = ModulusContext::new(7, 2).unwrap();
        assert_eq!(ctx.teichmuller(0), 0);
        assert_eq!(ctx.teichmuller(1), 1);
        assert_eq!(ctx.teichmuller(3), 31);
        assert_eq!(ModulusContext::new(7, 1).unwrap().teichmuller(3), 3);
    }

    #[test]
    fn large_bigint_reduction() {
        let ctx = ModulusContext::new(13, 5).unwrap();
        let big = BigInt::from(13u64).pow(40) * 5 + 11;
        assert_eq!(ctx.from_bigint(&big), 11);
        assert_eq!(ctx.from_bigint(&-big), ctx.modulus() - 11);
    }
}
