//! Sums of products of binary forms `Σ_r c_r ∏_i f_{r,i}(t, z_i)`.
//!
//! Powers such as `Φ_1·Φ_1^{p}·Φ_1^{p^2}` have far too many monomials to
//! expand, but they factor over the `z` variables. Coefficients of `t^c`
//! and valuation scans can then be computed factor by factor.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{Exponent, LatticePolytopeT, LaurentPoly, VarLayout};
use crate::ring::{ModulusContext, Ring, TPoly, Valuation};
use crate::{Error, Result};

/// `Σ_j c_j t^{d−j} z^j`, a homogeneous form of degree `d` in `(t, z)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryForm {
    degree: u64,
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    pub fn new(degree: u64, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        assert!(coeffs.len() as u64 <= degree + 1, "z exponent above the form degree");
        BinaryForm { degree, coeffs }
    }

    pub fn one() -> Self {
        BinaryForm { degree: 0, coeffs: vec![BigInt::one()] }
    }

    /// `a·t + b·z`.
    pub fn linear(a: i64, b: i64) -> Self {
        BinaryForm::new(1, vec![BigInt::from(a), BigInt::from(b)])
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Coefficient of `t^{d−j} z^j`.
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return BinaryForm { degree: self.degree + other.degree, coeffs: Vec::new() };
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        BinaryForm::new(self.degree + other.degree, out)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = BinaryForm::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `(t, z) ↦ (t^{p^k}, z^{p^k})`.
    pub fn sigma(&self, p: u64, k: u32) -> Result<Self> {
        let f = p.checked_pow(k).ok_or(Error::ExponentOverflow)? as usize;
        if f == 1 || self.is_zero() {
            return Ok(BinaryForm { degree: self.degree * f as u64, coeffs: self.coeffs.clone() });
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * f + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j * f] = c.clone();
        }
        Ok(BinaryForm { degree: self.degree * f as u64, coeffs: out })
    }

    /// Smallest and largest `z` exponent with a nonzero coefficient.
    fn z_range(&self) -> Option<(usize, usize)> {
        let lo = self.coeffs.iter().position(|c| !c.is_zero())?;
        Some((lo, self.coeffs.len() - 1))
    }

    fn eval<R: Ring>(&self, ring: &R, z: &R::Elem) -> TPoly<R::Elem> {
        // t^{d−j} z^j, collected by t exponent
        let d = self.degree as usize;
        let mut coeffs = vec![ring.zero(); d + 1];
        let mut zpow = ring.one();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[d - j] = ring.mul(&ring.from_bigint(c), &zpow);
            }
            zpow = ring.mul(&zpow, z);
        }
        TPoly::from_coeffs(ring, 0, coeffs)
    }
}

/// One product `c · ∏_i f_i(t, z_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SepTerm {
    pub coeff: BigInt,
    pub factors: Vec<BinaryForm>,
}

impl SepTerm {
    pub fn total_degree(&self) -> u64 {
        self.factors.iter().map(BinaryForm::degree).sum()
    }

    fn is_symmetric(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] == w[1])
    }
}

/// A polynomial in one `t` and `n` `z` variables written as a sum of
/// separable products. Every term must be homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparableForm {
    n: usize,
    terms: Vec<SepTerm>,
}

impl SeparableForm {
    pub fn zero(n: usize) -> Self {
        SeparableForm { n, terms: Vec::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::product(BigInt::one(), vec![BinaryForm::one(); n])
    }

    pub fn product(coeff: BigInt, factors: Vec<BinaryForm>) -> Self {
        let n = factors.len();
        SeparableForm { n, terms: vec![SepTerm { coeff, factors }] }.simplified()
    }

    /// `∏_i (t − z_i)^{k_i}`.
    pub fn linear_power(exponents: &[u64]) -> Self {
        let base = BinaryForm::linear(1, -1);
        Self::product(BigInt::one(), exponents.iter().map(|k| base.pow(*k)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> VarLayout {
        VarLayout { r: 1, n: self.n }
    }

    pub fn terms(&self) -> &[SepTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    // merge products with identical factor lists
    fn simplified(mut self) -> Self {
        self.terms.retain(|t| !t.coeff.is_zero() && t.factors.iter().all(|f| !f.is_zero()));
        let mut merged: BTreeMap<Vec<BinaryForm>, BigInt> = BTreeMap::new();
        for t in self.terms.drain(..) {
            *merged.entry(t.factors).or_default() += t.coeff;
        }
        self.terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(factors, coeff)| SepTerm { coeff, factors })
            .collect();
        self
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::LayoutMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(SeparableForm { n: self.n, terms }.simplified())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|t| SepTerm { coeff: -&t.coeff, factors: t.factors.clone() }).collect();
        SeparableForm { n: self.n, terms }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let factors = a.factors.iter().zip(&b.factors).map(|(f, g)| f.mul(g)).collect();
                terms.push(SepTerm { coeff: &a.coeff * &b.coeff, factors });
            }
        }
        Ok(SeparableForm { n: self.n, terms }.simplified())
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        if self.terms.len() == 1 {
            let t = &self.terms[0];
            let factors = t.factors.iter().map(|f| f.pow(k)).collect();
            return Ok(Self::product(num_traits::pow(t.coeff.clone(), k as usize), factors));
        }
        let mut acc = Self::one(self.n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Frobenius substitution on all variables.
    pub fn sigma_all(&self, p: u64, k: u32) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(SepTerm { coeff: t.coeff.clone(), factors: t.factors.iter().map(|f| f.sigma(p, k)).collect::<Result<_>>()? }))
            .collect::<Result<_>>()?;
        Ok(SeparableForm { n: self.n, terms }.simplified())
    }

    /// Coefficient of `t^c`, expanded as a polynomial in `z` (its `t`
    /// exponents are zero, as with [`LaurentPoly::coeff_t`]).
    pub fn coeff_t(&self, c: i64) -> Result<LaurentPoly> {
        let layout = self.layout();
        let mut out = LaurentPoly::zero(layout);
        for term in &self.terms {
            let zdeg = term.total_degree() as i64 - c;
            if zdeg < 0 {
                continue;
            }
            let ranges: Vec<(usize, usize)> = term.factors.iter().map(|f| f.z_range().expect("nonzero factors")).collect();
            let mut suffix_lo = vec![0usize; self.n + 1];
            let mut suffix_hi = vec![0usize; self.n + 1];
            for i in (0..self.n).rev() {
                suffix_lo[i] = suffix_lo[i + 1] + ranges[i].0;
                suffix_hi[i] = suffix_hi[i + 1] + ranges[i].1;
            }
            let zdeg = zdeg as usize;
            if zdeg < suffix_lo[0] || zdeg > suffix_hi[0] {
                continue;
            }
            let mut exps = vec![0i32; self.n + 1];
            let mut acc = BTreeMap::new();
            compositions(term, &ranges, &suffix_lo, &suffix_hi, 0, zdeg, term.coeff.clone(), &mut exps, &mut acc);
            for (e, v) in acc {
                out.add_term(e, v);
            }
        }
        Ok(out)
    }

    /// Union of the per-term `t` ranges. Contains the true Newton interval;
    /// equals it when no extreme coefficient cancels between terms.
    pub fn t_interval_bound(&self) -> Result<LatticePolytopeT> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for t in &self.terms {
            let d = t.total_degree() as i64;
            let zmin: usize = t.factors.iter().map(|f| f.z_range().unwrap().0).sum();
            let zmax: usize = t.factors.iter().map(|f| f.z_range().unwrap().1).sum();
            lo = lo.min(d - zmax as i64);
            hi = hi.max(d - zmin as i64);
        }
        if self.terms.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(LatticePolytopeT::Interval { lo, hi })
    }

    /// Exact Newton interval, shrinking the bound past cancelled extremes.
    pub fn newton_polytope_t(&self) -> Result<LatticePolytopeT> {
        let (mut lo, mut hi) = self.t_interval_bound()?.as_interval().unwrap();
        while lo <= hi && self.coeff_t(hi)?.is_zero() {
            hi -= 1;
        }
        while lo <= hi && self.coeff_t(lo)?.is_zero() {
            lo += 1;
        }
        if lo > hi {
            return Err(Error::ZeroPolynomial);
        }
        Ok(LatticePolytopeT::Interval { lo, hi })
    }

    /// Substitute `z`, keeping `t`.
    pub fn eval_z<R: Ring>(&self, ring: &R, z: &[R::Elem]) -> TPoly<R::Elem> {
        assert_eq!(z.len(), self.n);
        let mut out = TPoly::zero();
        for term in &self.terms {
            let mut prod = TPoly::constant(ring, ring.from_bigint(&term.coeff));
            for (f, zi) in term.factors.iter().zip(z) {
                prod = prod.mul(ring, &f.eval(ring, zi));
            }
            out = out.add(ring, &prod);
        }
        out
    }

    /// Full expansion; only sensible for small forms.
    pub fn to_laurent(&self) -> Result<LaurentPoly> {
        let layout = self.layout();
        let mut out = LaurentPoly::zero(layout);
        for term in &self.terms {
            let mut prod = LaurentPoly::constant(layout, term.coeff.clone());
            for (i, f) in term.factors.iter().enumerate() {
                let d = f.degree() as i64;
                let mut g = LaurentPoly::zero(layout);
                for (j, c) in f.coeffs().iter().enumerate() {
                    let mut e = vec![0i32; self.n + 1];
                    e[0] = i32::try_from(d - j as i64).map_err(|_| Error::ExponentOverflow)?;
                    e[1 + i] = j as i32;
                    g.add_term(e.into(), c.clone());
                }
                prod = prod.mul(&g)?;
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }

    /// Number of monomials a full expansion could have.
    pub fn expansion_estimate(&self) -> f64 {
        self.terms.iter().map(|t| t.factors.iter().map(|f| f.coeffs().len() as f64).product::<f64>()).sum()
    }

    /// Smallest coefficient valuation, capped at `cap`, scanning all
    /// monomials modulo `p^cap` without expanding.
    ///
    /// The witness is the first monomial (in scan order) with the minimal
    /// valuation below `cap`.
    pub fn min_valuation(&self, p: u64, cap: u32) -> Result<(Valuation, Option<Exponent>)> {
        let ctx = ModulusContext::new(p, cap)?;
        let mut by_degree: BTreeMap<u64, Vec<&SepTerm>> = BTreeMap::new();
        for t in &self.terms {
            by_degree.entry(t.total_degree()).or_default().push(t);
        }
        let mut best = Valuation::saturated(cap);
        let mut witness = None;
        for (degree, terms) in by_degree {
            let scan = Scan::new(&ctx, &terms, self.n, degree);
            if let Some((v, e)) = scan.run() {
                if v.value < best.value {
                    best = v;
                    witness = Some(e);
                    if v.value == 0 {
                        break;
                    }
                }
            }
        }
        Ok((best, witness))
    }
}

#[allow(clippy::too_many_arguments)]
fn compositions(
    term: &SepTerm,
    ranges: &[(usize, usize)],
    suffix_lo: &[usize],
    suffix_hi: &[usize],
    i: usize,
    remaining: usize,
    acc_coeff: BigInt,
    exps: &mut Vec<i32>,
    out: &mut BTreeMap<Exponent, BigInt>,
) {
    let n = ranges.len();
    if i == n {
        if remaining == 0 {
            *out.entry(exps.clone().into_boxed_slice()).or_default() += acc_coeff;
        }
        return;
    }
    let lo = ranges[i].0.max(remaining.saturating_sub(suffix_hi[i + 1]));
    let hi = ranges[i].1.min(remaining - suffix_lo[i + 1].min(remaining));
    if lo > hi {
        return;
    }
    let coeffs = term.factors[i].coeffs();
    for j in lo..=hi {
        let c = &coeffs[j];
        if c.is_zero() {
            continue;
        }
        exps[1 + i] = j as i32;
        compositions(term, ranges, suffix_lo, suffix_hi, i + 1, remaining - j, &acc_coeff * c, exps, out);
    }
}

struct Scan<'a> {
    ctx: &'a ModulusContext,
    n: usize,
    degree: u64,
    coeffs: Vec<u64>,
    // tables[r][i][j] = coefficient j of factor i of term r, mod p^cap
    tables: Vec<Vec<Vec<u64>>>,
    jmax: usize,
    symmetric: bool,
}

impl<'a> Scan<'a> {
    fn new(ctx: &'a ModulusContext, terms: &[&SepTerm], n: usize, degree: u64) -> Self {
        let coeffs = terms.iter().map(|t| ctx.from_bigint(&t.coeff)).collect();
        let tables: Vec<Vec<Vec<u64>>> = terms
            .iter()
            .map(|t| t.factors.iter().map(|f| f.coeffs().iter().map(|c| ctx.from_bigint(c)).collect()).collect())
            .collect();
        let jmax = tables.iter().flat_map(|t| t.iter().map(|f: &Vec<u64>| f.len())).max().unwrap_or(1) - 1;
        let symmetric = terms.iter().all(|t| t.is_symmetric());
        Scan { ctx, n, degree, coeffs, tables, jmax, symmetric }
    }

    fn lookup(&self, r: usize, i: usize, j: usize) -> u64 {
        self.tables[r][i].get(j).copied().unwrap_or(0)
    }

    fn run(&self) -> Option<(Valuation, Exponent)> {
        let mut state = ScanState {
            exps: vec![0usize; self.n],
            prefix: vec![self.coeffs.clone(); self.n + 1],
            best: None,
        };
        self.descend(0, 0, &mut state);
        state.best
    }

    fn descend(&self, i: usize, start: usize, st: &mut ScanState) {
        if st.best.as_ref().is_some_and(|(v, _)| v.value == 0) {
            return;
        }
        let from = if self.symmetric { start } else { 0 };
        if i + 1 == self.n {
            for j in from..=self.jmax {
                let mut acc = 0u64;
                for r in 0..self.coeffs.len() {
                    let x = st.prefix[i][r];
                    if x != 0 {
                        let t = self.ctx.mul(&x, &self.lookup(r, i, j));
                        acc = self.ctx.add(&acc, &t);
                    }
                }
                if acc != 0 {
                    let v = crate::ring::PadicRing::valuation(self.ctx, &acc);
                    if st.best.as_ref().is_none_or(|(b, _)| v.value < b.value) {
                        st.exps[i] = j;
                        st.best = Some((v, self.exponent(&st.exps)));
                        if v.value == 0 {
                            return;
                        }
                    }
                }
            }
            return;
        }
        for j in from..=self.jmax {
            let mut any = false;
            for r in 0..self.coeffs.len() {
                let x = st.prefix[i][r];
                let y = if x == 0 { 0 } else { self.ctx.mul(&x, &self.lookup(r, i, j)) };
                any |= y != 0;
                st.prefix[i + 1][r] = y;
            }
            if any {
                st.exps[i] = j;
                self.descend(i + 1, j, st);
            }
        }
    }

    fn exponent(&self, zs: &[usize]) -> Exponent {
        let zsum: usize = zs.iter().sum();
        let mut e = vec![(self.degree as i64 - zsum as i64).to_i32().unwrap_or(i32::MAX)];
        e.extend(zs.iter().map(|x| *x as i32));
        e.into_boxed_slice()
    }
}

struct ScanState {
    exps: Vec<usize>,
    prefix: Vec<Vec<u64>>,
    best: Option<(Valuation, Exponent)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(n: usize, k: u64) -> SeparableForm {
        SeparableForm::linear_power(&vec![k; n])
    }

    #[test]
    fn expansion_matches_sparse_arithmetic() {
        let f = phi(3, 2);
        let l = f.layout();
        let lin = (0..3).fold(LaurentPoly::one(l), |acc, i| acc.mul(&LaurentPoly::t(l, 0).sub(&LaurentPoly::z(l, i)).unwrap()).unwrap());
        assert_eq!(f.to_laurent().unwrap(), lin.pow(2).unwrap());
        for c in -1..8 {
            assert_eq!(f.coeff_t(c).unwrap(), lin.pow(2).unwrap().coeff_t(&[c as i32]));
        }
    }

    #[test]
    fn sigma_and_products_agree_with_expansion() {
        let f = phi(2, 2);
        let g = f.sigma_all(3, 1).unwrap().mul(&f).unwrap().sub(&f.pow(4).unwrap()).unwrap();
        let fl = f.to_laurent().unwrap();
        let expected = fl
            .sigma_subst(3, 1, super::super::SigmaScope::All)
            .unwrap()
            .mul(&fl)
            .unwrap()
            .sub(&fl.pow(4).unwrap())
            .unwrap();
        assert_eq!(g.to_laurent().unwrap(), expected);
        let (v, _) = g.min_valuation(3, 4).unwrap();
        assert_eq!(v, expected.min_valuation(3, 4).0);
    }

    #[test]
    fn identical_terms_cancel_exactly() {
        let f = phi(3, 2);
        assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn non_symmetric_scan_finds_witness() {
        let mut exps = vec![2u64; 3];
        exps[1] = 1;
        let f = SeparableForm::linear_power(&exps);
        let g = f.sigma_all(5, 1).unwrap().sub(&f.pow(5).unwrap()).unwrap();
        let (v, w) = g.min_valuation(5, 3).unwrap();
        let exact = g.to_laurent().unwrap().min_valuation(5, 3);
        assert_eq!(v, exact.0);
        let w = w.unwrap();
        let c = g.to_laurent().unwrap().coefficient(&w);
        assert_eq!(crate::ring::valuation_of_integer(5, &c, 3), v);
    }

    #[test]
    fn newton_interval_refines_cancellation() {
        let f = phi(2, 1);
        // (t−z1)(t−z2) − t^2 has t-range [0,1]
        let t2 = SeparableForm::product(BigInt::one(), vec![BinaryForm::linear(1, 0), BinaryForm::linear(1, 0)]);
        let g = f.sub(&t2).unwrap();
        assert_eq!(g.t_interval_bound().unwrap(), LatticePolytopeT::interval(0, 2));
        assert_eq!(g.newton_polytope_t().unwrap(), LatticePolytopeT::interval(0, 1));
    }

    #[test]
    fn partial_evaluation() {
        let ctx = ModulusContext::new(7, 3).unwrap();
        let f = phi(4, 2);
        let tp = f.eval_z(&ctx, &[1, 2, 3, 4]);
        assert_eq!(tp.coeff(&ctx, 6), 170);
        assert_eq!(tp.coeff(&ctx, 8), 1);
    }
}
