use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::packed::Packing;
use super::LatticePolytopeT;
use crate::ring::{valuation_of_integer, Ring, TPoly, Valuation};
use crate::{Error, Result};

/// Variable blocks `t = (t_1..t_r)` and `z = (z_1..z_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VarLayout {
    pub r: usize,
    pub n: usize,
}

impl VarLayout {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        if r == 0 || n == 0 {
            return Err(Error::DimensionUnsupported("both variable blocks must be nonempty".into()));
        }
        Ok(VarLayout { r, n })
    }

    pub fn width(&self) -> usize {
        self.r + self.n
    }
}

/// Exponent vector `(a_1..a_r, b_1..b_n)`.
pub type Exponent = Box<[i32]>;

/// Which block a Frobenius substitution `x ↦ x^{p^k}` acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaScope {
    All,
    ZOnly,
}

/// Sparse multivariate Laurent polynomial with exact integer coefficients.
///
/// Terms are kept in lexicographic order of exponent vectors and zero
/// coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    layout: VarLayout,
    terms: BTreeMap<Exponent, BigInt>,
}

fn checked_add(a: &[i32], b: &[i32]) -> Result<Exponent> {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).ok_or(Error::ExponentOverflow)).collect()
}

impl LaurentPoly {
    pub fn zero(layout: VarLayout) -> Self {
        LaurentPoly { layout, terms: BTreeMap::new() }
    }

    pub fn constant(layout: VarLayout, c: impl Into<BigInt>) -> Self {
        let mut f = Self::zero(layout);
        f.add_term(vec![0; layout.width()].into(), c.into());
        f
    }

    pub fn one(layout: VarLayout) -> Self {
        Self::constant(layout, 1)
    }

    /// `c · t^a z^b` with `exps = (a, b)`.
    pub fn monomial(layout: VarLayout, exps: &[i32], c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), layout.width(), "exponent length does not match layout");
        let mut f = Self::zero(layout);
        f.add_term(exps.into(), c.into());
        f
    }

    /// The variable `t_i` (0-based).
    pub fn t(layout: VarLayout, i: usize) -> Self {
        let mut e = vec![0; layout.width()];
        e[i] = 1;
        Self::monomial(layout, &e, 1)
    }

    /// The variable `z_i` (0-based).
    pub fn z(layout: VarLayout, i: usize) -> Self {
        let mut e = vec![0; layout.width()];
        e[layout.r + i] = 1;
        Self::monomial(layout, &e, 1)
    }

    pub fn from_terms(layout: VarLayout, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Self {
        let mut f = Self::zero(layout);
        for (e, c) in terms {
            assert_eq!(e.len(), layout.width());
            f.add_term(e, c);
        }
        f
    }

    pub fn layout(&self) -> VarLayout {
        self.layout
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_layout(&self, other: &Self) -> Result<()> {
        if self.layout == other.layout {
            Ok(())
        } else {
            Err(Error::LayoutMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        let (mut big, small) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        Ok(big)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { layout: self.layout, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.layout);
        }
        LaurentPoly { layout: self.layout, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_inner(other, None)
    }

    /// Product with coefficients reduced into `[0, m)`.
    pub fn mul_mod(&self, other: &Self, m: &BigInt) -> Result<Self> {
        self.mul_inner(other, Some(m))
    }

    fn mul_inner(&self, other: &Self, m: Option<&BigInt>) -> Result<Self> {
        self.same_layout(other)?;
        let mut out = Self::zero(self.layout);
        let (a, b) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if a.is_zero() {
            return Ok(out);
        }
        if let Some(packing) = Packing::for_product(self.layout.width(), &a.terms, &b.terms) {
            out.terms = packing.multiply(&a.terms, &b.terms).into_iter().collect();
            return Ok(match m {
                Some(m) => out.reduce_mod(m),
                None => out,
            });
        }
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                out.add_term(checked_add(ea, eb)?, ca * cb);
            }
        }
        Ok(match m {
            Some(m) => out.reduce_mod(m),
            None => out,
        })
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut acc = Self::one(self.layout);
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

    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        let terms = self.terms.iter().filter_map(|(e, c)| {
            let r = c.mod_floor(m);
            (!r.is_zero()).then(|| (e.clone(), r))
        });
        LaurentPoly { layout: self.layout, terms: terms.collect() }
    }

    /// Coefficient of `t^v` as a polynomial in `z` (same layout, `t` exponents zero).
    pub fn coeff_t(&self, v: &[i32]) -> Self {
        assert_eq!(v.len(), self.layout.r);
        let r = self.layout.r;
        let terms = self.terms.iter().filter(|(e, _)| &e[..r] == v).map(|(e, c)| {
            let mut k: Vec<i32> = e.to_vec();
            k[..r].iter_mut().for_each(|x| *x = 0);
            (k.into_boxed_slice(), c.clone())
        });
        LaurentPoly { layout: self.layout, terms: terms.collect() }
    }

    /// `Σ_v coeff_t(f, v)·t^v` split by `t` exponent.
    pub fn t_slices(&self) -> BTreeMap<Vec<i32>, LaurentPoly> {
        let r = self.layout.r;
        let mut out: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key = e[..r].to_vec();
            let mut k = e.to_vec();
            k[..r].iter_mut().for_each(|x| *x = 0);
            out.entry(key).or_insert_with(|| Self::zero(self.layout)).terms.insert(k.into(), c.clone());
        }
        out
    }

    /// `F(x) ↦ F(x^{p^k})` on the selected block.
    pub fn sigma_subst(&self, p: u64, k: u32, scope: SigmaScope) -> Result<Self> {
        let factor = i32::try_from(p.checked_pow(k).ok_or(Error::ExponentOverflow)?).map_err(|_| Error::ExponentOverflow)?;
        let start = match scope {
            SigmaScope::All => 0,
            SigmaScope::ZOnly => self.layout.r,
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut k = e.to_vec();
            for x in &mut k[start..] {
                *x = x.checked_mul(factor).ok_or(Error::ExponentOverflow)?;
            }
            terms.insert(k.into_boxed_slice(), c.clone());
        }
        Ok(LaurentPoly { layout: self.layout, terms })
    }

    /// `∂/∂z_v` (0-based).
    pub fn derivative(&self, v: usize) -> Self {
        assert!(v < self.layout.n, "z index out of range");
        let idx = self.layout.r + v;
        let terms = self.terms.iter().filter(|(e, _)| e[idx] != 0).map(|(e, c)| {
            let mut k = e.to_vec();
            k[idx] -= 1;
            (k.into_boxed_slice(), c * BigInt::from(e[idx]))
        });
        LaurentPoly { layout: self.layout, terms: terms.collect() }
    }

    /// Exact quotient by `z_i − z_j` (0-based), or `None` when the division
    /// leaves a remainder or `z_i` occurs with a negative exponent.
    pub fn divide_by_difference(&self, i: usize, j: usize) -> Option<Self> {
        assert!(i < self.layout.n && j < self.layout.n && i != j, "z indices out of range");
        let (xi, xj) = (self.layout.r + i, self.layout.r + j);
        let mut slices: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[xi] < 0 {
                return None;
            }
            let mut k = e.to_vec();
            k[xi] = 0;
            slices.entry(e[xi]).or_insert_with(|| Self::zero(self.layout)).add_term(k.into(), c.clone());
        }
        let Some(&top) = slices.keys().next_back() else {
            return Some(self.clone());
        };
        let times_zj = |f: &LaurentPoly| -> LaurentPoly {
            let terms = f.terms.iter().map(|(e, c)| {
                let mut k = e.to_vec();
                k[xj] += 1;
                (k.into_boxed_slice(), c.clone())
            });
            LaurentPoly { layout: f.layout, terms: terms.collect() }
        };
        // f = (z_i − z_j)·h slice by slice: h_{a−1} = f_a + z_j·h_a
        let mut quotient = Self::zero(self.layout);
        let mut h = Self::zero(self.layout);
        for a in (1..=top).rev() {
            let fa = slices.remove(&a).unwrap_or_else(|| Self::zero(self.layout));
            h = fa.add(&times_zj(&h)).ok()?;
            for (e, c) in &h.terms {
                let mut k = e.to_vec();
                k[xi] = a - 1;
                quotient.add_term(k.into(), c.clone());
            }
        }
        let f0 = slices.remove(&0).unwrap_or_else(|| Self::zero(self.layout));
        f0.add(&times_zj(&h)).ok()?.is_zero().then_some(quotient)
    }

    pub fn newton_polytope_t(&self) -> Result<LatticePolytopeT> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let r = self.layout.r;
        if r == 1 {
            let lo = self.terms.keys().map(|e| e[0] as i64).min().unwrap();
            let hi = self.terms.keys().map(|e| e[0] as i64).max().unwrap();
            return Ok(LatticePolytopeT::Interval { lo, hi });
        }
        let mut points: Vec<Vec<i64>> = self.terms.keys().map(|e| e[..r].iter().map(|x| *x as i64).collect()).collect();
        points.sort();
        points.dedup();
        let lo = (0..r).map(|i| points.iter().map(|q| q[i]).min().unwrap()).collect();
        let hi = (0..r).map(|i| points.iter().map(|q| q[i]).max().unwrap()).collect();
        Ok(LatticePolytopeT::Points { points, lo, hi })
    }

    /// Lexicographically largest term (variables ordered `t_1 > … > z_1 > … > z_n`).
    pub fn leading_term(&self) -> Result<(Vec<i32>, BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (e.to_vec(), c.clone())).ok_or(Error::ZeroPolynomial)
    }

    /// `Some(d)` when every term has total `z` degree `d`.
    pub fn homogeneous_z_degree(&self) -> Option<i64> {
        let r = self.layout.r;
        let mut degs = self.terms.keys().map(|e| e[r..].iter().map(|x| *x as i64).sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Smallest coefficient valuation, capped at `cap`, with the first
    /// monomial attaining it.
    pub fn min_valuation(&self, p: u64, cap: u32) -> (Valuation, Option<Exponent>) {
        let mut best = Valuation::saturated(cap);
        let mut witness = None;
        for (e, c) in &self.terms {
            let v = valuation_of_integer(p, c, cap);
            if v.value < best.value {
                best = v;
                witness = Some(e.clone());
                if v.value == 0 {
                    break;
                }
            }
        }
        (best, witness)
    }

    /// Evaluate in `ring` at `z` (and `t`, defaulting to 1).
    pub fn evaluate<R: Ring>(&self, ring: &R, z: &[R::Elem], t: Option<&[R::Elem]>) -> Result<R::Elem> {
        assert_eq!(z.len(), self.layout.n, "point dimension");
        let ones = vec![ring.one(); self.layout.r];
        let t = t.unwrap_or(&ones);
        assert_eq!(t.len(), self.layout.r, "t dimension");
        let point: Vec<&R::Elem> = t.iter().chain(z).collect();
        let inverses: Vec<Option<R::Elem>> = point.iter().map(|x| ring.try_inverse(x)).collect();
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            let mut term = ring.from_bigint(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = ring.mul(&term, &ring.pow(point[i], k as u64));
                } else if k < 0 {
                    let inv = inverses[i].as_ref().ok_or(Error::NonUnitAtNegativeExponent)?;
                    term = ring.mul(&term, &ring.pow(inv, (-k) as u64));
                }
            }
            acc = ring.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Substitute `z` and keep `t` (one `t` variable only).
    pub fn eval_z<R: Ring>(&self, ring: &R, z: &[R::Elem]) -> Result<TPoly<R::Elem>> {
        if self.layout.r != 1 {
            return Err(Error::DimensionUnsupported("partial evaluation needs exactly one t variable".into()));
        }
        let mut out = TPoly::zero();
        for (t_exp, slice) in self.t_slices() {
            let value = slice.evaluate(ring, z, None)?;
            out = out.add(ring, &TPoly::monomial(ring, value, t_exp[0] as i64));
        }
        Ok(out)
    }

    /// Maximum absolute coefficient, handy for sizing.
    pub fn height(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(e, c)| c.is_one() && e.iter().all(|x| *x == 0))
    }
}
