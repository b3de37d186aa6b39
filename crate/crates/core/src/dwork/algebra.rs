use crate::laurent::{Exponent, LatticePolytopeT, LaurentPoly, SeparableForm, SigmaScope, VarLayout};
use crate::ring::{Ring, TPoly, Valuation};
use crate::{Error, Result};

/// Polynomial representations usable as entries of a Dwork tuple.
pub trait TuplePoly: Clone + core::fmt::Debug {
    fn layout(&self) -> VarLayout;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn pow(&self, k: u64) -> Result<Self>;
    /// `x ↦ x^{p^k}` on every variable, `t` included.
    fn sigma_all(&self, p: u64, k: u32) -> Result<Self>;
    /// Coefficient of `t^v` as a polynomial in `z`.
    fn coeff_t(&self, v: &[i64]) -> Result<LaurentPoly>;
    /// Exact Newton polytope in the `t` variables.
    fn newton_polytope_t(&self) -> Result<LatticePolytopeT>;
    /// Smallest coefficient valuation capped at `cap`, with a witness monomial.
    fn min_valuation(&self, p: u64, cap: u32) -> Result<(Valuation, Option<Exponent>)>;
    /// Substitute `z`, keeping the single `t` variable.
    fn eval_z<R: Ring>(&self, ring: &R, z: &[R::Elem]) -> Result<TPoly<R::Elem>>;
    /// Rough count of monomials in a full expansion.
    fn expansion_estimate(&self) -> f64;
}

fn exps(v: &[i64]) -> Result<alloc::vec::Vec<i32>> {
    v.iter().map(|x| i32::try_from(*x).map_err(|_| Error::ExponentOverflow)).collect()
}

impl TuplePoly for LaurentPoly {
    fn layout(&self) -> VarLayout {
        LaurentPoly::layout(self)
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one(self.layout())
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        LaurentPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        LaurentPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        LaurentPoly::mul(self, other)
    }
    fn pow(&self, k: u64) -> Result<Self> {
        LaurentPoly::pow(self, k)
    }
    fn sigma_all(&self, p: u64, k: u32) -> Result<Self> {
        self.sigma_subst(p, k, SigmaScope::All)
    }
    fn coeff_t(&self, v: &[i64]) -> Result<LaurentPoly> {
        Ok(LaurentPoly::coeff_t(self, &exps(v)?))
    }
    fn newton_polytope_t(&self) -> Result<LatticePolytopeT> {
        LaurentPoly::newton_polytope_t(self)
    }
    fn min_valuation(&self, p: u64, cap: u32) -> Result<(Valuation, Option<Exponent>)> {
        Ok(LaurentPoly::min_valuation(self, p, cap))
    }
    fn eval_z<R: Ring>(&self, ring: &R, z: &[R::Elem]) -> Result<TPoly<R::Elem>> {
        LaurentPoly::eval_z(self, ring, z)
    }
    fn expansion_estimate(&self) -> f64 {
        self.len() as f64
    }
}

impl TuplePoly for SeparableForm {
    fn layout(&self) -> VarLayout {
        SeparableForm::layout(self)
    }
    fn one_like(&self) -> Self {
        SeparableForm::one(self.n())
    }
    fn is_zero(&self) -> bool {
        SeparableForm::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        SeparableForm::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        SeparableForm::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        SeparableForm::mul(self, other)
    }
    fn pow(&self, k: u64) -> Result<Self> {
        SeparableForm::pow(self, k)
    }
    fn sigma_all(&self, p: u64, k: u32) -> Result<Self> {
        SeparableForm::sigma_all(self, p, k)
    }
    fn coeff_t(&self, v: &[i64]) -> Result<LaurentPoly> {
        SeparableForm::coeff_t(self, v[0])
    }
    fn newton_polytope_t(&self) -> Result<LatticePolytopeT> {
        SeparableForm::newton_polytope_t(self)
    }
    fn min_valuation(&self, p: u64, cap: u32) -> Result<(Valuation, Option<Exponent>)> {
        SeparableForm::min_valuation(self, p, cap)
    }
    fn eval_z<R: Ring>(&self, ring: &R, z: &[R::Elem]) -> Result<TPoly<R::Elem>> {
        Ok(SeparableForm::eval_z(self, ring, z))
    }
    fn expansion_estimate(&self) -> f64 {
        SeparableForm::expansion_estimate(self)
    }
}
