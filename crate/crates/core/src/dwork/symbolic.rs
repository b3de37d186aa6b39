use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;

use super::ghost::monomial_text;
use super::report::{CongruenceReport, Mode};
use super::{hasse_witt, GhostSequence, TuplePoly};
use crate::laurent::{LaurentPoly, PolyRing, SigmaScope, VarLayout};
use crate::ring::{Matrix, Ring, Valuation};
use crate::{Error, Result};

/// Shared plumbing for the polynomial-level checks.
struct Ctx<'a, P> {
    seq: &'a GhostSequence<P>,
    p: u64,
    layout: VarLayout,
}

impl<'a, P: TuplePoly> Ctx<'a, P> {
    fn new(seq: &'a GhostSequence<P>, s: usize) -> Result<Self> {
        if s > seq.level() {
            return Err(Error::InvalidTuple(format!("level {s} not computed (have {})", seq.level())));
        }
        if s + 1 > seq.tuple().l() {
            return Err(Error::InvalidTuple(format!("level {s} needs l ≥ {}", s + 1)));
        }
        Ok(Ctx { seq, p: seq.tuple().p(), layout: seq.layout() })
    }

    fn e(&self, j: usize) -> u32 {
        self.seq.tuple().cumulative(j)
    }

    /// `A(m, Δ_i, Δ_j, f)`.
    fn hw(&self, m: u32, i: usize, j: usize, f: &P) -> Result<Matrix<LaurentPoly>> {
        let d = self.seq.tuple().delta();
        Ok(hasse_witt(self.p, m, &d[i], &d[j], f)?.entries)
    }

    /// `A(E_{s+1}, Δ_0, Δ_{s+1}, W_s)`.
    fn full(&self, s: usize) -> Result<Matrix<LaurentPoly>> {
        self.hw(self.e(s + 1), 0, s + 1, self.seq.product(s))
    }

    /// `σ^{e_1} A(E_{s+1} − E_1, Δ_1, Δ_{s+1}, W_s^{(1)})`.
    fn tail(&self, s: usize) -> Result<Matrix<LaurentPoly>> {
        let a = self.hw(self.e(s + 1) - self.e(1), 1, s + 1, &self.seq.partial(s, 1))?;
        sigma_z(&a, self.p, self.e(1))
    }

    fn modular(&self, k: u32) -> PolyRing {
        PolyRing::modular(self.layout, BigInt::from(self.p).pow(k))
    }
}

fn sigma_z(a: &Matrix<LaurentPoly>, p: u64, k: u32) -> Result<Matrix<LaurentPoly>> {
    a.try_map(|f| f.sigma_subst(p, k, SigmaScope::ZOnly))
}

fn reduce(ring: &PolyRing, a: &Matrix<LaurentPoly>) -> Matrix<LaurentPoly> {
    a.map(|f| ring.add(f, &ring.zero()))
}

/// Smallest valuation over all entries, with the first witness.
fn matrix_valuation(a: &Matrix<LaurentPoly>, p: u64, cap: u32, layout: VarLayout) -> (Valuation, Option<String>) {
    let mut best = Valuation::saturated(cap);
    let mut witness = None;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (v, w) = a.get(i, j).min_valuation(p, cap);
            if v.value < best.value {
                best = v;
                witness = w.map(|e| format!("entry ({}, {}) at {}", i + 1, j + 1, monomial_text(layout, &e)));
            }
        }
    }
    (best, witness)
}

fn congruence(check: &str, residual: &Matrix<LaurentPoly>, p: u64, claimed: u32, guard: u32, layout: VarLayout) -> CongruenceReport {
    let (v, w) = matrix_valuation(residual, p, claimed + guard, layout);
    CongruenceReport::congruence(check, Mode::Symbolic, claimed, v, w)
}

fn vacuous(check: &str) -> CongruenceReport {
    CongruenceReport::congruence(check, Mode::Symbolic, 0, Valuation::saturated(0), None)
}

/// The exact factorization of `A(E_{s+1}, Δ_0, Δ_{s+1}, W_s)` through the
/// ghosts: `Σ_{j=1}^{s} A(E_j, Δ_0, Δ_j, V_{j−1})·σ^{E_j} A(E_{s+1} − E_j, Δ_j, Δ_{s+1}, W_s^{(j)})
/// + A(E_{s+1}, Δ_0, Δ_{s+1}, V_s)`, with `σ` on `z` only.
pub fn check_hw_factorization_identity<P: TuplePoly>(seq: &GhostSequence<P>, s: usize) -> Result<CongruenceReport> {
    let c = Ctx::new(seq, s)?;
    let ring = PolyRing::exact(c.layout);
    let top = c.e(s + 1);
    let mut rhs = c.hw(top, 0, s + 1, seq.ghost(s))?;
    for j in 1..=s {
        let left = c.hw(c.e(j), 0, j, seq.ghost(j - 1))?;
        let right = sigma_z(&c.hw(top - c.e(j), j, s + 1, &seq.partial(s, j))?, c.p, c.e(j))?;
        rhs = rhs.add(&ring, &left.mul(&ring, &right));
    }
    let residual = c.full(s)?.sub(&ring, &rhs);
    let report = if residual.is_zero(&ring) {
        CongruenceReport::identity("hw_factorization_identity", Mode::Symbolic, None, None)
    } else {
        let (v, w) = matrix_valuation(&residual, c.p, 8, c.layout);
        CongruenceReport::identity("hw_factorization_identity", Mode::Symbolic, Some(v), w)
    };
    Ok(report.with("s", s))
}

/// `A(E_{s+1}, Δ_0, Δ_{s+1}, W_s) ≡ ∏_{j=0}^{s} σ^{E_j} A(e_{j+1}, Δ_j, Δ_{j+1}, Λ_j) (mod p)`.
pub fn check_mod_p_factorization<P: TuplePoly>(seq: &GhostSequence<P>, s: usize, guard: u32) -> Result<CongruenceReport> {
    let c = Ctx::new(seq, s)?;
    let ring = c.modular(1 + guard);
    let lambda = seq.tuple().lambda();
    let mut prod = Matrix::identity(&ring, seq.tuple().g());
    for j in 0..=s {
        let a = c.hw(c.e(j + 1) - c.e(j), j, j + 1, &lambda[j])?;
        prod = prod.mul(&ring, &reduce(&ring, &sigma_z(&a, c.p, c.e(j))?));
    }
    let residual = reduce(&ring, &c.full(s)?).sub(&ring, &prod);
    Ok(congruence("mod_p_factorization", &residual, c.p, 1, guard, c.layout).with("s", s))
}

/// Determinants of the `σ^{e_1}`-twisted tails must be nonzero mod `p`.
fn require_unit_det(ring: &PolyRing, p: u64, d: &LaurentPoly) -> Result<()> {
    let (v, _) = ring.add(d, &ring.zero()).min_valuation(p, 1);
    if d.is_zero() || v.value > 0 {
        Err(Error::SingularModP)
    } else {
        Ok(())
    }
}

/// `F_1 F_2^{−1} ≡ G_1 G_2^{−1} (mod p^s)` in the form
/// `F_1·adj(F_2)·det G_2 ≡ G_1·adj(G_2)·det F_2`, where `F_1 = A(W_s)`,
/// `F_2 = σ^{e_1} A(W_s^{(1)})` and `G_1, G_2` are the same at `s − 1`.
pub fn check_ratio_congruence<P: TuplePoly>(seq: &GhostSequence<P>, s: usize, guard: u32) -> Result<CongruenceReport> {
    if s == 0 {
        return Ok(vacuous("ratio_congruence").with("s", 0u32));
    }
    let c = Ctx::new(seq, s)?;
    let claimed = s as u32;
    let ring = c.modular(claimed + guard);
    let f1 = reduce(&ring, &c.full(s)?);
    let f2 = reduce(&ring, &c.tail(s)?);
    let g1 = reduce(&ring, &c.full(s - 1)?);
    let g2 = reduce(&ring, &c.tail(s - 1)?);
    let (df2, dg2) = (f2.det(&ring), g2.det(&ring));
    require_unit_det(&ring, c.p, &df2)?;
    require_unit_det(&ring, c.p, &dg2)?;
    let lhs = f1.mul(&ring, &f2.adjugate(&ring)).scale(&ring, &dg2);
    let rhs = g1.mul(&ring, &g2.adjugate(&ring)).scale(&ring, &df2);
    Ok(congruence("ratio_congruence", &lhs.sub(&ring, &rhs), c.p, claimed, guard, c.layout).with("s", s))
}

/// `det F_1·det G_2 ≡ det G_1·det F_2 (mod p^s)` with the matrices of
/// [`check_ratio_congruence`].
pub fn check_det_congruence<P: TuplePoly>(seq: &GhostSequence<P>, s: usize, guard: u32) -> Result<CongruenceReport> {
    if s == 0 {
        return Ok(vacuous("det_congruence").with("s", 0u32));
    }
    let c = Ctx::new(seq, s)?;
    let claimed = s as u32;
    let ring = c.modular(claimed + guard);
    let det = |a: Matrix<LaurentPoly>| reduce(&ring, &a).det(&ring);
    let lhs = ring.mul(&det(c.full(s)?), &det(c.tail(s - 1)?));
    let rhs = ring.mul(&det(c.full(s - 1)?), &det(c.tail(s)?));
    let residual = Matrix::from_fn(1, 1, |_, _| ring.sub(&lhs, &rhs));
    Ok(congruence("det_congruence", &residual, c.p, claimed, guard, c.layout).with("s", s))
}

fn derivative(a: &Matrix<LaurentPoly>, v: usize) -> Matrix<LaurentPoly> {
    a.map(|f| f.derivative(v))
}

fn check_var(layout: VarLayout, v: usize) -> Result<()> {
    if v >= layout.n {
        return Err(Error::InvalidTuple(format!("variable index {v} out of range for {} z variables", layout.n)));
    }
    Ok(())
}

/// `D_v(X_s)·X_s^{−1} ≡ D_v(X_{s−1})·X_{s−1}^{−1} (mod p^{s+ℓ})` for
/// `X_s = σ^ℓ A(E_{s+1}, Δ_0, Δ_{s+1}, W_s)`, cross-multiplied through the
/// determinants. `v` is a 0-based `z` index.
pub fn check_derivation_congruence<P: TuplePoly>(seq: &GhostSequence<P>, s: usize, ell: u32, v: usize, guard: u32) -> Result<CongruenceReport> {
    check_var(seq.layout(), v)?;
    if s == 0 {
        return Ok(vacuous("derivation_congruence").with("s", 0u32).with("ell", ell).with("v", v + 1));
    }
    let c = Ctx::new(seq, s)?;
    let claimed = s as u32 + ell;
    let ring = c.modular(claimed + guard);
    let x = |k: usize| -> Result<Matrix<LaurentPoly>> { Ok(reduce(&ring, &sigma_z(&c.full(k)?, c.p, ell)?)) };
    let (xs, xp) = (x(s)?, x(s - 1)?);
    let lhs = derivative(&xs, v).mul(&ring, &xs.adjugate(&ring)).scale(&ring, &xp.det(&ring));
    let rhs = derivative(&xp, v).mul(&ring, &xp.adjugate(&ring)).scale(&ring, &xs.det(&ring));
    let residual = lhs.sub(&ring, &rhs);
    Ok(congruence("derivation_congruence", &residual, c.p, claimed, guard, c.layout).with("s", s).with("ell", ell).with("v", v + 1))
}

/// `D_u D_v(A(W_s))·A(W_s)^{−1} ≡ D_u D_v(A(W_{s−1}))·A(W_{s−1})^{−1} (mod p^s)`,
/// cross-multiplied. `u`, `v` are 0-based `z` indices.
pub fn check_second_derivation_congruence<P: TuplePoly>(seq: &GhostSequence<P>, s: usize, u: usize, v: usize, guard: u32) -> Result<CongruenceReport> {
    check_var(seq.layout(), u)?;
    check_var(seq.layout(), v)?;
    if s == 0 {
        return Ok(vacuous("second_derivation_congruence").with("s", 0u32).with("u", u + 1).with("v", v + 1));
    }
    let c = Ctx::new(seq, s)?;
    let claimed = s as u32;
    let ring = c.modular(claimed + guard);
    let (xs, xp) = (reduce(&ring, &c.full(s)?), reduce(&ring, &c.full(s - 1)?));
    let dd = |a: &Matrix<LaurentPoly>| reduce(&ring, &derivative(&derivative(a, v), u));
    let lhs = dd(&xs).mul(&ring, &xs.adjugate(&ring)).scale(&ring, &xp.det(&ring));
    let rhs = dd(&xp).mul(&ring, &xp.adjugate(&ring)).scale(&ring, &xs.det(&ring));
    let residual = lhs.sub(&ring, &rhs);
    Ok(congruence("second_derivation_congruence", &residual, c.p, claimed, guard, c.layout).with("s", s).with("u", u + 1).with("v", v + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dwork::{DworkTuple, IndexSet};
    use crate::laurent::SeparableForm;

    fn kz7(l: usize, level: usize) -> GhostSequence<SeparableForm> {
        let phi = SeparableForm::linear_power(&[2; 4]);
        let t = DworkTuple::constant(7, 1, IndexSet::range(1), phi, l).unwrap();
        GhostSequence::up_to(&t, level).unwrap()
    }

    #[test]
    fn factorization_identity_is_exact() {
        let seq = kz7(3, 2);
        for s in 0..=2 {
            let r = check_hw_factorization_identity(&seq, s).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn mod_p_and_ratio_at_level_one() {
        let seq = kz7(2, 1);
        assert!(check_mod_p_factorization(&seq, 1, 2).unwrap().pass);
        let r = check_ratio_congruence(&seq, 1, 2).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(check_det_congruence(&seq, 1, 2).unwrap().pass);
        assert!(check_ratio_congruence(&seq, 0, 2).unwrap().pass);
    }

    #[test]
    fn derivations_at_level_one() {
        let seq = kz7(2, 1);
        for v in 0..4 {
            for ell in 0..2 {
                let r = check_derivation_congruence(&seq, 1, ell, v, 2).unwrap();
                assert!(r.pass, "{r:?}");
                assert_eq!(r.claimed_exponent, Some(1 + ell));
            }
            for u in 0..4 {
                assert!(check_second_derivation_congruence(&seq, 1, u, v, 2).unwrap().pass);
            }
        }
        assert!(check_derivation_congruence(&seq, 1, 0, 4, 2).is_err());
    }

    #[test]
    fn singular_tail_is_rejected() {
        let l = VarLayout::new(1, 1).unwrap();
        let f = LaurentPoly::from_terms(l, [(alloc::vec![0, 0].into_boxed_slice(), BigInt::from(1)), (alloc::vec![1, 1].into_boxed_slice(), BigInt::from(7))]);
        let t = DworkTuple::constant(7, 1, IndexSet::range(1), f, 2).unwrap();
        let seq = GhostSequence::up_to(&t, 1).unwrap();
        assert_eq!(check_ratio_congruence(&seq, 1, 2), Err(Error::SingularModP));
    }
}
