use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{CongruenceReport, Mode};
use super::{hasse_witt_values, DworkTuple, TuplePoly};
use crate::ring::{JetRing, Matrix, PadicRing, Ring, TPoly, Valuation};
use crate::{Error, Result};

/// `count` points of `R^n` with coordinates drawn from `[1, bound]`,
/// reproducible from `seed`.
pub fn sample_points<R: Ring>(ring: &R, n: usize, count: usize, bound: u64, seed: u64) -> Vec<Vec<R::Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| ring.from_i64((rng.next_u64() % bound.max(1)) as i64 + 1)).collect())
        .collect()
}

/// The polynomials of a Dwork tuple with `z` specialised to `b^{p^k}`,
/// kept as polynomials in the single variable `t`.
///
/// `σ^k` acting on `z` becomes the shift `b ↦ b^{p^k}`; acting on `t` it
/// becomes [`TPoly::stretch`].
pub struct TupleEvaluator<'a, R: Ring, P> {
    tuple: &'a DworkTuple<P>,
    ring: &'a R,
    shifts: Vec<Vec<R::Elem>>,
    lambda: BTreeMap<(usize, u32), TPoly<R::Elem>>,
    partial: BTreeMap<(usize, usize, u32), TPoly<R::Elem>>,
    ghost: BTreeMap<(usize, u32), TPoly<R::Elem>>,
}

impl<'a, R: PadicRing, P: TuplePoly> TupleEvaluator<'a, R, P> {
    pub fn new(tuple: &'a DworkTuple<P>, ring: &'a R, point: Vec<R::Elem>) -> Result<Self> {
        let layout = tuple.lambda()[0].layout();
        if layout.r != 1 {
            return Err(Error::DimensionUnsupported("evaluation mode needs one t variable".into()));
        }
        if point.len() != layout.n {
            return Err(Error::InvalidTuple(format!("point has {} coordinates, expected {}", point.len(), layout.n)));
        }
        Ok(TupleEvaluator { tuple, ring, shifts: alloc::vec![point], lambda: BTreeMap::new(), partial: BTreeMap::new(), ghost: BTreeMap::new() })
    }

    pub fn tuple(&self) -> &DworkTuple<P> {
        self.tuple
    }

    /// `b^{p^k}` coordinatewise.
    pub fn shifted_point(&mut self, k: u32) -> &[R::Elem] {
        while self.shifts.len() <= k as usize {
            let last = self.shifts.last().unwrap();
            let next = last.iter().map(|x| self.ring.frobenius(x, 1)).collect();
            self.shifts.push(next);
        }
        &self.shifts[k as usize]
    }

    /// `Λ_i(t, b^{p^k})`.
    pub fn lambda_at(&mut self, i: usize, k: u32) -> Result<TPoly<R::Elem>> {
        if let Some(v) = self.lambda.get(&(i, k)) {
            return Ok(v.clone());
        }
        let point = self.shifted_point(k).to_vec();
        let v = self.tuple.lambda()[i].eval_z(self.ring, &point)?;
        self.lambda.insert((i, k), v.clone());
        Ok(v)
    }

    /// `W_s^{(j)}(t, b^{p^k})`; `j = s + 1` gives `1`.
    pub fn partial_at(&mut self, s: usize, j: usize, k: u32) -> Result<TPoly<R::Elem>> {
        if j == s + 1 {
            return Ok(TPoly::one(self.ring));
        }
        if let Some(v) = self.partial.get(&(s, j, k)) {
            return Ok(v.clone());
        }
        let p = self.tuple.p();
        let exp = p.checked_pow(self.tuple.cumulative(s) - self.tuple.cumulative(j)).ok_or(Error::ExponentOverflow)?;
        let power = self.lambda_at(s, k)?.pow(self.ring, exp);
        let v = if j == s { power } else { self.partial_at(s - 1, j, k)?.mul(self.ring, &power) };
        self.partial.insert((s, j, k), v.clone());
        Ok(v)
    }

    /// `V_s(t, b^{p^k})`.
    pub fn ghost_at(&mut self, s: usize, k: u32) -> Result<TPoly<R::Elem>> {
        if let Some(v) = self.ghost.get(&(s, k)) {
            return Ok(v.clone());
        }
        let v = if s == 0 {
            self.lambda_at(0, k)?
        } else {
            let p = self.tuple.p();
            let mut acc = self.partial_at(s, 0, k)?;
            for j in 1..=s {
                let ej = self.tuple.cumulative(j);
                let shifted = self.partial_at(s, j, k + ej)?.stretch(self.ring, p.checked_pow(ej).ok_or(Error::ExponentOverflow)?);
                acc = acc.sub(self.ring, &self.ghost_at(j - 1, k)?.mul(self.ring, &shifted));
            }
            acc
        };
        self.ghost.insert((s, k), v.clone());
        Ok(v)
    }

    /// `A(m, Δ_i, Δ_j, ·)` read off a specialised polynomial.
    pub fn hw(&self, m: u32, i: usize, j: usize, f: &TPoly<R::Elem>) -> Result<Matrix<R::Elem>> {
        let d = self.tuple.delta();
        hasse_witt_values(self.ring, self.tuple.p(), m, &d[i], &d[j], f)
    }

    /// `σ^k A(E_{s+1}, Δ_0, Δ_{s+1}, W_s)` at the point.
    pub fn full(&mut self, s: usize, k: u32) -> Result<Matrix<R::Elem>> {
        let f = self.partial_at(s, 0, k)?;
        self.hw(self.tuple.cumulative(s + 1), 0, s + 1, &f)
    }

    /// `σ^{e_1} A(E_{s+1} − E_1, Δ_1, Δ_{s+1}, W_s^{(1)})` at the point.
    pub fn tail(&mut self, s: usize) -> Result<Matrix<R::Elem>> {
        let e1 = self.tuple.cumulative(1);
        let f = self.partial_at(s, 1, e1)?;
        self.hw(self.tuple.cumulative(s + 1) - e1, 1, s + 1, &f)
    }
}

fn matrix_valuation<R: PadicRing>(ring: &R, a: &Matrix<R::Elem>) -> (Valuation, Option<String>) {
    let mut best = Valuation::saturated(ring.precision());
    let mut witness = None;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let v = ring.valuation(a.get(i, j));
            if v.value < best.value {
                best = v;
                witness = Some(format!("entry ({}, {})", i + 1, j + 1));
            }
        }
    }
    (best, witness)
}

fn report<R: PadicRing>(ring: &R, check: &str, claimed: u32, residual: &Matrix<R::Elem>) -> CongruenceReport {
    let (v, w) = matrix_valuation(ring, residual);
    CongruenceReport::congruence(check, Mode::Evaluation, claimed, v, w).with("precision", ring.precision())
}

fn need_precision<R: PadicRing>(ring: &R, claimed: u32) -> Result<()> {
    if ring.precision() < claimed {
        return Err(Error::InvalidParams(format!("working precision {} below the claimed exponent {claimed}", ring.precision())));
    }
    Ok(())
}

fn need_level<P: TuplePoly>(tuple: &DworkTuple<P>, s: usize) -> Result<()> {
    if s + 1 > tuple.l() {
        return Err(Error::InvalidTuple(format!("level {s} needs l ≥ {}", s + 1)));
    }
    Ok(())
}

fn vacuous(check: &str) -> CongruenceReport {
    CongruenceReport::congruence(check, Mode::Evaluation, 0, Valuation::saturated(0), None)
}

/// Every `t`-coefficient of `V_s(t, b)` is divisible by `p^s`, for `s = 1..=level`.
pub fn check_ghost_divisibility_at<R: PadicRing, P: TuplePoly>(tuple: &DworkTuple<P>, ring: &R, point: &[R::Elem], level: usize) -> Result<Vec<CongruenceReport>> {
    need_precision(ring, level as u32)?;
    let mut ev = TupleEvaluator::new(tuple, ring, point.to_vec())?;
    let mut out = Vec::new();
    for s in 1..=level {
        let v = ev.ghost_at(s, 0)?;
        let mut best = Valuation::saturated(ring.precision());
        let mut witness = None;
        for (i, c) in v.coeffs.iter().enumerate() {
            let val = ring.valuation(c);
            if val.value < best.value {
                best = val;
                witness = Some(format!("t1^{}", v.low + i as i64));
            }
        }
        out.push(CongruenceReport::congruence("ghost_divisibility", Mode::Evaluation, s as u32, best, witness).with("s", s));
    }
    Ok(out)
}

/// The ghost factorization of `A(E_{s+1}, Δ_0, Δ_{s+1}, W_s)` at the point,
/// which must hold to the full working precision.
pub fn check_hw_factorization_identity_at<R: PadicRing, P: TuplePoly>(tuple: &DworkTuple<P>, ring: &R, point: &[R::Elem], s: usize) -> Result<CongruenceReport> {
    need_level(tuple, s)?;
    let mut ev = TupleEvaluator::new(tuple, ring, point.to_vec())?;
    let top = tuple.cumulative(s + 1);
    let vs = ev.ghost_at(s, 0)?;
    let mut rhs = ev.hw(top, 0, s + 1, &vs)?;
    for j in 1..=s {
        let ej = tuple.cumulative(j);
        let vj = ev.ghost_at(j - 1, 0)?;
        let left = ev.hw(ej, 0, j, &vj)?;
        let w = ev.partial_at(s, j, ej)?;
        let right = ev.hw(top - ej, j, s + 1, &w)?;
        rhs = rhs.add(ring, &left.mul(ring, &right));
    }
    let residual = ev.full(s, 0)?.sub(ring, &rhs);
    Ok(report(ring, "hw_factorization_identity", ring.precision(), &residual).with("s", s))
}

/// `A(W_s)(b) ≡ ∏_j A(e_{j+1}, Δ_j, Δ_{j+1}, Λ_j)(b^{p^{E_j}}) (mod p)`.
pub fn check_mod_p_factorization_at<R: PadicRing, P: TuplePoly>(tuple: &DworkTuple<P>, ring: &R, point: &[R::Elem], s: usize) -> Result<CongruenceReport> {
    need_level(tuple, s)?;
    need_precision(ring, 1)?;
    let mut ev = TupleEvaluator::new(tuple, ring, point.to_vec())?;
    let mut prod = Matrix::identity(ring, tuple.g());
    for j in 0..=s {
        let ej = tuple.cumulative(j);
        let f = ev.lambda_at(j, ej)?;
        prod = prod.mul(ring, &ev.hw(tuple.cumulative(j + 1) - ej, j, j + 1, &f)?);
    }
    let residual = ev.full(s, 0)?.sub(ring, &prod);
    Ok(report(ring, "mod_p_factorization", 1, &residual).with("s", s))
}

/// `F_1·adj(F_2)·det G_2 ≡ G_1·adj(G_2)·det F_2 (mod p^s)` at the point.
pub fn check_ratio_congruence_at<R: PadicRing, P: TuplePoly>(tuple: &DworkTuple<P>, ring: &R, point: &[R::Elem], s: usize) -> Result<CongruenceReport> {
    if s == 0 {
        return Ok(vacuous("ratio_congruence").with("s", 0u32));
    }
    need_level(tuple, s)?;
    need_precision(ring, s as u32)?;
    let mut ev = TupleEvaluator::new(tuple, ring, point.to_vec())?;
    let (f1, f2, g1, g2) = (ev.full(s, 0)?, ev.tail(s)?, ev.full(s - 1, 0)?, ev.tail(s - 1)?);
    let lhs = f1.mul(ring, &f2.adjugate(ring)).scale(ring, &g2.det(ring));
    let rhs = g1.mul(ring, &g2.adjugate(ring)).scale(ring, &f2.det(ring));
    Ok(report(ring, "ratio_congruence", s as u32, &lhs.sub(ring, &rhs)).with("s", s))
}

/// `det F_1·det G_2 ≡ det G_1·det F_2 (mod p^s)` at the point.
pub fn check_det_congruence_at<R: PadicRing, P: TuplePoly>(tuple: &DworkTuple<P>, ring: &R, point: &[R::Elem], s: usize) -> Result<CongruenceReport> {
    if s == 0 {
        return Ok(vacuous("det_congruence").with("s", 0u32));
    }
    need_level(tuple, s)?;
    need_precision(ring, s as u32)?;
    let mut ev = TupleEvaluator::new(tuple, ring, point.to_vec())?;
    let lhs = ring.mul(&ev.full(s, 0)?.det(ring), &ev.tail(s - 1)?.det(ring));
    let rhs = ring.mul(&ev.full(s - 1, 0)?.det(ring), &ev.tail(s)?.det(ring));
    let residual = Matrix::from_fn(1, 1, |_, _| ring.sub(&lhs, &rhs));
    Ok(report(ring, "det_congruence", s as u32, &residual).with("s", s))
}

/// Split a matrix of jets into the coefficient of one jet monomial.
fn jet_part<R: Ring>(jets: &JetRing<R>, a: &Matrix<Vec<R::Elem>>, mono: [u8; 2]) -> Matrix<R::Elem> {
    a.map(|x| jets.coefficient(x, mono))
}

fn jet_point<R: Ring>(jets: &JetRing<R>, point: &[R::Elem], vars: &[(usize, usize)]) -> Vec<Vec<R::Elem>> {
    point
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut x = jets.constant(c.clone());
            for &(v, k) in vars {
                if v == i {
                    x = jets.add(&x, &jets.variable(jets.base().zero(), k));
                }
            }
            x
        })
        .collect()
}

fn check_var(n: usize, v: usize) -> Result<()> {
    if v >= n {
        return Err(Error::InvalidTuple(format!("variable index {v} out of range for {n} z variables")));
    }
    Ok(())
}

/// `D_v(X_s)·adj(X_s)·det X_{s−1} ≡ D_v(X_{s−1})·adj(X_{s−1})·det X_s (mod p^{s+ℓ})`
/// with `X_s = σ^ℓ A(E_{s+1}, Δ_0, Δ_{s+1}, W_s)`, at the point. `v` is 0-based.
pub fn check_derivation_congruence_at<R: PadicRing + Clone, P: TuplePoly>(
    tuple: &DworkTuple<P>,
    ring: &R,
    point: &[R::Elem],
    s: usize,
    ell: u32,
    v: usize,
) -> Result<CongruenceReport> {
    check_var(point.len(), v)?;
    if s == 0 {
        return Ok(vacuous("derivation_congruence").with("s", 0u32).with("ell", ell).with("v", v + 1));
    }
    need_level(tuple, s)?;
    let claimed = s as u32 + ell;
    need_precision(ring, claimed)?;
    let jets = JetRing::first_order(ring.clone());
    let mut ev = TupleEvaluator::new(tuple, &jets, jet_point(&jets, point, &[(v, 0)]))?;
    let (js, jp) = (ev.full(s, ell)?, ev.full(s - 1, ell)?);
    let (xs, dxs) = (jet_part(&jets, &js, [0, 0]), jet_part(&jets, &js, [1, 0]));
    let (xp, dxp) = (jet_part(&jets, &jp, [0, 0]), jet_part(&jets, &jp, [1, 0]));
    let lhs = dxs.mul(ring, &xs.adjugate(ring)).scale(ring, &xp.det(ring));
    let rhs = dxp.mul(ring, &xp.adjugate(ring)).scale(ring, &xs.det(ring));
    Ok(report(ring, "derivation_congruence", claimed, &lhs.sub(ring, &rhs)).with("s", s).with("ell", ell).with("v", v + 1))
}

/// `D_u D_v(A(W_s))·adj A(W_s)·det A(W_{s−1}) ≡ (same at s − 1)·det A(W_s) (mod p^s)`
/// at the point. `u`, `v` are 0-based.
pub fn check_second_derivation_congruence_at<R: PadicRing + Clone, P: TuplePoly>(
    tuple: &DworkTuple<P>,
    ring: &R,
    point: &[R::Elem],
    s: usize,
    u: usize,
    v: usize,
) -> Result<CongruenceReport> {
    check_var(point.len(), u)?;
    check_var(point.len(), v)?;
    if s == 0 {
        return Ok(vacuous("second_derivation_congruence").with("s", 0u32).with("u", u + 1).with("v", v + 1));
    }
    need_level(tuple, s)?;
    let claimed = s as u32;
    need_precision(ring, claimed)?;
    let (jets, vars, mono) = if u == v {
        (JetRing::second_order(ring.clone()), alloc::vec![(v, 0)], [2, 0])
    } else {
        (JetRing::mixed(ring.clone()), alloc::vec![(u, 0), (v, 1)], [1, 1])
    };
    let mut ev = TupleEvaluator::new(tuple, &jets, jet_point(&jets, point, &vars))?;
    let (js, jp) = (ev.full(s, 0)?, ev.full(s - 1, 0)?);
    let second = |a: &Matrix<Vec<R::Elem>>| {
        let d = jet_part(&jets, a, mono);
        if u == v {
            d.scale(ring, &ring.from_i64(2))
        } else {
            d
        }
    };
    let (xs, xp) = (jet_part(&jets, &js, [0, 0]), jet_part(&jets, &jp, [0, 0]));
    let lhs = second(&js).mul(ring, &xs.adjugate(ring)).scale(ring, &xp.det(ring));
    let rhs = second(&jp).mul(ring, &xp.adjugate(ring)).scale(ring, &xs.det(ring));
    Ok(report(ring, "second_derivation_congruence", claimed, &lhs.sub(ring, &rhs)).with("s", s).with("u", u + 1).with("v", v + 1))
}
