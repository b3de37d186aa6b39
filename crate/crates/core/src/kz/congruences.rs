use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{hasse_witt_phi, hypergeometric_solutions, KzParams};
use crate::dwork::{monomial_text, CongruenceReport, Mode};
use crate::laurent::{LaurentPoly, PolyRing};
use crate::ring::{Matrix, Ring, Valuation};
use crate::Result;

struct LevelData {
    a: Matrix<LaurentPoly>,
    i: Matrix<LaurentPoly>,
}

fn level(params: &KzParams, ring: &PolyRing, s: usize) -> Result<LevelData> {
    let reduce = |m: &Matrix<LaurentPoly>| m.map(|f| ring.add(f, &ring.zero()));
    Ok(LevelData { a: reduce(&hasse_witt_phi(params, s)?.entries), i: reduce(&hypergeometric_solutions(params, s)?.entries) })
}

fn cross_residual(ring: &PolyRing, x1: &Matrix<LaurentPoly>, a1: &Matrix<LaurentPoly>, x2: &Matrix<LaurentPoly>, a2: &Matrix<LaurentPoly>) -> Matrix<LaurentPoly> {
    let lhs = x1.mul(ring, &a1.adjugate(ring)).scale(ring, &a2.det(ring));
    let rhs = x2.mul(ring, &a2.adjugate(ring)).scale(ring, &a1.det(ring));
    lhs.sub(ring, &rhs)
}

fn report(check: &str, residual: &Matrix<LaurentPoly>, p: u64, claimed: u32, guard: u32) -> CongruenceReport {
    let cap = claimed + guard;
    let mut best = Valuation::saturated(cap);
    let mut witness = None;
    for r in 0..residual.rows() {
        for c in 0..residual.cols() {
            let f = residual.get(r, c);
            let (v, w) = f.min_valuation(p, cap);
            if v.value < best.value {
                best = v;
                witness = w.map(|e| format!("entry ({}, {}) at {}", r + 1, c + 1, monomial_text(f.layout(), &e)));
            }
        }
    }
    CongruenceReport::congruence(check, Mode::Symbolic, claimed, best, witness)
}

fn derivative(m: &Matrix<LaurentPoly>, j: usize) -> Matrix<LaurentPoly> {
    m.map(|f| f.derivative(j))
}

fn compare(params: &KzParams, check: &str, hi: usize, lo: usize, claimed: u32, guard: u32) -> Result<Vec<CongruenceReport>> {
    let layout = crate::laurent::VarLayout { r: 1, n: params.n };
    let ring = PolyRing::modular(layout, BigInt::from(params.p).pow(claimed + guard));
    let (h, l) = (level(params, &ring, hi)?, level(params, &ring, lo)?);
    let mut out = Vec::with_capacity(params.n + 1);
    out.push(report(check, &cross_residual(&ring, &h.i, &h.a, &l.i, &l.a), params.p, claimed, guard).with("s", lo).with("s2", hi));
    let name = format!("{check}_derivative");
    for j in 0..params.n {
        let r = cross_residual(&ring, &derivative(&h.i, j), &h.a, &derivative(&l.i, j), &l.a);
        out.push(report(&name, &r, params.p, claimed, guard).with("s", lo).with("s2", hi).with("j", j + 1));
    }
    Ok(out)
}

/// `I_{s+1}·A(Φ_{s+1})^{−1} ≡ I_s·A(Φ_s)^{−1} (mod p^s)` and the `∂/∂z_j`
/// variants as polynomial congruences, in the form
/// `X_{s+1}·adj A_{s+1}·det A_s ≡ X_s·adj A_s·det A_{s+1}`.
pub fn check_solution_congruences(params: &KzParams, s: usize, guard: u32) -> Result<Vec<CongruenceReport>> {
    compare(params, "solution_congruence", s + 1, s, s as u32, guard)
}

/// `I_s·A(Φ_s)^{−1} ≡ I_1·A(Φ_1)^{−1} (mod p)` and the `∂/∂z_j` variants,
/// cross-multiplied as in [`check_solution_congruences`].
pub fn check_mod_p_stability(params: &KzParams, s: usize, guard: u32) -> Result<Vec<CongruenceReport>> {
    compare(params, "mod_p_stability", s, 1, 1, guard)
}
