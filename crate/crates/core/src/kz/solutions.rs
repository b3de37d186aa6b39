use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::KzParams;
use crate::dwork::{check_admissible, hasse_witt, CongruenceReport, DworkTuple, HasseWittMatrix, IndexSet, Mode};
use crate::laurent::{LatticePolytopeT, LaurentPoly, SeparableForm, VarLayout};
use crate::ring::{Matrix, Valuation};
use crate::{Error, Result};

/// `Φ_s = ((t − z_1)…(t − z_n))^{(p^{es} − 1)/q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterPolynomial {
    pub s: usize,
    pub poly: SeparableForm,
}

fn level(params: &KzParams, s: usize) -> Result<()> {
    if s == 0 || s > params.s_max {
        return Err(Error::InvalidParams(format!("level s = {s} outside 1..={}", params.s_max)));
    }
    Ok(())
}

pub fn master_polynomial(params: &KzParams, s: usize) -> Result<MasterPolynomial> {
    level(params, s)?;
    let k = params.master_exponent(s)?;
    Ok(MasterPolynomial { s, poly: SeparableForm::linear_power(&vec![k; params.n]) })
}

impl MasterPolynomial {
    pub fn t_degree(&self) -> i64 {
        self.poly.terms()[0].total_degree() as i64
    }

    /// `Φ_s = Φ_1·Φ_1^{p^e}⋯Φ_1^{p^{e(s−1)}}`, compared exactly.
    pub fn check_factorization(&self, params: &KzParams) -> Result<CongruenceReport> {
        let phi1 = SeparableForm::linear_power(&vec![params.master_exponent(1)?; params.n]);
        let mut prod = SeparableForm::one(params.n);
        for j in 0..self.s {
            prod = prod.mul(&phi1.pow(params.p_es(j)?)?)?;
        }
        Ok(CongruenceReport::predicate("master_factorization", Mode::Symbolic, prod == self.poly, None).with("s", self.s))
    }
}

/// The `n × g` matrix `I_s(z)`; column `ℓ` is the coefficient of
/// `t^{ℓp^{es} − 1}` in `(Φ_s/(t − z_i))_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionMatrix {
    pub s: usize,
    pub entries: Matrix<LaurentPoly>,
}

/// `Φ_s/(t − z_i)` (0-based `i`).
pub(crate) fn master_quotient(params: &KzParams, s: usize, i: usize) -> Result<SeparableForm> {
    let k = params.master_exponent(s)?;
    let mut exps = vec![k; params.n];
    exps[i] -= 1;
    Ok(SeparableForm::linear_power(&exps))
}

pub fn hypergeometric_solutions(params: &KzParams, s: usize) -> Result<SolutionMatrix> {
    level(params, s)?;
    let pes = params.p_es(s)? as i64;
    let mut rows = Vec::with_capacity(params.n);
    for i in 0..params.n {
        let f = master_quotient(params, s, i)?;
        rows.push((1..=params.g).map(|l| f.coeff_t(l as i64 * pes - 1)).collect::<Result<Vec<_>>>()?);
    }
    Ok(SolutionMatrix { s, entries: Matrix::from_rows(rows) })
}

impl SolutionMatrix {
    pub fn column(&self, ell: usize) -> Vec<LaurentPoly> {
        (0..self.entries.rows()).map(|i| self.entries.get(i, ell).clone()).collect()
    }
}

/// `A(Φ_s) = A(es, Γ, Γ, Φ_s)`.
pub fn hasse_witt_phi(params: &KzParams, s: usize) -> Result<HasseWittMatrix> {
    let phi = master_polynomial(params, s)?;
    let gamma = params.gamma();
    hasse_witt(params.p, params.e * s as u32, &gamma, &gamma, &phi.poly)
}

/// The constant tuple `(Φ_1, Φ_1, …)` with `e = (e, e, …)` and `Δ = (Γ, Γ, …)`.
pub fn kz_tuple(params: &KzParams, l: usize) -> Result<DworkTuple<SeparableForm>> {
    let phi = SeparableForm::linear_power(&vec![params.master_exponent(1)?; params.n]);
    DworkTuple::constant(params.p, params.e, params.gamma(), phi, l)
}

/// The Newton intervals `N_i = [0, g·p^e + (p^e − 1)/q − g]` of the KZ tuple,
/// with `widen` added to the upper end.
pub fn kz_newton_intervals(params: &KzParams, l: usize, widen: i64) -> Result<Vec<LatticePolytopeT>> {
    let pe = i64::try_from(params.p_es(1)?).map_err(|_| Error::ExponentOverflow)?;
    let k = params.master_exponent(1)? as i64;
    let g = params.g as i64;
    Ok(vec![LatticePolytopeT::interval(0, g * pe + k - g + widen); l + 1])
}

/// `(Δ, e)`-admissibility of the KZ Newton intervals over `l` steps.
pub fn check_kz_admissible(params: &KzParams, l: usize) -> Result<CongruenceReport> {
    let gamma: IndexSet = params.gamma();
    check_admissible(params.p, &vec![params.e; l], &vec![gamma; l + 1], &kz_newton_intervals(params, l, 0)?)
}

fn witness_at(layout: VarLayout, what: String, f: &LaurentPoly, p: u64, cap: u32) -> (Valuation, Option<String>) {
    let (v, w) = f.min_valuation(p, cap);
    (v, w.map(|e| format!("{what} at {}", crate::dwork::monomial_text(layout, &e))))
}

fn worst(acc: &mut (Valuation, Option<String>), next: (Valuation, Option<String>)) {
    if next.0.value < acc.0.value {
        *acc = next;
    }
}

/// The KZ equations mod `p^{es}` for `I_s`, one report per `i` and one
/// for the column sums.
///
/// For each `i` the vector `q·∂_i I − Σ_{j≠i} Ω_{ij} I/(z_i − z_j)` is formed
/// after exact division by each `z_i − z_j` (a nonzero remainder fails the
/// check). This is the cleared operator `q·∏_{j≠i}(z_i − z_j)·∇_i` divided by a
/// primitive polynomial, so both vanish mod `p^{es}` together.
pub fn check_kz_solution(params: &KzParams, s: usize, guard: u32) -> Result<Vec<CongruenceReport>> {
    let sol = hypergeometric_solutions(params, s)?;
    let claimed = params.e * s as u32;
    let cap = claimed + guard;
    let (p, n, q) = (params.p, params.n, BigInt::from(params.q));
    let layout = VarLayout { r: 1, n };
    let mut out = Vec::new();
    for i in 0..n {
        let mut acc = (Valuation::saturated(cap), None);
        let mut divisible = true;
        for l in 0..params.g {
            let col = sol.column(l);
            // (I_i − I_j)/(z_i − z_j) for j ≠ i
            let mut diff = vec![LaurentPoly::zero(layout); n];
            for j in (0..n).filter(|&j| j != i) {
                match col[i].sub(&col[j])?.divide_by_difference(i, j) {
                    Some(h) => diff[j] = h,
                    None => divisible = false,
                }
            }
            for k in 0..n {
                let mut comp = col[k].derivative(i).scale(&q);
                if k == i {
                    for j in (0..n).filter(|&j| j != i) {
                        comp = comp.add(&diff[j])?;
                    }
                } else {
                    comp = comp.sub(&diff[k])?;
                }
                worst(&mut acc, witness_at(layout, format!("column {} row {}", l + 1, k + 1), &comp, p, cap));
            }
        }
        let report = if divisible {
            CongruenceReport::congruence("kz_equation", Mode::Symbolic, claimed, acc.0, acc.1)
        } else {
            CongruenceReport::predicate("kz_equation", Mode::Symbolic, false, Some("difference not divisible by z_i - z_j".into()))
        };
        out.push(report.with("s", s).with("i", i + 1));
    }
    let mut acc = (Valuation::saturated(cap), None);
    for l in 0..params.g {
        let sum = sol.column(l).iter().try_fold(LaurentPoly::zero(layout), |a, f| a.add(f))?;
        worst(&mut acc, witness_at(layout, format!("column {}", l + 1), &sum, p, cap));
    }
    out.push(CongruenceReport::congruence("kz_column_sum", Mode::Symbolic, claimed, acc.0, acc.1).with("s", s));
    Ok(out)
}

fn identity_report(check: &str, residual: &LaurentPoly, p: u64, what: String) -> CongruenceReport {
    if residual.is_zero() {
        CongruenceReport::identity(check, Mode::Symbolic, None, None)
    } else {
        let layout = residual.layout();
        let (v, w) = witness_at(layout, what, residual, p, 8);
        CongruenceReport::identity(check, Mode::Symbolic, Some(v), w)
    }
}

/// Exact identities behind the KZ congruences:
///
/// * `k_s·Σ_i Φ_s/(t − z_i) = ∂Φ_s/∂t`, compared coefficient by coefficient in `t`;
/// * `k_s·Σ_i I_{s,ℓ,i} = ℓp^{es}·Coeff_{ℓp^{es}}(Φ_s)`;
/// * for every `i`, `(∂_i + k_s Σ_{j≠i} Ω_{ij}/(z_i − z_j))(Φ_s/(t − z_k))_k = ∂Ψ_s^i/∂t`
///   with `Ψ_s^i = −Φ_s/(t − z_i)·e_i`, expanded in full (`full_operator`).
pub fn check_kz_identities(params: &KzParams, s: usize, full_operator: bool) -> Result<Vec<CongruenceReport>> {
    level(params, s)?;
    let (p, n) = (params.p, params.n);
    let k = BigInt::from(params.master_exponent(s)?);
    let phi = master_polynomial(params, s)?;
    let quotients = (0..n).map(|i| master_quotient(params, s, i)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();

    let mut bad = None;
    for c in 0..phi.t_degree() {
        let lhs = quotients.iter().try_fold(LaurentPoly::zero(phi.poly.layout()), |a, f| a.add(&f.coeff_t(c)?))?.scale(&k);
        let rhs = phi.poly.coeff_t(c + 1)?.scale(&BigInt::from(c + 1));
        let r = lhs.sub(&rhs)?;
        if !r.is_zero() {
            bad = Some(identity_report("kz_t_derivative_identity", &r, p, format!("t^{c}")));
            break;
        }
    }
    out.push(bad.unwrap_or_else(|| CongruenceReport::identity("kz_t_derivative_identity", Mode::Symbolic, None, None)).with("s", s));

    let sol = hypergeometric_solutions(params, s)?;
    let pes = params.p_es(s)? as i64;
    let mut report = CongruenceReport::identity("kz_column_sum_identity", Mode::Symbolic, None, None);
    for l in 1..=params.g {
        let sum = sol.column(l - 1).iter().try_fold(LaurentPoly::zero(phi.poly.layout()), |a, f| a.add(f))?.scale(&k);
        let rhs = phi.poly.coeff_t(l as i64 * pes)?.scale(&BigInt::from(l as i64 * pes));
        let r = sum.sub(&rhs)?;
        if !r.is_zero() {
            report = identity_report("kz_column_sum_identity", &r, p, format!("column {l}"));
            break;
        }
    }
    out.push(report.with("s", s));

    if full_operator {
        let layout = phi.poly.layout();
        let f: Vec<LaurentPoly> = quotients.iter().map(SeparableForm::to_laurent).collect::<Result<_>>()?;
        for i in 0..n {
            let mut report = CongruenceReport::identity("kz_operator_identity", Mode::Symbolic, None, None);
            let mut diff = vec![LaurentPoly::zero(layout); n];
            for j in (0..n).filter(|&j| j != i) {
                diff[j] = f[i].sub(&f[j])?.divide_by_difference(i, j).ok_or(Error::InvalidParams("quotient not divisible".into()))?;
            }
            let dt_psi = t_derivative(&f[i]).neg();
            for kk in 0..n {
                let mut lhs = f[kk].derivative(i);
                if kk == i {
                    for j in (0..n).filter(|&j| j != i) {
                        lhs = lhs.sub(&diff[j].scale(&k))?;
                    }
                } else {
                    lhs = lhs.add(&diff[kk].scale(&k))?;
                }
                let rhs = if kk == i { dt_psi.clone() } else { LaurentPoly::zero(layout) };
                let r = lhs.sub(&rhs)?;
                if !r.is_zero() {
                    report = identity_report("kz_operator_identity", &r, p, format!("row {}", kk + 1));
                    break;
                }
            }
            out.push(report.with("s", s).with("i", i + 1));
        }
    }
    Ok(out)
}

fn t_derivative(f: &LaurentPoly) -> LaurentPoly {
    let terms = f.terms().filter(|(e, _)| e[0] != 0).map(|(e, c)| {
        let mut k = e.clone();
        k[0] -= 1;
        (k, c * BigInt::from(e[0]))
    });
    LaurentPoly::from_terms(f.layout(), terms.collect::<Vec<_>>())
}

/// `∇A_{1,ℓ}(Φ_s) = ((1 − p^{es})/q)·I_{s,ℓ}` exactly, for every `ℓ`.
pub fn check_gradient_identity(params: &KzParams, s: usize) -> Result<CongruenceReport> {
    let a = hasse_witt_phi(params, s)?;
    let sol = hypergeometric_solutions(params, s)?;
    let factor = -BigInt::from(params.master_exponent(s)?);
    let mut report = CongruenceReport::identity("gradient_identity", Mode::Symbolic, None, None);
    'outer: for l in 0..params.g {
        for i in 0..params.n {
            let r = a.entries.get(0, l).derivative(i).sub(&sol.entries.get(i, l).scale(&factor))?;
            if !r.is_zero() {
                report = identity_report("gradient_identity", &r, params.p, format!("column {} row {}", l + 1, i + 1));
                break 'outer;
            }
        }
    }
    Ok(report.with("s", s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kz::make_params;

    #[test]
    fn smallest_case_solution_column() {
        let params = make_params(7, 3, 1).unwrap();
        let sol = hypergeometric_solutions(&params, 1).unwrap();
        let l = VarLayout { r: 1, n: 4 };
        for i in 0..4 {
            let mut expected = LaurentPoly::zero(l);
            for j in 0..4 {
                let c = if i == j { -1 } else { -2 };
                expected = expected.add(&LaurentPoly::z(l, j).scale(&BigInt::from(c))).unwrap();
            }
            assert_eq!(sol.entries.get(i, 0), &expected);
        }
        let phi = master_polynomial(&params, 2).unwrap();
        assert_eq!(phi.t_degree(), 64);
        assert!(phi.check_factorization(&params).unwrap().pass);
    }

    #[test]
    fn kz_congruences_and_identities() {
        let params = make_params(7, 3, 1).unwrap();
        for s in 1..=2 {
            let reports = check_kz_solution(&params, s, 2).unwrap();
            assert!(reports.iter().all(|r| r.pass), "{reports:?}");
            assert!(check_gradient_identity(&params, s).unwrap().pass);
        }
        let ids = check_kz_identities(&params, 1, true).unwrap();
        assert!(ids.iter().all(|r| r.pass), "{ids:?}");
    }

    #[test]
    fn newton_intervals_are_admissible() {
        assert!(check_kz_admissible(&make_params(7, 3, 1).unwrap(), 3).unwrap().pass);
        let params = make_params(13, 3, 2).unwrap();
        assert_eq!(kz_newton_intervals(&params, 1, 0).unwrap()[0].as_interval(), Some((0, 28)));
        assert!(check_kz_admissible(&params, 3).unwrap().pass);
    }

    #[test]
    fn columns_beyond_g_vanish() {
        let params = make_params(7, 3, 1).unwrap();
        let f = master_quotient(&params, 1, 0).unwrap();
        assert!(f.coeff_t(2 * 7 - 1).unwrap().is_zero());
    }

    #[test]
    fn column_degrees() {
        let params = make_params(13, 3, 2).unwrap();
        let sol = hypergeometric_solutions(&params, 1).unwrap();
        for l in 0..2 {
            let d = params.solution_column_degree(1, l + 1).unwrap();
            for i in 0..7 {
                assert_eq!(sol.entries.get(i, l).homogeneous_z_degree(), Some(d));
            }
        }
    }
}
