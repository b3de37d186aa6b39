use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::KzParams;
use crate::dwork::{CongruenceReport, Mode};
use crate::ring::{Matrix, PadicRing, Ring, TPoly, Valuation};
use crate::{Error, Result};

/// `P(t) = ∏(t − a_i)` at a point `a`, ready to produce the level-`s`
/// objects `A(Φ_s)(a)`, `I_s(a)` and their `z`-derivatives.
pub struct KzPoint<'a, R: Ring> {
    params: &'a KzParams,
    ring: &'a R,
    a: Vec<R::Elem>,
    p_poly: TPoly<R::Elem>,
    quotients: Vec<TPoly<R::Elem>>,
}

/// The level-`s` data at one point: `P^{k−2}` and `P^{k−1}` with
/// `k = (p^{es} − 1)/q`. Every object is a single coefficient of one of
/// these times a product of at most two of the `Q_i = P/(t − a_i)`.
pub struct KzLevel<'p, 'a, R: Ring> {
    point: &'p KzPoint<'a, R>,
    pub s: usize,
    pes: i64,
    k: u64,
    base: TPoly<R::Elem>,
    base_p: TPoly<R::Elem>,
}

fn linear<R: Ring>(ring: &R, root: &R::Elem) -> TPoly<R::Elem> {
    TPoly::from_coeffs(ring, 0, vec![ring.neg(root), ring.one()])
}

impl<'a, R: Ring> KzPoint<'a, R> {
    pub fn new(params: &'a KzParams, ring: &'a R, a: Vec<R::Elem>) -> Result<Self> {
        if a.len() != params.n {
            return Err(Error::InvalidParams(format!("point has {} coordinates, expected {}", a.len(), params.n)));
        }
        let factors: Vec<_> = a.iter().map(|x| linear(ring, x)).collect();
        let p_poly = factors.iter().fold(TPoly::one(ring), |acc, f| acc.mul(ring, f));
        let quotients = (0..a.len())
            .map(|i| factors.iter().enumerate().filter(|(j, _)| *j != i).fold(TPoly::one(ring), |acc, (_, f)| acc.mul(ring, f)))
            .collect();
        Ok(KzPoint { params, ring, a, p_poly, quotients })
    }

    pub fn coordinates(&self) -> &[R::Elem] {
        &self.a
    }

    pub fn params(&self) -> &KzParams {
        self.params
    }

    pub fn level(&self, s: usize) -> Result<KzLevel<'_, 'a, R>> {
        if s == 0 {
            return Err(Error::InvalidParams("levels start at s = 1".into()));
        }
        let k = self.params.master_exponent(s)?;
        if k < 2 {
            return Err(Error::InvalidParams(format!("master exponent {k} below 2")));
        }
        let pes = i64::try_from(self.params.p_es(s)?).map_err(|_| Error::ExponentOverflow)?;
        let base = self.p_poly.pow(self.ring, k - 2);
        let base_p = base.mul(self.ring, &self.p_poly);
        Ok(KzLevel { point: self, s, pes, k, base, base_p })
    }
}

impl<R: Ring> KzLevel<'_, '_, R> {
    fn ring(&self) -> &R {
        self.point.ring
    }

    fn g(&self) -> usize {
        self.point.params.g
    }

    fn n(&self) -> usize {
        self.point.params.n
    }

    fn scalar(&self, c: i64) -> R::Elem {
        self.ring().from_i64(c)
    }

    fn hw_index(&self, u: usize, v: usize) -> i64 {
        self.pes * (v as i64 + 1) - (u as i64 + 1)
    }

    fn sol_index(&self, l: usize) -> i64 {
        self.pes * (l as i64 + 1) - 1
    }

    fn quotient_product(&self, i: usize, j: usize) -> TPoly<R::Elem> {
        self.point.quotients[i].mul(self.ring(), &self.point.quotients[j])
    }

    /// `A(Φ_s)(a)`, `g × g`.
    pub fn hasse_witt(&self) -> Matrix<R::Elem> {
        let ring = self.ring();
        Matrix::from_fn(self.g(), self.g(), |u, v| self.base_p.product_coeff(ring, &self.point.p_poly, self.hw_index(u, v)))
    }

    /// `I_s(a)`, `n × g`.
    pub fn solutions(&self) -> Matrix<R::Elem> {
        let ring = self.ring();
        Matrix::from_fn(self.n(), self.g(), |i, l| self.base_p.product_coeff(ring, &self.point.quotients[i], self.sol_index(l)))
    }

    /// `∂A(Φ_s)/∂z_j` at `a`.
    pub fn hasse_witt_derivative(&self, j: usize) -> Matrix<R::Elem> {
        let ring = self.ring();
        let c = self.scalar(-(self.k as i64));
        Matrix::from_fn(self.g(), self.g(), |u, v| ring.mul(&c, &self.base_p.product_coeff(ring, &self.point.quotients[j], self.hw_index(u, v))))
    }

    /// `∂I_s/∂z_j` at `a`.
    pub fn solutions_derivative(&self, j: usize) -> Matrix<R::Elem> {
        let ring = self.ring();
        let k = self.k as i64;
        let rows: Vec<(R::Elem, TPoly<R::Elem>)> =
            (0..self.n()).map(|i| (if i == j { self.scalar(1 - k) } else { self.scalar(-k) }, self.quotient_product(i, j))).collect();
        Matrix::from_fn(self.n(), self.g(), |i, l| ring.mul(&rows[i].0, &self.base.product_coeff(ring, &rows[i].1, self.sol_index(l))))
    }

    /// `∂²A(Φ_s)/∂z_u∂z_v` at `a`.
    pub fn hasse_witt_second_derivative(&self, u: usize, v: usize) -> Matrix<R::Elem> {
        let ring = self.ring();
        let k = self.k as i64;
        let c = if u == v { self.scalar(k * (k - 1)) } else { self.scalar(k * k) };
        let f = self.quotient_product(u, v);
        Matrix::from_fn(self.g(), self.g(), |x, y| ring.mul(&c, &self.base.product_coeff(ring, &f, self.hw_index(x, y))))
    }
}

/// Valuation of a residual matrix, with the first entry attaining it.
pub(crate) fn residual_valuation<R: PadicRing>(ring: &R, m: &Matrix<R::Elem>) -> (Valuation, Option<alloc::string::String>) {
    let mut best = Valuation::saturated(ring.precision());
    let mut witness = None;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = ring.valuation(m.get(i, j));
            if v.value < best.value {
                best = v;
                witness = Some(format!("entry ({}, {})", i + 1, j + 1));
            }
        }
    }
    (best, witness)
}

pub(crate) fn require_precision<R: PadicRing>(ring: &R, claimed: u32) -> Result<()> {
    if ring.precision() < claimed {
        return Err(Error::InvalidParams(format!("precision {} below the claimed exponent {claimed}", ring.precision())));
    }
    Ok(())
}

/// `X_1·adj(A_1)·det A_2 − X_2·adj(A_2)·det A_1`.
fn cross_residual<R: Ring>(ring: &R, x1: &Matrix<R::Elem>, a1: &Matrix<R::Elem>, x2: &Matrix<R::Elem>, a2: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let lhs = x1.mul(ring, &a1.adjugate(ring)).scale(ring, &a2.det(ring));
    let rhs = x2.mul(ring, &a2.adjugate(ring)).scale(ring, &a1.det(ring));
    lhs.sub(ring, &rhs)
}

fn compare_levels<R: PadicRing>(
    check: &str,
    point: &KzPoint<'_, R>,
    hi: &KzLevel<'_, '_, R>,
    lo: &KzLevel<'_, '_, R>,
    claimed: u32,
) -> Vec<CongruenceReport> {
    let ring = point.ring;
    let (ahi, alo) = (hi.hasse_witt(), lo.hasse_witt());
    let mut out = Vec::with_capacity(point.params.n + 1);
    let report = |name: &str, residual: Matrix<R::Elem>| {
        let (v, w) = residual_valuation(ring, &residual);
        CongruenceReport::congruence(name, Mode::Evaluation, claimed, v, w).with("s", lo.s).with("s2", hi.s)
    };
    out.push(report(check, cross_residual(ring, &hi.solutions(), &ahi, &lo.solutions(), &alo)));
    let derivative_check = format!("{check}_derivative");
    for j in 0..point.params.n {
        let r = cross_residual(ring, &hi.solutions_derivative(j), &ahi, &lo.solutions_derivative(j), &alo);
        out.push(report(&derivative_check, r).with("j", j + 1));
    }
    out
}

/// At the point `a`: `I_{s+1}·A(Φ_{s+1})^{−1} ≡ I_s·A(Φ_s)^{−1} (mod p^s)` and
/// the same with `∂I/∂z_j` for every `j`, all cross-multiplied through adjugates.
pub fn check_solution_congruences_at<R: PadicRing>(params: &KzParams, ring: &R, a: Vec<R::Elem>, s: usize) -> Result<Vec<CongruenceReport>> {
    let claimed = s as u32;
    require_precision(ring, claimed)?;
    let point = KzPoint::new(params, ring, a)?;
    let lo = point.level(s)?;
    let hi = point.level(s + 1)?;
    Ok(compare_levels("solution_congruence", &point, &hi, &lo, claimed))
}

/// At the point `a`: `I_s·A(Φ_s)^{−1} ≡ I_1·A(Φ_1)^{−1} (mod p)` and the
/// `∂/∂z_j` variants.
pub fn check_mod_p_stability_at<R: PadicRing>(params: &KzParams, ring: &R, a: Vec<R::Elem>, s: usize) -> Result<Vec<CongruenceReport>> {
    require_precision(ring, 1)?;
    let point = KzPoint::new(params, ring, a)?;
    let lo = point.level(1)?;
    let hi = point.level(s)?;
    Ok(compare_levels("mod_p_stability", &point, &hi, &lo, 1))
}

/// The KZ equations at the point `a`: `∂_i I_s ≡ H_i(a)·I_s (mod p^{es})` for
/// every `i`, and the column sums of `I_s(a)` vanish mod `p^{es}`. Needs unit
/// differences `a_i − a_j`.
pub fn check_kz_solution_at<R: PadicRing>(params: &KzParams, ring: &R, a: Vec<R::Elem>, s: usize) -> Result<Vec<CongruenceReport>> {
    let claimed = params.e * s as u32;
    require_precision(ring, claimed)?;
    let gaudin = super::GaudinData::new(params);
    let point = KzPoint::new(params, ring, a)?;
    let level = point.level(s)?;
    let sol = level.solutions();
    let mut out = Vec::with_capacity(params.n + 1);
    for i in 0..params.n {
        let h = gaudin.hamiltonian_at(ring, point.coordinates(), i)?;
        let residual = level.solutions_derivative(i).sub(ring, &h.mul(ring, &sol));
        let (v, w) = residual_valuation(ring, &residual);
        out.push(CongruenceReport::congruence("kz_equation", Mode::Evaluation, claimed, v, w).with("s", s).with("i", i + 1));
    }
    let ones = Matrix::from_fn(1, params.n, |_, _| ring.one());
    let (v, w) = residual_valuation(ring, &ones.mul(ring, &sol));
    out.push(CongruenceReport::congruence("kz_column_sum", Mode::Evaluation, claimed, v, w).with("s", s));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kz::{hasse_witt_phi, hypergeometric_solutions, make_params};
    use crate::laurent::LaurentPoly;
    use crate::ring::{ModulusContext, UnramifiedRing};

    fn eval<R: Ring>(ring: &R, f: &LaurentPoly, a: &[R::Elem]) -> R::Elem {
        f.evaluate(ring, a, None).unwrap()
    }

    #[test]
    fn point_values_match_symbolic_objects() {
        let params = make_params(13, 3, 2).unwrap();
        let ring = UnramifiedRing::new(13, 2, 4).unwrap();
        let a: Vec<Vec<u64>> = (0..7).map(|i| vec![i as u64 + 2, 3 * i as u64 + 1]).collect();
        let point = KzPoint::new(&params, &ring, a.clone()).unwrap();
        let level = point.level(1).unwrap();
        let hw = hasse_witt_phi(&params, 1).unwrap().entries;
        let sol = hypergeometric_solutions(&params, 1).unwrap().entries;
        assert_eq!(level.hasse_witt(), hw.map(|f| eval(&ring, f, &a)));
        assert_eq!(level.solutions(), sol.map(|f| eval(&ring, f, &a)));
        for j in [0, 3, 6] {
            assert_eq!(level.hasse_witt_derivative(j), hw.map(|f| eval(&ring, &f.derivative(j), &a)));
            assert_eq!(level.solutions_derivative(j), sol.map(|f| eval(&ring, &f.derivative(j), &a)));
            for u in [j, 1] {
                assert_eq!(level.hasse_witt_second_derivative(u, j), hw.map(|f| eval(&ring, &f.derivative(j).derivative(u), &a)));
            }
        }
    }

    #[test]
    fn congruences_at_points() {
        let params = make_params(7, 3, 1).unwrap();
        let ring = ModulusContext::new(7, 4).unwrap();
        for a in [[1, 2, 3, 4], [3, 5, 9, 20]] {
            let a: Vec<u64> = a.iter().map(|x| ring.from_i64(*x)).collect();
            for s in 1..=2 {
                let r = check_solution_congruences_at(&params, &ring, a.clone(), s).unwrap();
                assert!(r.iter().all(|x| x.pass), "{r:?}");
            }
            let r = check_mod_p_stability_at(&params, &ring, a, 3).unwrap();
            assert!(r.iter().all(|x| x.pass), "{r:?}");
        }
    }

    #[test]
    fn kz_equations_at_points() {
        let params = make_params(13, 3, 2).unwrap();
        let ring = UnramifiedRing::new(13, 2, 3).unwrap();
        let a: Vec<Vec<u64>> = (0..7).map(|i| vec![i as u64 + 2, 5]).collect();
        for s in 1..=2 {
            let r = check_kz_solution_at(&params, &ring, a.clone(), s).unwrap();
            assert!(r.iter().all(|x| x.pass), "{r:?}");
        }
        let mut close = a;
        close[1] = vec![2 + 13, 5];
        assert!(matches!(check_kz_solution_at(&params, &ring, close, 1), Err(Error::NotAUnit)));
    }

    #[test]
    fn low_precision_is_refused() {
        let params = make_params(7, 3, 1).unwrap();
        let ring = ModulusContext::new(7, 1).unwrap();
        let a = vec![1, 2, 3, 4];
        assert!(matches!(check_solution_congruences_at(&params, &ring, a, 2), Err(Error::InvalidParams(_))));
    }
}
