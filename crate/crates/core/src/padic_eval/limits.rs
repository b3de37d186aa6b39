use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dwork::{CongruenceReport, Mode};
use crate::kz::{GaudinData, KzParams, KzPoint};
use crate::ring::{Matrix, PadicRing, UnramifiedRing, Valuation};
use crate::{Error, Result};

/// Which limit a sequence approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitTarget {
    /// `A(Φ_s)·σ^e(A(Φ_{s−1}))^{−1}`, `g × g`.
    Ratio,
    /// `∂_i A(Φ_s)·A(Φ_s)^{−1}`, `g × g`.
    RatioDerivative(usize),
    /// `I_s·A(Φ_s)^{−1}`, `n × g`.
    Solutions,
    /// `∂_i I_s·A(Φ_s)^{−1}`, `n × g`.
    SolutionsDerivative(usize),
}

impl LimitTarget {
    pub fn name(&self) -> String {
        match self {
            LimitTarget::Ratio => "A".into(),
            LimitTarget::RatioDerivative(i) => format!("A^({})", i + 1),
            LimitTarget::Solutions => "I".into(),
            LimitTarget::SolutionsDerivative(i) => format!("I^({})", i + 1),
        }
    }
}

/// Values of one limit sequence at a point for `s = 1..=S`.
///
/// `increments[k]` holds the entrywise valuations of `X_{s+1} − X_s` for
/// `s = s_values[k]`; `certified_precision` is the largest `s` such that
/// `v_p(X_{t+1} − X_t) ≥ t` for every `t ≤ s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitApproximation {
    pub target: LimitTarget,
    pub s_values: Vec<usize>,
    pub matrices: Vec<Matrix<Vec<u64>>>,
    pub increments: Vec<Matrix<Valuation>>,
    /// `v_p(det X_s)` for square targets.
    pub det_valuations: Vec<Valuation>,
    pub certified_precision: usize,
}

impl LimitApproximation {
    fn new(ring: &UnramifiedRing, target: LimitTarget, matrices: Vec<Matrix<Vec<u64>>>) -> Self {
        let increments: Vec<Matrix<Valuation>> =
            matrices.windows(2).map(|w| w[1].sub(ring, &w[0]).map(|x| ring.valuation(x))).collect();
        let certified_precision = increments
            .iter()
            .enumerate()
            .take_while(|(k, m)| m.entries().iter().all(|v| v.at_least(*k as u32 + 1)))
            .count();
        let det_valuations = match matrices.first() {
            Some(x) if x.rows() == x.cols() => matrices.iter().map(|x| ring.valuation(&x.det(ring))).collect(),
            _ => Vec::new(),
        };
        LimitApproximation { target, s_values: (1..=matrices.len()).collect(), matrices, increments, det_valuations, certified_precision }
    }

    /// `v_p(X_{s+1} − X_s) ≥ s` for every computed increment.
    pub fn fully_certified(&self) -> bool {
        self.certified_precision == self.increments.len()
    }

    /// The smallest valuation of `X_{s+1} − X_s`.
    pub fn increment_valuation(&self, s: usize) -> Option<Valuation> {
        let m = self.increments.get(s.checked_sub(1)?)?;
        m.entries().iter().copied().reduce(Valuation::min)
    }
}

struct LevelValues {
    a: Matrix<Vec<u64>>,
    a_inv: Matrix<Vec<u64>>,
    i: Matrix<Vec<u64>>,
    da: Vec<Matrix<Vec<u64>>>,
    di: Vec<Matrix<Vec<u64>>>,
    d2a: Vec<Vec<Matrix<Vec<u64>>>>,
    /// `A(Φ_s)` at `σ^e(a)`.
    a_sigma: Matrix<Vec<u64>>,
}

/// Every level-`s` object at one point for `s = 1..=levels`, with `A(Φ_s)^{−1}`
/// precomputed. `σ^e` at the point is the coordinatewise `p^e`-th power.
pub struct PointEvaluation<'a> {
    params: &'a KzParams,
    ring: &'a UnramifiedRing,
    a: Vec<Vec<u64>>,
    levels: Vec<LevelValues>,
}

impl<'a> PointEvaluation<'a> {
    /// Fails with `SingularModP` when some `A(Φ_s)(a)` is not invertible.
    pub fn new(params: &'a KzParams, ring: &'a UnramifiedRing, a: Vec<Vec<u64>>, levels: usize) -> Result<Self> {
        let point = KzPoint::new(params, ring, a.clone())?;
        let shifted: Vec<Vec<u64>> = a.iter().map(|x| ring.frobenius(x, params.e)).collect();
        let sigma_point = (shifted != a).then(|| KzPoint::new(params, ring, shifted)).transpose()?;
        let n = params.n;
        let mut out = Vec::with_capacity(levels);
        for s in 1..=levels {
            let level = point.level(s)?;
            let a_mat = level.hasse_witt();
            let a_inv = a_mat.inverse(ring).map_err(|_| Error::SingularModP)?;
            let a_sigma = match &sigma_point {
                Some(sp) => sp.level(s)?.hasse_witt(),
                None => a_mat.clone(),
            };
            out.push(LevelValues {
                i: level.solutions(),
                da: (0..n).map(|j| level.hasse_witt_derivative(j)).collect(),
                di: (0..n).map(|j| level.solutions_derivative(j)).collect(),
                d2a: (0..n).map(|u| (0..n).map(|v| level.hasse_witt_second_derivative(u, v)).collect()).collect(),
                a: a_mat,
                a_inv,
                a_sigma,
            });
        }
        Ok(PointEvaluation { params, ring, a, levels: out })
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    pub fn coordinates(&self) -> &[Vec<u64>] {
        &self.a
    }

    fn at(&self, s: usize) -> Result<&LevelValues> {
        s.checked_sub(1).and_then(|k| self.levels.get(k)).ok_or_else(|| Error::InvalidParams(format!("level {s} was not computed")))
    }

    /// `B_s = A(Φ_s)(a)·A(Φ_{s−1})(σ^e a)^{−1}` with `B_1 = A(Φ_1)(a)`.
    pub fn ratio(&self, s: usize) -> Result<Matrix<Vec<u64>>> {
        let cur = self.at(s)?;
        if s == 1 {
            return Ok(cur.a.clone());
        }
        let prev = self.at(s - 1)?.a_sigma.inverse(self.ring).map_err(|_| Error::SingularModP)?;
        Ok(cur.a.mul(self.ring, &prev))
    }

    /// `𝓘_s = I_s·A(Φ_s)^{−1}`.
    pub fn solution_bundle(&self, s: usize) -> Result<Matrix<Vec<u64>>> {
        let l = self.at(s)?;
        Ok(l.i.mul(self.ring, &l.a_inv))
    }

    /// `𝓘^{(i)}_s = ∂_i I_s·A(Φ_s)^{−1}`.
    pub fn solution_bundle_derivative(&self, s: usize, i: usize) -> Result<Matrix<Vec<u64>>> {
        let l = self.at(s)?;
        Ok(l.di[i].mul(self.ring, &l.a_inv))
    }

    /// `𝒜^{(i)}_s = ∂_i A(Φ_s)·A(Φ_s)^{−1}`.
    pub fn ratio_derivative(&self, s: usize, i: usize) -> Result<Matrix<Vec<u64>>> {
        let l = self.at(s)?;
        Ok(l.da[i].mul(self.ring, &l.a_inv))
    }

    /// `𝒜^{(u,v)}_s = ∂_u∂_v A(Φ_s)·A(Φ_s)^{−1}`.
    pub fn ratio_second_derivative(&self, s: usize, u: usize, v: usize) -> Result<Matrix<Vec<u64>>> {
        let l = self.at(s)?;
        Ok(l.d2a[u][v].mul(self.ring, &l.a_inv))
    }

    fn sequence(&self, target: LimitTarget, f: impl Fn(usize) -> Result<Matrix<Vec<u64>>>) -> Result<LimitApproximation> {
        let matrices = (1..=self.levels()).map(f).collect::<Result<Vec<_>>>()?;
        Ok(LimitApproximation::new(self.ring, target, matrices))
    }

    pub fn ratio_sequence(&self) -> Result<LimitApproximation> {
        self.sequence(LimitTarget::Ratio, |s| self.ratio(s))
    }

    pub fn solution_bundle_sequence(&self) -> Result<LimitApproximation> {
        self.sequence(LimitTarget::Solutions, |s| self.solution_bundle(s))
    }

    /// The `𝓘^{(i)}` and `𝒜^{(i)}` sequences.
    pub fn derivative_bundle_sequence(&self, i: usize) -> Result<(LimitApproximation, LimitApproximation)> {
        Ok((
            self.sequence(LimitTarget::SolutionsDerivative(i), |s| self.solution_bundle_derivative(s, i))?,
            self.sequence(LimitTarget::RatioDerivative(i), |s| self.ratio_derivative(s, i))?,
        ))
    }

    fn report(&self, check: &str, residual: &Matrix<Vec<u64>>, claimed: u32) -> CongruenceReport {
        let mut best = Valuation::saturated(self.ring.precision());
        let mut witness = None;
        for r in 0..residual.rows() {
            for c in 0..residual.cols() {
                let v = self.ring.valuation(residual.get(r, c));
                if v.value < best.value {
                    best = v;
                    witness = Some(format!("entry ({}, {})", r + 1, c + 1));
                }
            }
        }
        CongruenceReport::congruence(check, Mode::Evaluation, claimed, best, witness)
    }

    fn require(&self, claimed: u32) -> Result<()> {
        if self.ring.precision() < claimed {
            return Err(Error::InvalidParams(format!("precision {} below the claimed exponent {claimed}", self.ring.precision())));
        }
        Ok(())
    }

    /// `𝓘^{(i)}_s(a) ≡ H_i(a)·𝓘_s(a) (mod p^{es})` for every `i`. Needs unit
    /// differences `a_i − a_j`.
    pub fn check_gaudin_relation(&self, s: usize) -> Result<Vec<CongruenceReport>> {
        let claimed = self.params.e * s as u32;
        self.require(claimed)?;
        let gaudin = GaudinData::new(self.params);
        let bundle = self.solution_bundle(s)?;
        (0..self.params.n)
            .map(|i| {
                let h = gaudin.hamiltonian_at(self.ring, &self.a, i)?;
                let residual = self.solution_bundle_derivative(s, i)?.sub(self.ring, &h.mul(self.ring, &bundle));
                Ok(self.report("gaudin_relation", &residual, claimed).with("s", s).with("i", i + 1))
            })
            .collect()
    }

    /// `∂_u 𝒜_v = 𝒜_{uv} − 𝒜_v 𝒜_u` across levels: the exact level-`s`
    /// derivative of `∂_v A(Φ_s)·A(Φ_s)^{−1}` against
    /// `𝒜^{(u,v)}_{s+1} − 𝒜^{(v)}_{s+1}𝒜^{(u)}_{s+1}`, mod `p^s`.
    pub fn check_connection_identity(&self, s: usize, u: usize, v: usize) -> Result<CongruenceReport> {
        let claimed = s as u32;
        if s == 0 {
            return Ok(CongruenceReport::congruence("connection_identity", Mode::Evaluation, 0, Valuation::saturated(0), None));
        }
        self.require(claimed)?;
        let ring = self.ring;
        let l = self.at(s)?;
        let av = self.ratio_derivative(s, v)?;
        let au = self.ratio_derivative(s, u)?;
        // ∂_u(∂_v A·A^{−1}) = ∂_u∂_v A·A^{−1} − ∂_v A·A^{−1}·∂_u A·A^{−1}
        let lhs = l.d2a[u][v].mul(ring, &l.a_inv).sub(ring, &av.mul(ring, &au));
        let rhs = self
            .ratio_second_derivative(s + 1, u, v)?
            .sub(ring, &self.ratio_derivative(s + 1, v)?.mul(ring, &self.ratio_derivative(s + 1, u)?));
        Ok(self.report("connection_identity", &lhs.sub(ring, &rhs), claimed).with("s", s).with("u", u + 1).with("v", v + 1))
    }

    /// The `g × g` minor of `𝓘_1(a)` in rows `q(g − ℓ) + 1` is a unit.
    pub fn rank_check(&self) -> Result<CongruenceReport> {
        let rows: Vec<usize> = self.params.minor_rows().iter().map(|r| r - 1).collect();
        let minor = self.solution_bundle(1)?.select_rows(&rows).det(self.ring);
        let v = self.ring.valuation(&minor);
        let unit = v.value == 0 && !v.saturated;
        Ok(CongruenceReport::predicate("rank_minor_unit", Mode::Evaluation, unit, Some(format!("minor valuation {}", v.value))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kz::make_params;
    use crate::padic_eval::{find_domain_points, point_ring};

    #[test]
    fn smallest_case_at_an_integer_point() {
        let params = make_params(7, 3, 1).unwrap();
        let ring = point_ring(7, 1, 5).unwrap();
        let a: Vec<Vec<u64>> = [1, 2, 3, 4].iter().map(|x| ring.embed(*x)).collect();
        let eval = PointEvaluation::new(&params, &ring, a, 4).unwrap();
        assert_eq!(eval.ratio(1).unwrap().get(0, 0), &ring.embed(170));
        let ratio = eval.ratio_sequence().unwrap();
        assert!(ratio.fully_certified(), "{:?}", ratio.increments);
        assert!(ratio.det_valuations.iter().all(|v| v.value == 0));
        assert!(eval.solution_bundle_sequence().unwrap().fully_certified());
        let (di, da) = eval.derivative_bundle_sequence(2).unwrap();
        assert!(di.fully_certified() && da.fully_certified());
        for s in 1..=2 {
            assert!(eval.check_gaudin_relation(s).unwrap().iter().all(|r| r.pass));
            for (u, v) in [(0, 0), (0, 3), (2, 1)] {
                let r = eval.check_connection_identity(s, u, v).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
        assert!(eval.rank_check().unwrap().pass);
    }

    #[test]
    fn certified_sequences_in_a_quadratic_extension() {
        let params = make_params(13, 3, 2).unwrap();
        let ring = point_ring(13, 2, 4).unwrap();
        let point = find_domain_points(&params, &ring, 1, 3).unwrap().remove(0);
        let eval = PointEvaluation::new(&params, &ring, point.a, 3).unwrap();
        let ratio = eval.ratio_sequence().unwrap();
        assert_eq!(ratio.certified_precision, 2, "{:?}", ratio.increments);
        assert!(ratio.det_valuations.iter().all(|v| v.value == 0));
        assert!(eval.solution_bundle_sequence().unwrap().fully_certified());
        assert!(eval.check_gaudin_relation(2).unwrap().iter().all(|r| r.pass));
    }

    #[test]
    fn wrong_levels_fail() {
        let params = make_params(7, 3, 1).unwrap();
        let ring = point_ring(7, 1, 4).unwrap();
        let a: Vec<Vec<u64>> = [1, 2, 3, 4].iter().map(|x| ring.embed(*x)).collect();
        let eval = PointEvaluation::new(&params, &ring, a, 2).unwrap();
        assert!(eval.check_connection_identity(2, 0, 1).is_err());
        // B_2 and B_1 agree mod p only
        assert_eq!(eval.ratio_sequence().unwrap().increment_valuation(1).map(|v| v.value >= 2), Some(false));
    }
}
