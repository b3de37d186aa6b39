use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::report::{CongruenceReport, Mode};
use super::{DworkTuple, TuplePoly};
use crate::laurent::{LatticePolytopeT, VarLayout};
use crate::{Error, Result};

/// Ghost polynomials `V_0..V_L` of a tuple together with the partial
/// products `W_s^{(j)} = ∏_{i=j}^{s} Λ_i^{p^{E_i − E_j}}`.
///
/// `V_0 = Λ_0` and `V_s = W_s − Σ_{j=1}^{s} V_{j−1}·σ^{E_j}(W_s^{(j)})`
/// where `W_s = W_s^{(0)}` and `σ` acts on all variables.
#[derive(Clone, Debug)]
pub struct GhostSequence<P> {
    tuple: DworkTuple<P>,
    v: Vec<P>,
    w: Vec<Vec<P>>,
}

impl<P: TuplePoly> GhostSequence<P> {
    /// All levels `0..=l`.
    pub fn new(tuple: &DworkTuple<P>) -> Result<Self> {
        Self::up_to(tuple, tuple.l())
    }

    /// Levels `0..=level` only; the higher tuple entries are kept for
    /// Hasse–Witt matrices that reach one step further.
    pub fn up_to(tuple: &DworkTuple<P>, level: usize) -> Result<Self> {
        if level > tuple.l() {
            return Err(Error::InvalidTuple(format!("level {level} exceeds l = {}", tuple.l())));
        }
        let p = tuple.p();
        let lambda = tuple.lambda();
        let mut w: Vec<Vec<P>> = Vec::with_capacity(level + 1);
        for s in 0..=level {
            let mut row = Vec::with_capacity(s + 1);
            for j in 0..=s {
                let k = tuple.cumulative(s) - tuple.cumulative(j);
                let power = lambda[s].pow(p.checked_pow(k).ok_or(Error::ExponentOverflow)?)?;
                row.push(if j == s { power } else { w[s - 1][j].mul(&power)? });
            }
            w.push(row);
        }
        let mut v: Vec<P> = vec![lambda[0].clone()];
        for s in 1..=level {
            let mut acc = w[s][0].clone();
            for j in 1..=s {
                let shifted = w[s][j].sigma_all(p, tuple.cumulative(j))?;
                acc = acc.sub(&v[j - 1].mul(&shifted)?)?;
            }
            v.push(acc);
        }
        Ok(GhostSequence { tuple: tuple.clone(), v, w })
    }

    pub fn tuple(&self) -> &DworkTuple<P> {
        &self.tuple
    }

    /// Highest level computed.
    pub fn level(&self) -> usize {
        self.v.len() - 1
    }

    pub fn ghost(&self, s: usize) -> &P {
        &self.v[s]
    }

    pub fn ghosts(&self) -> &[P] {
        &self.v
    }

    /// `W_s^{(j)}`; the empty product `j = s + 1` is `1`.
    pub fn partial(&self, s: usize, j: usize) -> P {
        if j == s + 1 {
            self.tuple.lambda()[0].one_like()
        } else {
            self.w[s][j].clone()
        }
    }

    /// `W_s`.
    pub fn product(&self, s: usize) -> &P {
        &self.w[s][0]
    }

    pub fn layout(&self) -> VarLayout {
        self.v[0].layout()
    }
}

pub(crate) fn monomial_text(layout: VarLayout, e: &[i32]) -> String {
    let mut parts = Vec::new();
    for (k, x) in e.iter().enumerate() {
        if *x != 0 {
            let name = if k < layout.r { format!("t{}", k + 1) } else { format!("z{}", k - layout.r + 1) };
            parts.push(format!("{name}^{x}"));
        }
    }
    if parts.is_empty() {
        String::from("1")
    } else {
        parts.join("*")
    }
}

/// `V_s ≡ 0 (mod p^s)` for every computed level, scanned at precision
/// `s + guard`.
pub fn check_ghost_divisibility<P: TuplePoly>(seq: &GhostSequence<P>, guard: u32) -> Result<Vec<CongruenceReport>> {
    let p = seq.tuple().p();
    if seq.level() == 0 {
        return Ok(vec![CongruenceReport::predicate("ghost_divisibility", Mode::Symbolic, true, None).with("s", 0u32)]);
    }
    let mut out = Vec::new();
    for s in 1..=seq.level() {
        let claimed = s as u32;
        let (v, w) = seq.ghost(s).min_valuation(p, claimed + guard)?;
        let witness = w.map(|e| monomial_text(seq.layout(), &e));
        out.push(CongruenceReport::congruence("ghost_divisibility", Mode::Symbolic, claimed, v, witness).with("s", s));
    }
    Ok(out)
}

/// The recursion re-expanded: `W_s − V_s − Σ_j V_{j−1}·σ^{E_j}(W_s^{(j)}) = 0`.
pub fn check_reconstruction<P: TuplePoly>(seq: &GhostSequence<P>) -> Result<Vec<CongruenceReport>> {
    let p = seq.tuple().p();
    let mut out = Vec::new();
    for s in 0..=seq.level() {
        let mut residual = seq.product(s).sub(seq.ghost(s))?;
        for j in 1..=s {
            let shifted = seq.partial(s, j).sigma_all(p, seq.tuple().cumulative(j))?;
            residual = residual.sub(&seq.ghost(j - 1).mul(&shifted)?)?;
        }
        let (val, wit) = if residual.is_zero() {
            (None, None)
        } else {
            let (v, w) = residual.min_valuation(p, 8)?;
            (Some(v), w.map(|e| monomial_text(seq.layout(), &e)))
        };
        out.push(CongruenceReport::identity("ghost_reconstruction", Mode::Symbolic, val, wit).with("s", s));
    }
    Ok(out)
}

/// `N(V_s) ⊂ Σ_{i ≤ s} p^{E_i} N(Λ_i)` using the tuple's own polytopes.
pub fn check_newton_inclusion<P: TuplePoly>(seq: &GhostSequence<P>) -> Result<Vec<CongruenceReport>> {
    let declared = seq.tuple().lambda().iter().map(TuplePoly::newton_polytope_t).collect::<Result<Vec<_>>>()?;
    check_newton_inclusion_with(seq, &declared)
}

/// As [`check_newton_inclusion`] against caller-supplied polytopes `N_i`.
pub fn check_newton_inclusion_with<P: TuplePoly>(seq: &GhostSequence<P>, declared: &[LatticePolytopeT]) -> Result<Vec<CongruenceReport>> {
    if seq.layout().r != 1 {
        return Err(Error::DimensionUnsupported("Newton inclusion is checked for one t variable".into()));
    }
    let p = seq.tuple().p() as i64;
    let mut out = Vec::new();
    for s in 0..=seq.level() {
        let mut target = declared[0].clone();
        for i in 1..=s {
            let scale = p.pow(seq.tuple().cumulative(i));
            target = target.add_scaled(&declared[i], scale).ok_or(Error::DimensionUnsupported("interval polytopes expected".into()))?;
        }
        let (lo, hi) = target.as_interval().unwrap();
        let ghost = seq.ghost(s);
        let report = if ghost.is_zero() {
            CongruenceReport::predicate("newton_inclusion", Mode::Symbolic, true, None)
        } else {
            let support = ghost.newton_polytope_t()?;
            let (a, b) = support.as_interval().unwrap();
            let outside = if a < lo {
                Some(a)
            } else if b > hi {
                Some(b)
            } else {
                None
            };
            CongruenceReport::predicate("newton_inclusion", Mode::Symbolic, outside.is_none(), outside.map(|k| format!("t1^{k}")))
        };
        out.push(report.with("s", s).with("target", vec![lo, hi]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dwork::IndexSet;
    use crate::laurent::{LaurentPoly, SeparableForm};
    use num_bigint::BigInt;

    fn layout() -> VarLayout {
        VarLayout::new(1, 2).unwrap()
    }

    fn sample(c: i64) -> LaurentPoly {
        let l = layout();
        let t = LaurentPoly::t(l, 0);
        let z0 = LaurentPoly::z(l, 0);
        let z1 = LaurentPoly::z(l, 1);
        t.add(&z0.scale(&BigInt::from(c))).unwrap().mul(&t.sub(&z1).unwrap()).unwrap().add(&LaurentPoly::constant(l, 1)).unwrap()
    }

    #[test]
    fn level_zero_and_constant_tuples() {
        let tuple = DworkTuple::constant(3, 1, IndexSet::range(1), sample(1), 0).unwrap();
        let seq = GhostSequence::new(&tuple).unwrap();
        assert_eq!(seq.ghost(0), &sample(1));
        assert!(check_ghost_divisibility(&seq, 2).unwrap()[0].pass);

        let one = LaurentPoly::one(layout());
        let tuple = DworkTuple::constant(3, 1, IndexSet::range(1), one, 3).unwrap();
        let seq = GhostSequence::new(&tuple).unwrap();
        for s in 1..=3 {
            assert!(seq.ghost(s).is_zero());
        }
    }

    #[test]
    fn first_ghost_closed_form() {
        let tuple = DworkTuple::new(3, vec![1], vec![IndexSet::range(1); 2], vec![sample(1), sample(2)]).unwrap();
        let seq = GhostSequence::new(&tuple).unwrap();
        let l1 = sample(2);
        let expected = sample(1).mul(&l1.pow(3).unwrap().sub(&l1.sigma_subst(3, 1, crate::laurent::SigmaScope::All).unwrap()).unwrap()).unwrap();
        assert_eq!(seq.ghost(1), &expected);
    }

    #[test]
    fn divisibility_reconstruction_and_support() {
        let tuple = DworkTuple::new(3, vec![1, 1], vec![IndexSet::range(1); 3], vec![sample(1), sample(2), sample(-1)]).unwrap();
        let seq = GhostSequence::new(&tuple).unwrap();
        for r in check_ghost_divisibility(&seq, 2).unwrap() {
            assert!(r.pass, "{r:?}");
        }
        assert!(check_reconstruction(&seq).unwrap().iter().all(|r| r.pass));
        assert!(check_newton_inclusion(&seq).unwrap().iter().all(|r| r.pass));
    }

    #[test]
    fn separable_and_sparse_ghosts_agree() {
        let phi = SeparableForm::linear_power(&[1, 2]);
        let tuple = DworkTuple::constant(3, 1, IndexSet::range(1), phi.clone(), 2).unwrap();
        let seq = GhostSequence::new(&tuple).unwrap();
        let sparse = DworkTuple::constant(3, 1, IndexSet::range(1), phi.to_laurent().unwrap(), 2).unwrap();
        let sparse_seq = GhostSequence::new(&sparse).unwrap();
        for s in 0..=2 {
            assert_eq!(seq.ghost(s).to_laurent().unwrap(), *sparse_seq.ghost(s));
        }
        let a = check_ghost_divisibility(&seq, 2).unwrap();
        let b = check_ghost_divisibility(&sparse_seq, 2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.measured_valuation, y.measured_valuation);
        }
        assert!(check_reconstruction(&seq).unwrap().iter().all(|r| r.pass));
    }

    #[test]
    fn extended_support_is_caught() {
        let tuple = DworkTuple::new(3, vec![1], vec![IndexSet::range(1); 2], vec![sample(1), sample(2)]).unwrap();
        let declared: Vec<_> = tuple.lambda().iter().map(|f| f.newton_polytope_t().unwrap()).collect();
        let extra = LaurentPoly::monomial(layout(), &[3, 0, 0], 1);
        let mutated = tuple.with_lambda(0, sample(1).add(&extra).unwrap()).unwrap();
        let seq = GhostSequence::new(&mutated).unwrap();
        let reports = check_newton_inclusion_with(&seq, &declared).unwrap();
        assert!(!reports[0].pass);
        assert_eq!(reports[0].witness.as_deref(), Some("t1^3"));
        assert!(check_newton_inclusion(&seq).unwrap().iter().all(|r| r.pass));
    }
}
