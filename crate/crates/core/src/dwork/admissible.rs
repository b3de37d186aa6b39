use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::report::{CongruenceReport, Mode};
use super::IndexSet;
use crate::laurent::LatticePolytopeT;
use crate::{Error, Result};

/// A lattice point violating the containment condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityWitness {
    pub i: usize,
    pub j: usize,
    pub point: Vec<i64>,
    pub quotient: Vec<i64>,
}

/// `(Δ, e)`-admissibility of `(N_0, …, N_l)`: for all `0 ≤ i ≤ j < l`,
/// every point of `Δ_i + N_i + p^{e_{i+1}} N_{i+1} + … + p^{e_{i+1}+…+e_j} N_j`
/// divisible by `P = p^{e_{i+1}+…+e_{j+1}}` lies in `P·Δ_{j+1}`.
///
/// Intervals are handled exactly. For more `t` variables each `N_i` must be
/// given as its full finite set of lattice points.
pub fn check_admissible(p: u64, e: &[u32], delta: &[IndexSet], polytopes: &[LatticePolytopeT]) -> Result<CongruenceReport> {
    let l = e.len();
    if delta.len() != l + 1 || polytopes.len() != l + 1 {
        return Err(Error::InvalidTuple("need l + 1 index sets and polytopes".into()));
    }
    let witness = if polytopes.iter().all(|n| n.as_interval().is_some()) {
        if delta.iter().any(|d| d.dim() != 1) {
            return Err(Error::DimensionUnsupported("interval polytopes need one-dimensional index sets".into()));
        }
        intervals(p, e, delta, polytopes)?
    } else if polytopes.iter().all(|n| matches!(n, LatticePolytopeT::Points { .. })) {
        point_sets(p, e, delta, polytopes)?
    } else {
        return Err(Error::DimensionUnsupported("mixed interval and point-set polytopes".into()));
    };
    let text = witness.as_ref().map(|w| format!("i={} j={} point={:?} quotient={:?}", w.i, w.j, w.point, w.quotient));
    Ok(CongruenceReport::predicate("admissible", Mode::Symbolic, witness.is_none(), text).with("p", p).with("l", l))
}

fn power(p: u64, k: u32) -> Result<i64> {
    p.checked_pow(k).and_then(|x| i64::try_from(x).ok()).ok_or(Error::ExponentOverflow)
}

fn intervals(p: u64, e: &[u32], delta: &[IndexSet], polytopes: &[LatticePolytopeT]) -> Result<Option<AdmissibilityWitness>> {
    let l = e.len();
    for i in 0..l {
        let (mut lo, mut hi) = polytopes[i].as_interval().unwrap();
        let mut shift = 0u32;
        for j in i..l {
            if j > i {
                shift += e[j - 1];
                let (a, b) = polytopes[j].as_interval().unwrap();
                let s = power(p, shift)?;
                lo = lo.checked_add(s.checked_mul(a).ok_or(Error::ExponentOverflow)?).ok_or(Error::ExponentOverflow)?;
                hi = hi.checked_add(s.checked_mul(b).ok_or(Error::ExponentOverflow)?).ok_or(Error::ExponentOverflow)?;
            }
            let big = power(p, shift + e[j])?;
            for d in delta[i].points() {
                let (a, b) = (d[0] + lo, d[0] + hi);
                let mut y = a.div_euclid(big) * big;
                if y < a {
                    y += big;
                }
                while y <= b {
                    let w = y / big;
                    if !delta[j + 1].contains(&[w]) {
                        return Ok(Some(AdmissibilityWitness { i, j, point: vec![y], quotient: vec![w] }));
                    }
                    y += big;
                }
            }
        }
    }
    Ok(None)
}

fn point_sets(p: u64, e: &[u32], delta: &[IndexSet], polytopes: &[LatticePolytopeT]) -> Result<Option<AdmissibilityWitness>> {
    let l = e.len();
    let pts = |n: &LatticePolytopeT| -> Vec<Vec<i64>> {
        match n {
            LatticePolytopeT::Points { points, .. } => points.clone(),
            LatticePolytopeT::Interval { .. } => unreachable!(),
        }
    };
    for i in 0..l {
        let mut sum: BTreeSet<Vec<i64>> = BTreeSet::new();
        for d in delta[i].points() {
            for q in pts(&polytopes[i]) {
                sum.insert(d.iter().zip(&q).map(|(a, b)| a + b).collect());
            }
        }
        let mut shift = 0u32;
        for j in i..l {
            if j > i {
                shift += e[j - 1];
                let s = power(p, shift)?;
                let step = pts(&polytopes[j]);
                sum = sum
                    .iter()
                    .flat_map(|a| step.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + s * y).collect::<Vec<i64>>()))
                    .collect();
            }
            let big = power(p, shift + e[j])?;
            for y in &sum {
                if y.iter().all(|c| c.rem_euclid(big) == 0) {
                    let w: Vec<i64> = y.iter().map(|c| c / big).collect();
                    if !delta[j + 1].contains(&w) {
                        return Ok(Some(AdmissibilityWitness { i, j, point: y.clone(), quotient: w }));
                    }
                }
            }
        }
    }
    Ok(None)
}
