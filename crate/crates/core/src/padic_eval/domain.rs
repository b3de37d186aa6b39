use alloc::format;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kz::{KzParams, KzPoint};
use crate::ring::{PadicRing, Ring, UnramifiedRing, Valuation};
use crate::{Error, Result};

/// A point `a ∈ Z_p^(m)` (mod `p^M`) with its domain flags.
///
/// `in_d`: `det A(Φ_1)(a)` is a unit. `in_d_o`: additionally every
/// difference `a_i − a_j` (`i ≠ j`) is a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainPoint {
    pub m: usize,
    pub a: Vec<Vec<u64>>,
    pub teichmuller: bool,
    pub det_valuation: Valuation,
    pub in_d: bool,
    pub in_d_o: bool,
}

/// `Z_p^(m)` mod `p^precision` with the default defining polynomial.
pub fn point_ring(p: u64, m: usize, precision: u32) -> Result<UnramifiedRing> {
    UnramifiedRing::new(p, m, precision)
}

/// `p^m > d_Φ`, needed for points of the domain to exist.
pub fn check_extension_degree(params: &KzParams, m: usize) -> Result<()> {
    let pm = (params.p as u128).checked_pow(m as u32).ok_or(Error::ExponentOverflow)?;
    if pm <= params.d_phi() as u128 {
        return Err(Error::InvalidParams(format!("p^m > d_phi fails: {}^{m} = {pm} <= {}", params.p, params.d_phi())));
    }
    Ok(())
}

/// `p^m > d_Φ + d_M`, the hypothesis under which the rank check is expected
/// to succeed somewhere.
pub fn rank_hypothesis_holds(params: &KzParams, m: usize) -> bool {
    (params.p as u128).checked_pow(m as u32).is_some_and(|pm| pm > (params.d_phi() + params.d_m()) as u128)
}

/// Classifies an arbitrary point.
pub fn classify_point(params: &KzParams, ring: &UnramifiedRing, a: Vec<Vec<u64>>, teichmuller: bool) -> Result<DomainPoint> {
    let det = KzPoint::new(params, ring, a.clone())?.level(1)?.hasse_witt().det(ring);
    let det_valuation = ring.valuation(&det);
    let in_d = det_valuation.value == 0 && !det_valuation.saturated;
    let distinct = (0..a.len()).all(|i| (0..i).all(|j| ring.is_unit(&ring.sub(&a[i], &a[j]))));
    Ok(DomainPoint { m: ring.degree(), a, teichmuller, det_valuation, in_d, in_d_o: in_d && distinct })
}

/// Default number of candidates tried for `count` points.
pub fn default_attempts(count: usize) -> usize {
    64 * count + 256
}

/// `count` Teichmüller tuples with pairwise distinct residues and
/// `det A(Φ_1)(a)` a unit, drawn reproducibly from `seed`. Gives up with
/// `SearchExhausted` after [`default_attempts`] candidates.
pub fn find_domain_points(params: &KzParams, ring: &UnramifiedRing, count: usize, seed: u64) -> Result<Vec<DomainPoint>> {
    find_domain_points_within(params, ring, count, seed, default_attempts(count))
}

/// [`find_domain_points`] with an explicit candidate budget.
pub fn find_domain_points_within(params: &KzParams, ring: &UnramifiedRing, count: usize, seed: u64, budget: usize) -> Result<Vec<DomainPoint>> {
    let m = ring.degree();
    check_extension_degree(params, m)?;
    let p = params.p;
    let field_size = (p as u128).pow(m as u32);
    if (params.n as u128) > field_size {
        return Err(Error::SearchExhausted(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::with_capacity(count);
    for _ in 0..budget {
        if found.len() == count {
            break;
        }
        let mut residues: Vec<Vec<u64>> = Vec::with_capacity(params.n);
        while residues.len() < params.n {
            let u: Vec<u64> = (0..m).map(|_| rng.next_u64() % p).collect();
            if !residues.contains(&u) {
                residues.push(u);
            }
        }
        let a = residues.iter().map(|u| ring.teichmuller_lift(u)).collect();
        let point = classify_point(params, ring, a, true)?;
        if point.in_d_o {
            found.push(point);
        }
    }
    if found.len() < count {
        return Err(Error::SearchExhausted(budget));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kz::make_params;

    fn embed(ring: &UnramifiedRing, v: &[u64]) -> Vec<Vec<u64>> {
        v.iter().map(|x| ring.embed(*x)).collect()
    }

    #[test]
    fn classification_of_integer_points() {
        let params = make_params(7, 3, 1).unwrap();
        let ring = point_ring(7, 1, 3).unwrap();
        let good = classify_point(&params, &ring, embed(&ring, &[1, 2, 3, 4]), false).unwrap();
        assert!(good.in_d && good.in_d_o);
        let bad = classify_point(&params, &ring, embed(&ring, &[1, 2, 3, 5]), false).unwrap();
        assert!(!bad.in_d);
        assert_eq!(bad.det_valuation, Valuation::exact(1));
        let repeated = classify_point(&params, &ring, embed(&ring, &[1, 8, 3, 4]), false).unwrap();
        assert!(!repeated.in_d_o);
    }

    #[test]
    fn search_is_seeded_and_closed_under_frobenius() {
        let params = make_params(13, 3, 2).unwrap();
        let ring = point_ring(13, 2, 4).unwrap();
        let first = find_domain_points(&params, &ring, 3, 11).unwrap();
        assert_eq!(first, find_domain_points(&params, &ring, 3, 11).unwrap());
        for point in &first {
            assert!(point.in_d_o);
            for x in &point.a {
                let y = ring.frobenius(x, 1);
                assert_eq!(ring.frobenius(&y, 2), y);
            }
        }
    }

    #[test]
    fn small_extensions_are_refused() {
        let params = make_params(13, 3, 2).unwrap();
        let ring = point_ring(13, 1, 3).unwrap();
        assert!(matches!(find_domain_points(&params, &ring, 1, 0), Err(Error::InvalidParams(_))));
        assert!(!rank_hypothesis_holds(&params, 1));
        let ring = point_ring(13, 2, 3).unwrap();
        assert_eq!(find_domain_points_within(&params, &ring, 5, 0, 2), Err(Error::SearchExhausted(2)));
        assert!(rank_hypothesis_holds(&params, 2));
    }
}
