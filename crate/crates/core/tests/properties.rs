use std::collections::BTreeMap;

use hwkz_core::kz::make_params;
use hwkz_core::laurent::{LaurentPoly, SigmaScope, VarLayout};
use hwkz_core::padic_eval::PointEvaluation;
use hwkz_core::Error;
use hwkz_core::ring::{Matrix, PadicRing, Ring, UnramifiedRing};
use num_bigint::BigInt;
use proptest::prelude::*;

const LAYOUT: VarLayout = VarLayout { r: 1, n: 2 };

fn poly_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::array::uniform3(-3i32..6), -20i64..20), 0..12)
        .prop_map(|terms| LaurentPoly::from_terms(LAYOUT, terms.into_iter().map(|(e, c)| (e.to_vec().into_boxed_slice(), BigInt::from(c)))))
}

fn naive_product(a: &LaurentPoly, b: &LaurentPoly) -> BTreeMap<Vec<i32>, BigInt> {
    let mut out: BTreeMap<Vec<i32>, BigInt> = BTreeMap::new();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let e: Vec<i32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
            *out.entry(e).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != BigInt::from(0));
    out
}

fn elem(ring: &UnramifiedRing) -> impl Strategy<Value = Vec<u64>> {
    let modulus = ring.base().p().pow(ring.precision());
    prop::collection::vec(0..modulus, ring.degree())
}

fn ring() -> UnramifiedRing {
    UnramifiedRing::new(5, 2, 4).unwrap()
}

proptest! {
    #[test]
    fn product_matches_schoolbook(a in poly_strategy(), b in poly_strategy()) {
        let fast: BTreeMap<Vec<i32>, BigInt> = a.mul(&b).unwrap().terms().map(|(e, c)| (e.to_vec(), c.clone())).collect();
        prop_assert_eq!(fast, naive_product(&a, &b));
    }

    #[test]
    fn sigma_is_multiplicative(a in poly_strategy(), b in poly_strategy(), all in any::<bool>()) {
        let scope = if all { SigmaScope::All } else { SigmaScope::ZOnly };
        let lhs = a.mul(&b).unwrap().sigma_subst(3, 1, scope).unwrap();
        let rhs = a.sigma_subst(3, 1, scope).unwrap().mul(&b.sigma_subst(3, 1, scope).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leading_terms_multiply(a in poly_strategy(), b in poly_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (ea, ca) = a.leading_term().unwrap();
        let (eb, cb) = b.leading_term().unwrap();
        let (e, c) = a.mul(&b).unwrap().leading_term().unwrap();
        prop_assert_eq!(e, ea.iter().zip(&eb).map(|(x, y)| x + y).collect::<Vec<_>>());
        prop_assert_eq!(c, ca * cb);
    }

    #[test]
    fn ring_axioms(x in elem(&ring()), y in elem(&ring()), z in elem(&ring())) {
        let r = ring();
        prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
        prop_assert_eq!(r.mul(&x, &r.add(&y, &z)), r.add(&r.mul(&x, &y), &r.mul(&x, &z)));
        prop_assert_eq!(r.mul(&x, &y), r.mul(&y, &x));
        prop_assert!(r.is_zero(&r.add(&x, &r.neg(&x))));
        match r.try_inverse(&x) {
            Some(inv) => prop_assert_eq!(r.mul(&x, &inv), r.one()),
            None => prop_assert!(r.valuation(&x).value > 0 || r.valuation(&x).saturated),
        }
        let (vx, vy, vxy) = (r.valuation(&x), r.valuation(&y), r.valuation(&r.mul(&x, &y)));
        if !vx.saturated && !vy.saturated && vx.value + vy.value < r.precision() {
            prop_assert_eq!(vxy.value, vx.value + vy.value);
        }
        prop_assert!(r.valuation(&r.add(&x, &y)).value >= vx.value.min(vy.value));
    }

    #[test]
    fn evaluation_commutes_with_frobenius(f in poly_strategy(), u in prop::collection::vec(prop::collection::vec(0u64..5, 2), 2)) {
        let r = ring();
        let lifts: Vec<Vec<u64>> = u.iter().map(|x| r.teichmuller_lift(x)).collect();
        prop_assume!(lifts.iter().all(|x| r.is_unit(x)));
        let t = [r.one()];
        let value = f.evaluate(&r, &lifts, Some(&t)).unwrap();
        let frob: Vec<Vec<u64>> = lifts.iter().map(|x| r.frobenius(x, 1)).collect();
        let twisted = f.sigma_subst(5, 1, SigmaScope::ZOnly).unwrap().evaluate(&r, &lifts, Some(&t)).unwrap();
        let at_frob = f.evaluate(&r, &frob, Some(&t)).unwrap();
        prop_assert_eq!(&at_frob, &twisted);
        prop_assert!(r.valuation(&r.sub(&r.frobenius(&value, 1), &at_frob)).value >= 1);
    }

    #[test]
    fn inverse_of_unit_determinant_matrices(entries in prop::collection::vec(elem(&ring()), 9)) {
        let r = ring();
        let m = Matrix::from_fn(3, 3, |i, j| entries[3 * i + j].clone());
        match m.inverse(&r) {
            Ok(inv) => {
                prop_assert!(r.is_unit(&m.det(&r)));
                prop_assert_eq!(m.mul(&r, &inv), Matrix::identity(&r, 3));
                prop_assert_eq!(inv.mul(&r, &m), Matrix::identity(&r, 3));
            }
            Err(_) => prop_assert!(!r.is_unit(&m.det(&r))),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn certification_grows_with_levels(seed in prop::collection::vec(1u64..7, 4)) {
        let mut residues = seed.clone();
        residues.sort();
        residues.dedup();
        prop_assume!(residues.len() == 4);
        let params = make_params(7, 3, 1).unwrap().with_s_max(4);
        let r = UnramifiedRing::new(7, 1, 5).unwrap();
        let a: Vec<Vec<u64>> = seed.iter().map(|x| r.teichmuller_lift(&[*x])).collect();
        let mut last = 0;
        for levels in 2..=4 {
            let eval = match PointEvaluation::new(&params, &r, a.clone(), levels) {
                Ok(eval) => eval,
                Err(Error::SingularModP) => return Ok(()),
                Err(e) => panic!("{e:?}"),
            };
            let seq = eval.ratio_sequence().unwrap();
            prop_assert!(seq.certified_precision >= last);
            last = seq.certified_precision;
        }
    }
}
