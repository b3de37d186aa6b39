use hwkz_core::kz::{self, make_params};
use hwkz_core::padic_eval::{point_ring, PointEvaluation};
use hwkz_core::ring::{Ring, UnramifiedRing};

/// `∏ (t − z_i)^k` over `Z/modulus`, expanded by repeated linear factors.
fn master_at(z: &[i64], k: u64, modulus: i64) -> Vec<i64> {
    let mut poly = vec![1i64];
    for &zi in z {
        for _ in 0..k {
            let mut next = vec![0i64; poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] = (next[d + 1] + c) % modulus;
                next[d] = (next[d] - c * zi).rem_euclid(modulus);
            }
            poly = next;
        }
    }
    poly
}

#[test]
fn hasse_witt_entries_match_direct_expansion() {
    for (p, g) in [(7u64, 1usize), (13, 2)] {
        let params = make_params(p, 3, g).unwrap().with_s_max(3);
        let ring = UnramifiedRing::new(p, 1, 4).unwrap();
        let modulus = (p as i64).pow(4);
        let z: Vec<i64> = (1..=params.n as i64).map(|i| i * i + 2).collect();
        let point: Vec<Vec<u64>> = z.iter().map(|x| ring.embed(*x as u64)).collect();
        let levels = if p == 7 { 2 } else { 1 };
        for s in 1..=levels {
            let hw = kz::hasse_witt_phi(&params, s).unwrap();
            let expansion = master_at(&z, params.master_exponent(s).unwrap(), modulus);
            let pm = p.pow(s as u32) as usize;
            for u in 1..=g {
                for v in 1..=g {
                    let expected = expansion.get(pm * v - u).copied().unwrap_or(0);
                    let got = hw.entries.get(u - 1, v - 1).evaluate(&ring, &point, None).unwrap();
                    assert_eq!(got, ring.embed(expected as u64), "p={p} s={s} u={u} v={v}");
                }
            }
        }
    }
}

#[test]
fn smallest_case_ratio_is_frozen() {
    let params = make_params(7, 3, 1).unwrap();
    let ring = point_ring(7, 1, 5).unwrap();
    let a: Vec<Vec<u64>> = [1, 2, 3, 4].iter().map(|x| ring.embed(*x)).collect();
    let eval = PointEvaluation::new(&params, &ring, a, 2).unwrap();
    let expansion = master_at(&[1, 2, 3, 4], 2, 7i64.pow(5));
    assert_eq!(expansion, [576, 16807 - 2400, 4180, 16807 - 3980, 2273, 16807 - 800, 170, 16807 - 20, 1]);
    assert_eq!(eval.ratio(1).unwrap().get(0, 0), &ring.embed(170));
    let hw = eval.ratio(2).unwrap();
    assert!(ring.is_unit(hw.get(0, 0)));
}
