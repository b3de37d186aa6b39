//! Small dense polynomials over `F_p`, enough to pick and test a
//! defining polynomial for `F_{p^m}`.

use alloc::vec;
use alloc::vec::Vec;

use super::modulus::invert_mod;

fn normalize(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = normalize(b.to_vec());
    let mut r = normalize(a.to_vec());
    let lead_inv = invert_mod(*b.last().expect("nonzero divisor"), p).expect("field");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * lead_inv % p;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * bi % p) % p;
        }
        r = normalize(r);
    }
    r
}

fn mulmod(a: &[u64], b: &[u64], h: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, h, p)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (normalize(a.to_vec()), normalize(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: `h` (monic, coefficients low to high) is irreducible
/// over `F_p` iff `gcd(w^{p^i} - w, h) = 1` for `i ≤ deg/2` and `h | w^{p^deg} - w`.
pub fn is_irreducible_mod_p(h: &[u64], p: u64) -> bool {
    let h = normalize(h.iter().map(|c| c % p).collect());
    let deg = match h.len() {
        0 | 1 => return false,
        l => l - 1,
    };
    if deg == 1 {
        return true;
    }
    let w = rem(&[0, 1], &h, p);
    let mut frob = w.clone();
    for i in 1..=deg {
        // frob = w^{p^i} mod h
        let mut acc = vec![1u64];
        let mut base = frob.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, &h, p);
            }
            base = mulmod(&base, &base, &h, p);
            e >>= 1;
        }
        frob = acc;
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let diff = normalize(diff);
        if i <= deg / 2 {
            if diff.is_empty() || gcd(&h, &diff, p).len() != 1 {
                return false;
            }
        } else if i == deg {
            return diff.is_empty();
        }
    }
    unreachable!()
}

/// The lexicographically smallest monic irreducible polynomial of degree `m`
/// over `F_p`, ordering candidates by `(c_{m-1}, …, c_0)`.
///
/// Returns `[c_0, …, c_{m-1}]` for `h(w) = w^m + Σ c_i w^i`.
pub fn find_defining_polynomial(p: u64, m: usize) -> Vec<u64> {
    assert!(m >= 1);
    if m == 1 {
        return vec![0];
    }
    let mut c = vec![0u64; m];
    loop {
        let mut h = c.clone();
        h.push(1);
        if is_irreducible_mod_p(&h, p) {
            return c;
        }
        // increment, c_0 fastest
        let mut i = 0;
        loop {
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            i += 1;
            assert!(i < m, "irreducible polynomials of every degree exist");
        }
    }
}
