//! Polynomial products mod `m` by packing coefficients into one big integer.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;


const SCHOOLBOOK_CUTOFF: usize = 48;

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let a = trim(a);
    let b = trim(b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) < SCHOOLBOOK_CUTOFF {
        return small_product(a, b, m);
    }
    let mbits = 64 - (m - 1).leading_zeros() as usize;
    let lbits = usize::BITS as usize - a.len().min(b.len()).leading_zeros() as usize;
    let width = 2 * mbits + lbits + 1;
    let pa = pack(a, width);
    let pb = pack(b, width);
    let prod = if core::ptr::eq(a, b) { &pa * &pa } else { &pa * &pb };
    unpack(&prod, width, a.len() + b.len() - 1, m)
}

fn small_product(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    // accumulate in u128 and reduce lazily: each term is below 2^124
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let limit = 1u128 << 125;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut acc[i + j];
            *slot += x as u128 * y as u128;
            if *slot >= limit {
                *slot %= m as u128;
            }
        }
    }
    acc.into_iter().map(|v| (v % m as u128) as u64).collect()
}

fn trim(a: &[u64]) -> &[u64] {
    let end = a.iter().rposition(|x| *x != 0).map_or(0, |i| i + 1);
    &a[..end]
}

fn pack(a: &[u64], width: usize) -> BigUint {
    let total = a.len() * width;
    let mut words = vec![0u64; total.div_ceil(64) + 1];
    for (i, &x) in a.iter().enumerate() {
        let bit = i * width;
        let (w, off) = (bit / 64, bit % 64);
        words[w] |= x << off;
        if off != 0 {
            words[w + 1] |= x >> (64 - off);
        }
    }
    let digits: Vec<u32> = words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect();
    BigUint::new(digits)
}

fn unpack(v: &BigUint, width: usize, len: usize, m: u64) -> Vec<u64> {
    let words = v.to_u64_digits();
    let word = |i: usize| words.get(i).copied().unwrap_or(0);
    let m128 = m as u128;
    (0..len)
        .map(|i| {
            let start = i * width;
            let end = start + width;
            // read the slot as up to three 64-bit limbs, most significant first
            let mut acc: u128 = 0;
            let mut hi = end;
            while hi > start {
                let lo = start.max(hi.saturating_sub(64));
                let len = hi - lo;
                let (w, off) = (lo / 64, lo % 64);
                let mut x = word(w) >> off;
                if off != 0 && off + len > 64 {
                    x |= word(w + 1) << (64 - off);
                }
                if len < 64 {
                    x &= (1u64 << len) - 1;
                }
                acc = ((acc << len) | x as u128) % m128;
                hi = lo;
            }
            acc as u64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ModulusContext, Ring};
    use proptest::prelude::*;

    fn reference(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        let mut out = vec![0u128; (a.len() + b.len()).saturating_sub(1)];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + *x as u128 * *y as u128) % m as u128;
            }
        }
        out.into_iter().map(|v| v as u64).collect()
    }

    fn padded(mut v: Vec<u64>, len: usize) -> Vec<u64> {
        v.resize(len, 0);
        v
    }

    proptest! {
        #[test]
        fn matches_schoolbook(
            m in prop_oneof![Just(7u64), Just(49), Just(16807), Just(371293), Just((1u64 << 61) - 1)],
            a in proptest::collection::vec(any::<u64>(), 0..200),
            b in proptest::collection::vec(any::<u64>(), 0..200),
        ) {
            let a: Vec<u64> = a.into_iter().map(|x| x % m).collect();
            let b: Vec<u64> = b.into_iter().map(|x| x % m).collect();
            let fast = mul_mod(&a, &b, m);
            let slow = reference(&a, &b, m);
            let len = fast.len().max(slow.len());
            prop_assert_eq!(padded(fast, len), padded(trim(&slow).to_vec(), len));
        }
    }

    #[test]
    fn context_product_uses_packing() {
        let ctx = ModulusContext::new(7, 3).unwrap();
        let a: Vec<u64> = (0..100).map(|i| i % 343).collect();
        assert_eq!(ctx.poly_mul(&a, &a), reference(&a, &a, 343));
    }

    #[test]
    fn squaring_path() {
        let m = 13u64.pow(5);
        let a: Vec<u64> = (0..300).map(|i| (i * 7919 + 3) % m).collect();
        assert_eq!(mul_mod(&a, &a, m), reference(&a, &a, m));
    }
}
