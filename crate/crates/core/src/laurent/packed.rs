use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::Exponent;

/// Exponent vectors of a product packed into one `u128`, first variable in
/// the highest bits so that integer order is lexicographic order.
pub(crate) struct Packing {
    lo_a: Vec<i64>,
    lo_b: Vec<i64>,
    shifts: Vec<u32>,
    masks: Vec<u128>,
}

fn bounds<'a>(width: usize, keys: impl Iterator<Item = &'a Exponent>) -> (Vec<i64>, Vec<i64>) {
    let mut lo = alloc::vec![i64::MAX; width];
    let mut hi = alloc::vec![i64::MIN; width];
    for e in keys {
        for (k, x) in e.iter().enumerate() {
            lo[k] = lo[k].min(*x as i64);
            hi[k] = hi[k].max(*x as i64);
        }
    }
    (lo, hi)
}

impl Packing {
    /// `None` when the exponent ranges of the product need more than 128 bits
    /// or leave the `i32` range.
    pub(crate) fn for_product(width: usize, a: &BTreeMap<Exponent, BigInt>, b: &BTreeMap<Exponent, BigInt>) -> Option<Self> {
        let (lo_a, hi_a) = bounds(width, a.keys());
        let (lo_b, hi_b) = bounds(width, b.keys());
        let mut bits = Vec::with_capacity(width);
        for k in 0..width {
            let (lo, hi) = (lo_a[k] + lo_b[k], hi_a[k] + hi_b[k]);
            if lo < i32::MIN as i64 || hi > i32::MAX as i64 {
                return None;
            }
            bits.push(64 - ((hi - lo) as u64).leading_zeros());
        }
        if bits.iter().sum::<u32>() > 128 {
            return None;
        }
        let mut shifts = alloc::vec![0; width];
        let mut acc = 0;
        for k in (0..width).rev() {
            shifts[k] = acc;
            acc += bits[k];
        }
        let masks = bits.iter().map(|b| if *b == 0 { 0 } else { u128::MAX >> (128 - b) }).collect();
        Some(Packing { lo_a, lo_b, shifts, masks })
    }

    fn pack(&self, e: &[i32], lo: &[i64]) -> u128 {
        e.iter().enumerate().map(|(k, x)| ((*x as i64 - lo[k]) as u128) << self.shifts[k]).sum()
    }

    fn unpack(&self, key: u128) -> Exponent {
        (0..self.shifts.len()).map(|k| (((key >> self.shifts[k]) & self.masks[k]) as i64 + self.lo_a[k] + self.lo_b[k]) as i32).collect()
    }

    /// The product `a·b` as sorted `(exponent, coefficient)` pairs.
    pub(crate) fn multiply(&self, a: &BTreeMap<Exponent, BigInt>, b: &BTreeMap<Exponent, BigInt>) -> Vec<(Exponent, BigInt)> {
        let pa: Vec<(u128, &BigInt)> = a.iter().map(|(e, c)| (self.pack(e, &self.lo_a), c)).collect();
        let pb: Vec<(u128, &BigInt)> = b.iter().map(|(e, c)| (self.pack(e, &self.lo_b), c)).collect();
        let small = |v: &[(u128, &BigInt)]| -> Option<Vec<(u128, i64)>> { v.iter().map(|(k, c)| c.to_i64().map(|c| (*k, c))).collect() };
        let max_abs = |v: &[(u128, &BigInt)]| v.iter().map(|(_, c)| c.abs()).max().unwrap_or_default();
        let bound = max_abs(&pa) * max_abs(&pb) * BigInt::from(pa.len().min(pb.len()));
        if bound.bits() < 126 {
            if let (Some(sa), Some(sb)) = (small(&pa), small(&pb)) {
                let mut acc: BTreeMap<u128, i128> = BTreeMap::new();
                for (ka, ca) in &sa {
                    for (kb, cb) in &sb {
                        *acc.entry(ka + kb).or_insert(0) += *ca as i128 * *cb as i128;
                    }
                }
                return acc.into_iter().filter(|(_, c)| *c != 0).map(|(k, c)| (self.unpack(k), BigInt::from(c))).collect();
            }
        }
        let mut acc: BTreeMap<u128, BigInt> = BTreeMap::new();
        for (ka, ca) in &pa {
            for (kb, cb) in &pb {
                *acc.entry(ka + kb).or_default() += *ca * *cb;
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (self.unpack(k), c)).collect()
    }
}
