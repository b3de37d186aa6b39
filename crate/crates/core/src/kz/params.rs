use alloc::format;
use alloc::vec::Vec;

use crate::dwork::IndexSet;
use crate::ring::is_prime;
use crate::{Error, Result};

/// Validated `(p, q, g)` with `e` the order of `p` mod `q` and `n = gq + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KzParams {
    pub p: u64,
    pub q: u64,
    pub g: usize,
    pub e: u32,
    pub n: usize,
    pub s_max: usize,
}

/// Check the standing assumptions and derive `e` and `n`.
pub fn make_params(p: u64, q: u64, g: usize) -> Result<KzParams> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_prime(q) {
        return Err(Error::InvalidParams(format!("q = {q} is not prime")));
    }
    if p <= q {
        return Err(Error::InvalidParams(format!("p > q fails for p = {p}, q = {q}")));
    }
    if g == 0 {
        return Err(Error::InvalidParams("g must be positive".into()));
    }
    let mut e = 1u32;
    let mut r = p % q;
    while r != 1 {
        r = r * (p % q) % q;
        e += 1;
    }
    let n = g as u64 * q + 1;
    let pe = p.checked_pow(e).ok_or(Error::ExponentOverflow)?;
    if pe <= n {
        return Err(Error::InvalidParams(format!("p^e > n fails: p^e = {pe}, n = {n}")));
    }
    if p + 2 < n + q {
        return Err(Error::InvalidParams(format!("p >= n + q - 2 fails: p = {p}, n + q - 2 = {}", n + q - 2)));
    }
    Ok(KzParams { p, q, g, e, n: n as usize, s_max: 3 })
}

impl KzParams {
    pub fn with_s_max(mut self, s_max: usize) -> Self {
        self.s_max = s_max;
        self
    }

    /// `p^{es}`.
    pub fn p_es(&self, s: usize) -> Result<u64> {
        self.p.checked_pow(self.e * s as u32).ok_or(Error::ExponentOverflow)
    }

    /// The exponent `(p^{es} − 1)/q` of the master polynomial.
    pub fn master_exponent(&self, s: usize) -> Result<u64> {
        Ok((self.p_es(s)? - 1) / self.q)
    }

    /// `Γ = {1, …, g}`.
    pub fn gamma(&self) -> IndexSet {
        IndexSet::range(self.g)
    }

    fn k1(&self) -> i64 {
        ((self.p.pow(self.e) - 1) / self.q) as i64
    }

    /// Degree of `det A(Φ_1)`: `k·(qg² + 2g − qg)/2` with `k = (p^e − 1)/q`.
    pub fn d_phi(&self) -> i64 {
        let (q, g) = (self.q as i64, self.g as i64);
        self.k1() * (q * g * g + 2 * g - q * g) / 2
    }

    /// Degree of the distinguished minor: `d_Φ − g(g + 1)/2`.
    pub fn d_m(&self) -> i64 {
        let g = self.g as i64;
        self.d_phi() - g * (g + 1) / 2
    }

    /// `t`-degree of `Φ_s`.
    pub fn master_t_degree(&self, s: usize) -> Result<i64> {
        Ok(self.n as i64 * self.master_exponent(s)? as i64)
    }

    /// `z`-degree of the Hasse–Witt entry `(u, v)` of `A(Φ_s)` (1-based).
    pub fn hw_entry_degree(&self, s: usize, u: usize, v: usize) -> Result<i64> {
        Ok(self.master_t_degree(s)? - (self.p_es(s)? as i64 * v as i64 - u as i64))
    }

    /// `z`-degree of the column `I_{s,ℓ}`: `n(p^{es} − 1)/q − ℓp^{es}`.
    pub fn solution_column_degree(&self, s: usize, ell: usize) -> Result<i64> {
        Ok(self.master_t_degree(s)? - self.p_es(s)? as i64 * ell as i64)
    }

    /// 1-based rows `q(g − ℓ) + 1`, listed for `ℓ = 1..g`.
    pub fn minor_rows(&self) -> Vec<usize> {
        (1..=self.g).map(|l| self.q as usize * (self.g - l) + 1).collect()
    }
}

/// Constants of an instance, for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KzDescription {
    pub p: u64,
    pub q: u64,
    pub g: usize,
    pub e: u32,
    pub n: usize,
    pub d_phi: i64,
    #[cfg_attr(feature = "serde", serde(rename = "d_M"))]
    pub d_m: i64,
    pub degrees: Degrees,
}

/// Degree tables at level `s = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Degrees {
    pub master_t_degree: i64,
    pub hasse_witt_entries: Vec<Vec<i64>>,
    pub solution_columns: Vec<i64>,
    pub minor_rows: Vec<usize>,
}

pub fn describe(params: &KzParams) -> Result<KzDescription> {
    let g = params.g;
    let hasse_witt_entries = (1..=g).map(|u| (1..=g).map(|v| params.hw_entry_degree(1, u, v)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    let solution_columns = (1..=g).map(|l| params.solution_column_degree(1, l)).collect::<Result<Vec<_>>>()?;
    Ok(KzDescription {
        p: params.p,
        q: params.q,
        g,
        e: params.e,
        n: params.n,
        d_phi: params.d_phi(),
        d_m: params.d_m(),
        degrees: Degrees { master_t_degree: params.master_t_degree(1)?, hasse_witt_entries, solution_columns, minor_rows: params.minor_rows() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_sets() {
        let a = make_params(7, 3, 1).unwrap();
        assert_eq!((a.e, a.n, a.d_phi(), a.d_m()), (1, 4, 2, 1));
        let b = make_params(13, 3, 2).unwrap();
        assert_eq!((b.e, b.n, b.d_phi(), b.d_m()), (1, 7, 20, 17));
        assert_eq!(b.master_t_degree(1).unwrap(), 28);
        assert_eq!(describe(&b).unwrap().degrees.hasse_witt_entries, alloc::vec![alloc::vec![16, 3], alloc::vec![17, 4]]);
        assert_eq!(b.minor_rows(), alloc::vec![4, 1]);
        let c = make_params(5, 3, 1).unwrap();
        assert_eq!((c.e, c.n), (2, 4));
    }

    #[test]
    fn violated_assumptions() {
        assert!(matches!(make_params(3, 3, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(make_params(7, 3, 2), Err(Error::InvalidParams(m)) if m.contains("p^e > n")));
        assert!(matches!(make_params(4, 3, 1), Err(Error::NotPrime(4))));
        assert!(matches!(make_params(5, 3, 2), Err(Error::InvalidParams(m)) if m.contains("p >= n + q - 2")));
    }
}
