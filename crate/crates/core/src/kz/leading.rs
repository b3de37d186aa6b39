use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{hasse_witt_phi, hypergeometric_solutions, KzParams};
use crate::dwork::{CongruenceReport, Mode};
use crate::laurent::{LaurentPoly, PolyRing, VarLayout};
use crate::Result;

/// Predicted leading data of the column `I_{1,ℓ}` in the lexicographic
/// order `z_1 > … > z_n`: the coefficient vector at the leading monomial,
/// up to one global sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTerm {
    pub ell: usize,
    pub coefficients: Vec<BigInt>,
    /// Exponents of `z_1, …, z_n`.
    pub monomial: Vec<i32>,
}

fn binomial(n: u64, k: u64) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `(z_1⋯z_r)^k` as an exponent vector of length `n`.
fn block(n: usize, r: usize, k: u64) -> Vec<i32> {
    (0..n).map(|i| if i < r { k as i32 } else { 0 }).collect()
}

/// For `ℓ = 1..g`, with `r = q(g − ℓ) + 1` and `k = (p^e − 1)/q`: zeros in the
/// first `r − 1` places, `binom(k−1, ℓ−1)` at `r` and `binom(k, ℓ)` in the
/// remaining `qℓ` places, at the monomial `(z_1⋯z_r)^k / z_r^ℓ`.
pub fn leading_term_solutions(params: &KzParams) -> Result<Vec<LeadingTerm>> {
    let k = params.master_exponent(1)?;
    let (n, q, g) = (params.n, params.q as usize, params.g);
    Ok((1..=g)
        .map(|ell| {
            let r = q * (g - ell) + 1;
            let mut coefficients = vec![BigInt::zero(); n];
            coefficients[r - 1] = binomial(k - 1, ell as u64 - 1);
            for c in &mut coefficients[r..] {
                *c = binomial(k, ell as u64);
            }
            let mut monomial = block(n, r, k);
            monomial[r - 1] -= ell as i32;
            LeadingTerm { ell, coefficients, monomial }
        })
        .collect())
}

fn z_part(e: &[i32], layout: VarLayout) -> Vec<i32> {
    e[layout.r..].to_vec()
}

/// Lexicographically largest `z`-monomial among the entries and the
/// coefficient of that monomial in each entry.
fn vector_leading_term(entries: &[LaurentPoly]) -> Option<(Vec<i32>, Vec<BigInt>)> {
    let lead = entries.iter().filter_map(|f| f.leading_term().ok()).map(|(e, _)| e).max()?;
    Some((z_part(&lead, entries[0].layout()), entries.iter().map(|f| f.coefficient(&lead)).collect()))
}

/// `+1` or `−1` when `actual = ±expected`, else `None`.
fn sign_between(actual: &[BigInt], expected: &[BigInt]) -> Option<i64> {
    [1i64, -1].into_iter().find(|&s| actual.iter().zip(expected).all(|(a, b)| *a == b * BigInt::from(s)))
}

fn monomial_text(e: &[i32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, x)| **x != 0)
        .map(|(i, x)| if *x == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, x) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn is_unit(c: &BigInt, p: u64) -> bool {
    !c.mod_floor(&BigInt::from(p)).is_zero()
}

/// Compares the leading term of every column of `I_1` with the prediction
/// up to a global sign, which is recorded as the `sign` parameter, and
/// checks that the binomial at the leading place is a unit mod `p`.
pub fn check_leading_terms(params: &KzParams) -> Result<Vec<CongruenceReport>> {
    let sol = hypergeometric_solutions(params, 1)?;
    let mut out = Vec::new();
    for pred in leading_term_solutions(params)? {
        let column = sol.column(pred.ell - 1);
        let (pass, sign, witness) = match vector_leading_term(&column) {
            Some((mono, coeffs)) if mono == pred.monomial => match sign_between(&coeffs, &pred.coefficients) {
                Some(s) => (true, s, None),
                None => (false, 0, Some(format!("coefficients {coeffs:?}"))),
            },
            Some((mono, _)) => (false, 0, Some(format!("leading monomial {}", monomial_text(&mono)))),
            None => (false, 0, Some("zero column".into())),
        };
        let r = params.q as usize * (params.g - pred.ell) + 1;
        out.push(
            CongruenceReport::predicate("leading_term", Mode::Symbolic, pass, witness)
                .with("ell", pred.ell)
                .with("sign", sign)
                .with("monomial", monomial_text(&pred.monomial)),
        );
        let b = &pred.coefficients[r - 1];
        out.push(
            CongruenceReport::predicate("leading_binomial_unit", Mode::Symbolic, is_unit(b, params.p), Some(format!("binomial {b}")))
                .with("ell", pred.ell),
        );
    }
    Ok(out)
}

fn degree_report(check: &str, f: &LaurentPoly, expected: i64) -> CongruenceReport {
    let d = f.homogeneous_z_degree();
    let witness = match d {
        Some(d) => format!("degree {d}"),
        None => "not homogeneous".into(),
    };
    CongruenceReport::predicate(check, Mode::Symbolic, d == Some(expected), Some(witness)).with("expected", expected)
}

fn nonzero_mod_p(check: &str, f: &LaurentPoly, p: u64) -> CongruenceReport {
    let (v, _) = f.min_valuation(p, 1);
    CongruenceReport::predicate(check, Mode::Symbolic, !f.is_zero() && v.value == 0, Some("every coefficient divisible by p".into()))
}

/// Compares the leading term of `f` with `±c·z^mono`, recording the sign.
fn leading_report(check: &str, f: &LaurentPoly, c: &BigInt, mono: &[i32]) -> CongruenceReport {
    let layout = f.layout();
    let (pass, sign, witness) = match f.leading_term() {
        Ok((e, lc)) if z_part(&e, layout) == mono => match sign_between(&[lc.clone()], &[c.clone()]) {
            Some(s) => (true, s, None),
            None => (false, 0, Some(format!("coefficient {lc}"))),
        },
        Ok((e, _)) => (false, 0, Some(format!("leading monomial {}", monomial_text(&z_part(&e, layout))))),
        Err(_) => (false, 0, Some("zero polynomial".into())),
    };
    CongruenceReport::predicate(check, Mode::Symbolic, pass, witness).with("sign", sign).with("monomial", monomial_text(mono))
}

fn product_monomial(parts: impl IntoIterator<Item = Vec<i32>>, n: usize) -> Vec<i32> {
    parts.into_iter().fold(vec![0; n], |acc, m| acc.iter().zip(&m).map(|(a, b)| a + b).collect())
}

/// The `g × g` minor `M(z)` of `I_1(z)` in rows `q(g − ℓ) + 1`, `ℓ = 1..g`.
pub fn minor_m(params: &KzParams) -> Result<LaurentPoly> {
    let sol = hypergeometric_solutions(params, 1)?;
    let rows: Vec<usize> = params.minor_rows().iter().map(|r| r - 1).collect();
    let layout = sol.entries.get(0, 0).layout();
    Ok(sol.entries.select_rows(&rows).det(&PolyRing::exact(layout)))
}

/// Homogeneity and degree `d_M` of `M(z)`, its leading term
/// `±∏_ℓ binom(k−1, ℓ−1)·(z_1⋯z_{r_ℓ})^k / z_{r_ℓ}^ℓ`, and `M ≢ 0 (mod p)`.
pub fn check_minor(params: &KzParams) -> Result<Vec<CongruenceReport>> {
    let m = minor_m(params)?;
    let preds = leading_term_solutions(params)?;
    let rows = params.minor_rows();
    let c: BigInt = preds.iter().zip(&rows).map(|(t, r)| t.coefficients[r - 1].clone()).product();
    let mono = product_monomial(preds.iter().map(|t| t.monomial.clone()), params.n);
    Ok(vec![
        degree_report("minor_degree", &m, params.d_m()),
        leading_report("minor_leading_term", &m, &c, &mono),
        nonzero_mod_p("minor_nonzero_mod_p", &m, params.p),
    ])
}

/// `det A(Φ_1)`: homogeneity and degree `d_Φ`, nonvanishing mod `p`, the
/// leading term `±∏_v (z_1⋯z_{qg+1−qv})^k`, and the leading term of every entry:
/// `±binom(k, v−u)·(z_1⋯z_c)^k / z_c^{v−u}` for `v ≥ u` and
/// `±binom(k, u−v)·(z_1⋯z_c)^k·z_{c+1}^{u−v}` for `u > v`, with `c = qg + 1 − qv`.
///
/// For `g = 2` one more report records whether the leading monomial of the
/// `(1,1)` entry is `(z_1⋯z_{q+1})^k` or `(z_1⋯z_{g+1})^k`.
pub fn det_phi1_check(params: &KzParams) -> Result<Vec<CongruenceReport>> {
    let hw = hasse_witt_phi(params, 1)?;
    let det = hw.determinant()?;
    let k = params.master_exponent(1)?;
    let (n, q, g) = (params.n, params.q as usize, params.g);
    let column_block = |v: usize| block(n, q * g + 1 - q * v, k);
    let mono = product_monomial((1..=g).map(column_block), n);
    let mut out = vec![
        degree_report("det_degree", &det, params.d_phi()),
        nonzero_mod_p("det_nonzero_mod_p", &det, params.p),
        leading_report("det_leading_term", &det, &BigInt::one(), &mono),
    ];
    for u in 1..=g {
        for v in 1..=g {
            let c = q * g + 1 - q * v;
            let mut mono = column_block(v);
            let coeff = if v >= u {
                mono[c - 1] -= (v - u) as i32;
                binomial(k, (v - u) as u64)
            } else {
                mono[c] += (u - v) as i32;
                binomial(k, (u - v) as u64)
            };
            let entry = hw.entries.get(u - 1, v - 1);
            out.push(leading_report("hw_entry_leading_term", entry, &coeff, &mono).with("u", u).with("v", v));
            out.push(degree_report("hw_entry_degree", entry, params.hw_entry_degree(1, u, v)?).with("u", u).with("v", v));
        }
    }
    if g == 2 {
        let entry = hw.entries.get(0, 0);
        let lead = entry.leading_term().ok().map(|(e, _)| z_part(&e, entry.layout()));
        let variant = match lead {
            Some(e) if e == block(n, q + 1, k) => "general",
            Some(e) if e == block(n, g + 1, k) => "display",
            _ => "neither",
        };
        out.push(CongruenceReport::predicate("hw_first_entry_variant", Mode::Symbolic, variant != "neither", None).with("matches", variant));
    }
    Ok(out)
}
