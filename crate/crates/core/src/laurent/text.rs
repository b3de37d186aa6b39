//! Canonical text form: one term per line in increasing exponent order,
//! written `coeff * t1^a1 * z2^b2 ...` with zero exponents omitted.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;

use num_bigint::BigInt;

use super::{LaurentPoly, VarLayout};
use crate::{Error, Result};

impl LaurentPoly {
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let r = self.layout().r;
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&c.to_string());
            for (k, x) in e.iter().enumerate() {
                if *x != 0 {
                    let name = if k < r { format!("t{}", k + 1) } else { format!("z{}", k - r + 1) };
                    out.push_str(&format!(" * {name}^{x}"));
                }
            }
        }
        out
    }

    pub fn parse_text(layout: VarLayout, text: &str) -> Result<Self> {
        let mut f = LaurentPoly::zero(layout);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut parts = line.split('*').map(str::trim);
            let coeff: BigInt = parts
                .next()
                .unwrap_or_default()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient in `{line}`")))?;
            let mut e = vec![0i32; layout.width()];
            for factor in parts {
                let (name, exp) = factor.split_once('^').unwrap_or((factor, "1"));
                let exp: i32 = exp.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                let (block, idx) = name.split_at(1);
                let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable `{name}`")))?;
                let slot = match block {
                    "t" if (1..=layout.r).contains(&idx) => idx - 1,
                    "z" if (1..=layout.n).contains(&idx) => layout.r + idx - 1,
                    _ => return Err(Error::Parse(format!("unknown variable `{name}`"))),
                };
                e[slot] += exp;
            }
            f.add_term(e.into(), coeff);
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let l = VarLayout::new(1, 2).unwrap();
        let f = LaurentPoly::monomial(l, &[2, 0, -1], -3).add(&LaurentPoly::constant(l, 5)).unwrap();
        let text = f.to_text();
        assert_eq!(text, "5\n-3 * t1^2 * z2^-1");
        assert_eq!(LaurentPoly::parse_text(l, &text).unwrap(), f);
        assert_eq!(LaurentPoly::zero(l).to_text(), "0");
        assert!(LaurentPoly::parse_text(l, "0").unwrap().is_zero());
        assert!(LaurentPoly::parse_text(l, "2 * z3").is_err());
        assert!(LaurentPoly::parse_text(l, "x * z1").is_err());
    }
}
