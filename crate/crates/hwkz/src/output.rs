use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use hwkz_core::dwork::CongruenceReport;
use hwkz_core::kz::KzParams;
use serde::Serialize;

#[derive(Serialize)]
pub struct ParamsOut {
    pub p: u64,
    pub q: u64,
    pub g: usize,
    pub e: u32,
    pub n: usize,
}

impl From<&KzParams> for ParamsOut {
    fn from(k: &KzParams) -> Self {
        ParamsOut { p: k.p, q: k.q, g: k.g, e: k.e, n: k.n }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// One line per check name: passes out of runs, and the smallest margin
/// `measured − claimed` seen.
pub fn summary_table(reports: &[CongruenceReport]) -> String {
    let mut rows: BTreeMap<&str, (usize, usize, Option<i64>)> = BTreeMap::new();
    for r in reports {
        let row = rows.entry(r.check.as_str()).or_default();
        row.1 += 1;
        if r.pass {
            row.0 += 1;
        }
        if let (Some(c), Some(v)) = (r.claimed_exponent, r.measured_valuation) {
            let margin = v.value as i64 - c as i64;
            row.2 = Some(row.2.map_or(margin, |m| m.min(margin)));
        }
    }
    let mut out = format!("{:<36} {:>9} {:>8}\n", "check", "passed", "margin");
    for (name, (pass, total, margin)) in rows {
        let margin = margin.map_or("-".to_string(), |m| m.to_string());
        out.push_str(&format!("{name:<36} {:>9} {margin:>8}\n", format!("{pass}/{total}")));
    }
    out
}

/// JSON goes to `out` when given, with the summary on standard output;
/// otherwise the JSON goes to standard output and the summary to standard error.
pub fn emit(json: &str, summary: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, json)?;
            print!("{summary}");
        }
        None => {
            std::io::stdout().write_all(json.as_bytes())?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

pub fn heartbeat(msg: &str) {
    eprintln!("[hwkz] {msg}");
}

#[cfg(test)]
mod tests {
    use super::*;
    use hwkz_core::dwork::Mode;
    use hwkz_core::ring::Valuation;

    #[test]
    fn summary_counts_and_margins() {
        let reports = vec![
            CongruenceReport::congruence("a", Mode::Symbolic, 1, Valuation::exact(3), None),
            CongruenceReport::congruence("a", Mode::Symbolic, 2, Valuation::exact(1), None),
            CongruenceReport::predicate("b", Mode::Symbolic, true, None),
        ];
        let t = summary_table(&reports);
        assert!(t.contains("1/2") && t.contains("-1"));
        assert!(t.lines().any(|l| l.starts_with('b') && l.contains("1/1")));
    }
}
