use std::path::Path;

use hwkz_core::dwork::{all_pass, CongruenceReport};
use hwkz_core::padic_eval::{self, DomainPoint, LimitApproximation, PointEvaluation};
use hwkz_core::ring::{UnramifiedRing, Valuation};
use hwkz_core::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{heartbeat, ParamsOut};
use crate::RunError;

#[derive(Serialize)]
pub struct LimitOut {
    pub target: String,
    pub certified_precision: usize,
    /// Smallest valuation of `X_{s+1} − X_s` for `s = 1, 2, …`.
    pub increment_valuations: Vec<Valuation>,
    pub det_valuations: Vec<Valuation>,
    pub certified: bool,
}

#[derive(Serialize)]
pub struct PointOut {
    pub index: usize,
    /// Each coordinate as `m` base-`p` digit strings, most significant digit first.
    pub coordinates: Vec<Vec<String>>,
    pub teichmuller: bool,
    pub in_d: bool,
    pub in_d_o: bool,
    pub limits: Vec<LimitOut>,
    pub reports: Vec<CongruenceReport>,
    pub rank_minor_unit: bool,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct ConvergeReport {
    pub command: &'static str,
    pub params: ParamsOut,
    pub m: usize,
    pub precision: u32,
    pub s_max: usize,
    pub seed: u64,
    pub rank_hypothesis: bool,
    pub rank_witness_found: bool,
    pub pass: bool,
    pub points: Vec<PointOut>,
}

pub struct ConvergeRun {
    pub report: ConvergeReport,
    /// Entrywise increment valuations: point, target, s, row, column, valuation.
    pub table: Vec<(usize, String, usize, usize, usize, String)>,
}

fn digits(mut x: u64, p: u64, len: u32) -> String {
    let mut d = Vec::with_capacity(len as usize);
    for _ in 0..len {
        d.push((x % p).to_string());
        x /= p;
    }
    d.reverse();
    d.join(".")
}

fn valuation_text(v: &Valuation) -> String {
    if v.saturated {
        format!(">={}", v.value)
    } else {
        v.value.to_string()
    }
}

fn limit_out(l: &LimitApproximation) -> LimitOut {
    LimitOut {
        target: l.target.name(),
        certified_precision: l.certified_precision,
        increment_valuations: (1..=l.increments.len()).filter_map(|s| l.increment_valuation(s)).collect(),
        det_valuations: l.det_valuations.clone(),
        certified: l.fully_certified() && l.det_valuations.iter().all(|v| v.value == 0 && !v.saturated),
    }
}

fn evaluate_point(cfg: &RunConfig, ring: &UnramifiedRing, index: usize, point: &DomainPoint) -> Result<(PointOut, Vec<LimitApproximation>), Error> {
    let params = &cfg.params;
    let eval = PointEvaluation::new(params, ring, point.a.clone(), cfg.s_max + 1)?;
    let mut limits = vec![eval.ratio_sequence()?, eval.solution_bundle_sequence()?];
    for i in 0..params.n {
        let (di, da) = eval.derivative_bundle_sequence(i)?;
        limits.push(di);
        limits.push(da);
    }
    let precision = cfg.s_max as u32 + 2;
    let mut reports = Vec::new();
    for s in (1..=cfg.s_max.min(2)).filter(|s| params.e * *s as u32 <= precision) {
        reports.extend(eval.check_gaudin_relation(s)?);
    }
    for s in 1..=cfg.s_max {
        for v in 0..params.n {
            for u in 0..=v {
                reports.push(eval.check_connection_identity(s, u, v)?);
            }
        }
    }
    let rank = eval.rank_check()?;
    let rank_minor_unit = rank.pass;
    let limits_out: Vec<LimitOut> = limits.iter().map(limit_out).collect();
    let pass = all_pass(&reports) && limits_out.iter().all(|l| l.certified);
    reports.push(rank);
    let p = params.p;
    let coordinates = point.a.iter().map(|x| x.iter().map(|c| digits(*c, p, precision)).collect()).collect();
    let out = PointOut {
        index,
        coordinates,
        teichmuller: point.teichmuller,
        in_d: point.in_d,
        in_d_o: point.in_d_o,
        limits: limits_out,
        reports,
        rank_minor_unit,
        pass,
    };
    Ok((out, limits))
}

pub fn run(cfg: &RunConfig) -> Result<ConvergeRun, RunError> {
    let params = &cfg.params;
    padic_eval::check_extension_degree(params, cfg.m).map_err(RunError::Config)?;
    let rank_hypothesis = padic_eval::rank_hypothesis_holds(params, cfg.m);
    if !rank_hypothesis {
        heartbeat(&format!("warning: p^m <= d_phi + d_M = {}; rank witnesses may not exist", params.d_phi() + params.d_m()));
    }
    let precision = cfg.s_max as u32 + 2;
    let ring = padic_eval::point_ring(params.p, cfg.m, precision)?;
    heartbeat(&format!("searching {} domain points", cfg.count));
    let attempts = cfg.attempts.unwrap_or_else(|| padic_eval::default_attempts(cfg.count));
    let points = padic_eval::find_domain_points_within(params, &ring, cfg.count, cfg.seed, attempts)?;
    let total = points.len();
    let results: Vec<Result<(PointOut, Vec<LimitApproximation>), Error>> = points
        .par_iter()
        .enumerate()
        .map(|(k, pt)| {
            let r = evaluate_point(cfg, &ring, k + 1, pt);
            heartbeat(&format!("point {}/{total} done", k + 1));
            r
        })
        .collect();
    let mut outs = Vec::with_capacity(total);
    let mut table = Vec::new();
    for r in results {
        let (out, limits) = r?;
        for l in &limits {
            for (k, m) in l.increments.iter().enumerate() {
                for row in 0..m.rows() {
                    for col in 0..m.cols() {
                        table.push((out.index, l.target.name(), k + 1, row + 1, col + 1, valuation_text(m.get(row, col))));
                    }
                }
            }
        }
        outs.push(out);
    }
    let rank_witness_found = outs.iter().any(|o| o.rank_minor_unit);
    let pass = outs.iter().all(|o| o.pass) && (rank_witness_found || !rank_hypothesis);
    let report = ConvergeReport {
        command: "converge",
        params: params.into(),
        m: cfg.m,
        precision,
        s_max: cfg.s_max,
        seed: cfg.seed,
        rank_hypothesis,
        rank_witness_found,
        pass,
        points: outs,
    };
    Ok(ConvergeRun { report, table })
}

pub fn write_table(path: &Path, table: &[(usize, String, usize, usize, usize, String)]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| RunError::Io(e.to_string()))?;
    w.write_record(["point", "target", "s", "row", "col", "valuation"]).map_err(|e| RunError::Io(e.to_string()))?;
    for (point, target, s, row, col, v) in table {
        w.serialize((point, target, s, row, col, v)).map_err(|e| RunError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| RunError::Io(e.to_string()))
}

/// Every report of every point, for the summary table.
pub fn all_reports(report: &ConvergeReport) -> Vec<CongruenceReport> {
    report.points.iter().flat_map(|p| p.reports.iter().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_strings() {
        assert_eq!(digits(170, 7, 4), "0.3.3.2");
        assert_eq!(digits(12, 13, 2), "0.12");
    }
}
