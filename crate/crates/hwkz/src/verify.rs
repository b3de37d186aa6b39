use clap::ValueEnum;
use hwkz_core::dwork::{self, all_pass, CongruenceReport, GhostSequence};
use hwkz_core::kz::{self, KzParams};
use hwkz_core::laurent::SeparableForm;
use hwkz_core::ring::UnramifiedRing;
use hwkz_core::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ModeArg, RunConfig};
use crate::output::{heartbeat, ParamsOut};
use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ghosts,
    Admissible,
    HasseWitt,
    KzSolution,
    SolutionCongruence,
    Derivation,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Ghosts => "ghosts",
            Suite::Admissible => "admissible",
            Suite::HasseWitt => "hasse-witt",
            Suite::KzSolution => "kz-solution",
            Suite::SolutionCongruence => "solution-congruence",
            Suite::Derivation => "derivation",
        }
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub suite: &'static str,
    pub params: ParamsOut,
    pub mode: ModeArg,
    pub seed: u64,
    pub pass: bool,
    pub reports: Vec<CongruenceReport>,
}

const AUTO_TERM_LIMIT: f64 = 1e7;

/// Number of monomials of degree `d` in `n` variables.
fn monomials(d: i64, n: usize) -> f64 {
    if d < 0 {
        return 0.0;
    }
    (1..n).fold(1.0, |acc, i| acc * (d as f64 + i as f64) / i as f64)
}

/// Rough size of the symbolic work touching levels `lo` and `hi`: the
/// product of the term counts of their largest Hasse-Witt entries.
fn estimated_terms(params: &KzParams, lo: usize, hi: usize) -> f64 {
    let size = |s: usize| params.hw_entry_degree(s, params.g, 1).map_or(f64::INFINITY, |d| monomials(d, params.n));
    if lo == hi {
        size(lo)
    } else {
        size(lo) * size(hi)
    }
}

fn symbolic(cfg: &RunConfig, lo: usize, hi: usize) -> bool {
    match cfg.mode {
        ModeArg::Symbolic => true,
        ModeArg::Evaluation => false,
        ModeArg::Auto => estimated_terms(&cfg.params, lo, hi) < AUTO_TERM_LIMIT,
    }
}

fn ring(cfg: &RunConfig, precision: u32) -> Result<UnramifiedRing, RunError> {
    Ok(UnramifiedRing::new(cfg.params.p, cfg.m, precision)?)
}

/// Seeded integer points; with `distinct`, only points whose coordinates
/// have pairwise distinct residues mod `p`.
fn points(cfg: &RunConfig, ring: &UnramifiedRing, distinct: bool) -> Result<Vec<Vec<Vec<u64>>>, RunError> {
    let p = cfg.params.p;
    let bound = p * p;
    let pool = dwork::sample_points(ring, cfg.params.n, if distinct { 64 * cfg.count } else { cfg.count }, bound, cfg.seed);
    let ok = |pt: &Vec<Vec<u64>>| !distinct || (0..pt.len()).all(|i| (0..i).all(|j| pt[i][0] % p != pt[j][0] % p));
    let chosen: Vec<_> = pool.into_iter().filter(ok).take(cfg.count).collect();
    if chosen.len() < cfg.count {
        return Err(RunError::Core(Error::SearchExhausted(64 * cfg.count)));
    }
    Ok(chosen)
}

fn at_points<F>(pts: &[Vec<Vec<u64>>], f: F) -> Result<Vec<CongruenceReport>, RunError>
where
    F: Fn(usize, &[Vec<u64>]) -> Result<Vec<CongruenceReport>, Error> + Sync,
{
    let per_point: Vec<Result<Vec<CongruenceReport>, Error>> =
        pts.par_iter().enumerate().map(|(k, pt)| f(k, pt).map(|rs| rs.into_iter().map(|r| r.with("point", k + 1)).collect())).collect();
    let mut out = Vec::new();
    for r in per_point {
        out.extend(r?);
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig, suite: Suite) -> Result<VerifyReport, RunError> {
    let params = &cfg.params;
    let guard = cfg.guard;
    let mut reports = Vec::new();
    match suite {
        Suite::Ghosts => {
            let tuple = kz::kz_tuple(params, cfg.l)?;
            if cfg.mode == ModeArg::Evaluation {
                let ring = ring(cfg, cfg.l as u32 + guard)?;
                let pts = points(cfg, &ring, false)?;
                reports = at_points(&pts, |_, pt| dwork::check_ghost_divisibility_at(&tuple, &ring, pt, cfg.l))?;
            } else {
                heartbeat(&format!("ghosts up to level {}", cfg.l));
                let seq = GhostSequence::new(&tuple)?;
                reports.extend(dwork::check_ghost_divisibility(&seq, guard)?);
                reports.extend(dwork::check_reconstruction(&seq)?);
            }
        }
        Suite::Admissible => reports.push(kz::check_kz_admissible(params, cfg.l)?),
        Suite::HasseWitt | Suite::Derivation => {
            for s in cfg.levels() {
                heartbeat(&format!("{} level {s}", suite.name()));
                let tuple = kz::kz_tuple(params, s + 1)?;
                if symbolic(cfg, s, s + 1) {
                    let seq = GhostSequence::up_to(&tuple, s)?;
                    reports.extend(symbolic_tuple_checks(suite, &seq, s, params.n, guard)?);
                } else {
                    let ring = ring(cfg, s as u32 + 1 + guard)?;
                    let pts = points(cfg, &ring, false)?;
                    reports.extend(at_points(&pts, |_, pt| evaluation_tuple_checks(suite, &tuple, &ring, pt, s, params.n))?);
                }
            }
        }
        Suite::KzSolution => {
            if cfg.levels().contains(&1) {
                reports.extend(kz::check_leading_terms(params)?);
                reports.extend(kz::check_minor(params)?);
                reports.extend(kz::det_phi1_check(params)?);
            }
            for s in cfg.levels() {
                heartbeat(&format!("kz-solution level {s}"));
                if symbolic(cfg, s, s) {
                    reports.extend(kz::check_kz_solution(params, s, guard)?);
                    reports.extend(kz::check_kz_identities(params, s, s == 1)?);
                    reports.push(kz::check_gradient_identity(params, s)?);
                } else {
                    let ring = ring(cfg, params.e * s as u32 + guard)?;
                    let pts = points(cfg, &ring, true)?;
                    reports.extend(at_points(&pts, |_, pt| kz::check_kz_solution_at(params, &ring, pt.to_vec(), s))?);
                }
            }
        }
        Suite::SolutionCongruence => {
            for s in cfg.levels() {
                heartbeat(&format!("solution-congruence level {s}"));
                if symbolic(cfg, s, s + 1) {
                    reports.extend(kz::check_solution_congruences(params, s, guard)?);
                    if s > 1 {
                        reports.extend(kz::check_mod_p_stability(params, s, guard)?);
                    }
                } else {
                    let ring = ring(cfg, s as u32 + guard)?;
                    let pts = points(cfg, &ring, false)?;
                    reports.extend(at_points(&pts, |_, pt| {
                        let mut r = kz::check_solution_congruences_at(params, &ring, pt.to_vec(), s)?;
                        if s > 1 {
                            r.extend(kz::check_mod_p_stability_at(params, &ring, pt.to_vec(), s)?);
                        }
                        Ok(r)
                    })?);
                }
            }
        }
    }
    Ok(VerifyReport {
        command: "verify",
        suite: suite.name(),
        params: params.into(),
        mode: cfg.mode,
        seed: cfg.seed,
        pass: all_pass(&reports),
        reports,
    })
}

fn symbolic_tuple_checks(suite: Suite, seq: &GhostSequence<SeparableForm>, s: usize, n: usize, guard: u32) -> Result<Vec<CongruenceReport>, Error> {
    let mut out = Vec::new();
    if suite == Suite::HasseWitt {
        out.push(dwork::check_hw_factorization_identity(seq, s)?);
        out.push(dwork::check_mod_p_factorization(seq, s, guard)?);
        out.push(dwork::check_ratio_congruence(seq, s, guard)?);
        out.push(dwork::check_det_congruence(seq, s, guard)?);
    } else {
        for v in 0..n {
            for ell in 0..=1 {
                out.push(dwork::check_derivation_congruence(seq, s, ell, v, guard)?);
            }
            for u in 0..=v {
                out.push(dwork::check_second_derivation_congruence(seq, s, u, v, guard)?);
            }
        }
    }
    Ok(out)
}

fn evaluation_tuple_checks(
    suite: Suite,
    tuple: &dwork::DworkTuple<SeparableForm>,
    ring: &UnramifiedRing,
    pt: &[Vec<u64>],
    s: usize,
    n: usize,
) -> Result<Vec<CongruenceReport>, Error> {
    let mut out = Vec::new();
    if suite == Suite::HasseWitt {
        out.push(dwork::check_hw_factorization_identity_at(tuple, ring, pt, s)?);
        out.push(dwork::check_mod_p_factorization_at(tuple, ring, pt, s)?);
        out.push(dwork::check_ratio_congruence_at(tuple, ring, pt, s)?);
        out.push(dwork::check_det_congruence_at(tuple, ring, pt, s)?);
    } else {
        for v in 0..n {
            for ell in 0..=1 {
                out.push(dwork::check_derivation_congruence_at(tuple, ring, pt, s, ell, v)?);
            }
            for u in 0..=v {
                out.push(dwork::check_second_derivation_congruence_at(tuple, ring, pt, s, u, v)?);
            }
        }
    }
    Ok(out)
}
