//! The acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hwkz_core::dwork::{self, CongruenceReport, GhostSequence, IndexSet, Param};
use hwkz_core::kz::{self, make_params, KzParams};
use hwkz_core::laurent::LatticePolytopeT;
use hwkz_core::padic_eval::{self, PointEvaluation};
use hwkz_core::ring::UnramifiedRing;

type Outcome = Result<String, String>;

fn params(p: u64, q: u64, g: usize) -> KzParams {
    make_params(p, q, g).expect("valid parameters").with_s_max(4)
}

fn require(reports: &[CongruenceReport], what: &str) -> Result<(), String> {
    match reports.iter().find(|r| !r.pass) {
        None => Ok(()),
        Some(r) => Err(format!("{what}: {} failed ({:?}, witness {:?})", r.check, r.params, r.witness)),
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn sample(ring: &UnramifiedRing, n: usize, count: usize, seed: u64) -> Vec<Vec<Vec<u64>>> {
    let p = ring.base().p();
    dwork::sample_points(ring, n, count, p * p, seed)
}

fn ghost_divisibility() -> Outcome {
    let start = Instant::now();
    let k = params(7, 3, 1);
    let seq = GhostSequence::new(&kz::kz_tuple(&k, 2).map_err(err)?).map_err(err)?;
    let reports = dwork::check_ghost_divisibility(&seq, 0).map_err(err)?;
    require(&reports, "V_s mod p^s")?;
    if reports.len() != 2 {
        return Err(format!("expected levels 1 and 2, got {}", reports.len()));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("V_1 = 0 mod 7, V_2 = 0 mod 49 in {elapsed:.2?}"))
}

fn admissibility() -> Outcome {
    for (p, g) in [(7, 1), (13, 2)] {
        let r = kz::check_kz_admissible(&params(p, 3, g), 4).map_err(err)?;
        require(&[r], "KZ intervals")?;
    }
    let example = dwork::check_admissible(5, &[2; 4], &vec![IndexSet::range(4); 5], &vec![LatticePolytopeT::interval(0, 104); 5]).map_err(err)?;
    require(&[example], "p = 5 example")?;
    let k = params(7, 3, 1);
    let widened = kz::kz_newton_intervals(&k, 4, 7).map_err(err)?;
    let mutant = dwork::check_admissible(7, &[1; 4], &vec![k.gamma(); 5], &widened).map_err(err)?;
    match (mutant.pass, mutant.witness) {
        (false, Some(w)) => Ok(format!("KZ data and p = 5 example pass; widened mutant fails at {w}")),
        _ => Err("widened mutant was accepted".into()),
    }
}

fn mod_p_factorization() -> Outcome {
    let small = params(7, 3, 1);
    let seq = GhostSequence::up_to(&kz::kz_tuple(&small, 3).map_err(err)?, 2).map_err(err)?;
    for s in 1..=2 {
        require(&[dwork::check_mod_p_factorization(&seq, s, 0).map_err(err)?], "symbolic (7,3,1)")?;
    }
    let big = params(13, 3, 2);
    let tuple = kz::kz_tuple(&big, 3).map_err(err)?;
    let ring = UnramifiedRing::new(13, 1, 1).map_err(err)?;
    for pt in sample(&ring, big.n, 20, 3) {
        require(&[dwork::check_mod_p_factorization_at(&tuple, &ring, &pt, 2).map_err(err)?], "(13,3,2) at a point")?;
    }
    Ok("symbolic (7,3,1) s = 1, 2; (13,3,2) s = 2 at 20 points".into())
}

fn ratio_congruence() -> Outcome {
    let small = params(7, 3, 1);
    let seq = GhostSequence::up_to(&kz::kz_tuple(&small, 3).map_err(err)?, 2).map_err(err)?;
    require(&[dwork::check_ratio_congruence(&seq, 2, 0).map_err(err)?], "symbolic (7,3,1) s = 2")?;
    let big = params(13, 3, 2);
    let tuple = kz::kz_tuple(&big, 4).map_err(err)?;
    let ring = UnramifiedRing::new(13, 1, 3).map_err(err)?;
    for pt in sample(&ring, big.n, 20, 4) {
        for s in 2..=3 {
            require(&[dwork::check_ratio_congruence_at(&tuple, &ring, &pt, s).map_err(err)?], "(13,3,2) at a point")?;
        }
    }
    Ok("mod 49 symbolically for (7,3,1); mod 13^s, s = 2, 3 at 20 points for (13,3,2)".into())
}

fn derivations() -> Outcome {
    let k = params(7, 3, 1);
    let tuple = kz::kz_tuple(&k, 3).map_err(err)?;
    let ring = UnramifiedRing::new(7, 1, 3).map_err(err)?;
    let mut checked = 0;
    for pt in sample(&ring, k.n, 20, 5) {
        for s in 1..=2 {
            for v in 0..k.n {
                for ell in 0..=1 {
                    require(&[dwork::check_derivation_congruence_at(&tuple, &ring, &pt, s, ell, v).map_err(err)?], "first derivatives")?;
                    checked += 1;
                }
                for u in 0..k.n {
                    require(&[dwork::check_second_derivation_congruence_at(&tuple, &ring, &pt, s, u, v).map_err(err)?], "second derivatives")?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} checks at 20 points, s = 1, 2"))
}

fn kz_congruences() -> Outcome {
    let small = params(7, 3, 1);
    for s in 1..=2 {
        require(&kz::check_kz_solution(&small, s, 0).map_err(err)?, "(7,3,1)")?;
        require(&kz::check_kz_identities(&small, s, s == 1).map_err(err)?, "exact identities")?;
    }
    require(&kz::check_kz_solution(&params(13, 3, 2), 1, 0).map_err(err)?, "(13,3,2)")?;
    Ok("(7,3,1) s = 1, 2 mod 7^s; (13,3,2) s = 1 mod 13; column sums included".into())
}

fn leading_terms_and_degrees() -> Outcome {
    let mut notes = Vec::new();
    for (p, g, d_phi, d_m) in [(7, 1, 2, 1), (13, 2, 20, 17)] {
        let k = params(p, 3, g);
        if (k.d_phi(), k.d_m()) != (d_phi, d_m) {
            return Err(format!("({p},3,{g}): d_phi = {}, d_M = {}", k.d_phi(), k.d_m()));
        }
        let reports = [kz::check_leading_terms(&k).map_err(err)?, kz::check_minor(&k).map_err(err)?, kz::det_phi1_check(&k).map_err(err)?].concat();
        require(&reports, &format!("({p},3,{g})"))?;
        let signs: Vec<String> = reports
            .iter()
            .filter(|r| r.check == "leading_term")
            .map(|r| match &r.params["sign"] {
                Param::Int(v) => format!("{v:+}"),
                other => format!("{other:?}"),
            })
            .collect();
        notes.push(format!("({p},3,{g}) signs {}", signs.join(",")));
    }
    Ok(notes.join("; "))
}

fn solution_congruences() -> Outcome {
    let small = params(7, 3, 1);
    require(&kz::check_solution_congruences(&small, 1, 0).map_err(err)?, "symbolic (7,3,1) s = 1")?;
    for (k, seed) in [(small.clone(), 6), (params(13, 3, 2), 7)] {
        let ring = UnramifiedRing::new(k.p, 1, 2).map_err(err)?;
        for pt in sample(&ring, k.n, 20, seed) {
            for s in 1..=2 {
                require(&kz::check_solution_congruences_at(&k, &ring, pt.clone(), s).map_err(err)?, "at a point")?;
            }
            require(&kz::check_mod_p_stability_at(&k, &ring, pt, 2).map_err(err)?, "mod p stability")?;
        }
    }
    Ok("symbolic (7,3,1) s = 1; 20 points per set at s = 1, 2 with all derivative variants".into())
}

struct PointSet {
    label: &'static str,
    params: KzParams,
    ring: UnramifiedRing,
    points: Vec<Vec<Vec<u64>>>,
}

fn point_sets() -> Result<Vec<PointSet>, String> {
    [("(7,3,1) m=1", 7, 1, 1), ("(13,3,2) m=2", 13, 2, 2)]
        .into_iter()
        .map(|(label, p, g, m)| {
            let k = params(p, 3, g);
            let ring = padic_eval::point_ring(p, m, 5).map_err(err)?;
            let points = padic_eval::find_domain_points(&k, &ring, 10, 2024).map_err(err)?.into_iter().map(|d| d.a).collect();
            Ok(PointSet { label, params: k, ring, points })
        })
        .collect()
}

fn convergence(sets: &[PointSet]) -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for set in sets {
        for pt in &set.points {
            let eval = PointEvaluation::new(&set.params, &set.ring, pt.clone(), 4).map_err(err)?;
            for seq in [eval.ratio_sequence().map_err(err)?, eval.solution_bundle_sequence().map_err(err)?] {
                if !seq.fully_certified() {
                    return Err(format!("{}: {} certified only to {}", set.label, seq.target.name(), seq.certified_precision));
                }
                if seq.det_valuations.iter().any(|v| v.value != 0 || v.saturated) {
                    return Err(format!("{}: det B_s not a unit", set.label));
                }
            }
        }
        notes.push(format!("{} {} points", set.label, set.points.len()));
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(600) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} certified to s = 3 at M = 5 in {elapsed:.2?}", notes.join(", ")))
}

fn gaudin(sets: &[PointSet]) -> Outcome {
    for set in sets {
        for pt in &set.points {
            let eval = PointEvaluation::new(&set.params, &set.ring, pt.clone(), 2).map_err(err)?;
            for s in 1..=2 {
                require(&eval.check_gaudin_relation(s).map_err(err)?, set.label)?;
            }
        }
    }
    Ok("every i at every point, s = 1, 2".into())
}

fn rank(sets: &[PointSet]) -> Outcome {
    let mut notes = Vec::new();
    for set in sets {
        let m = set.ring.degree();
        if !padic_eval::rank_hypothesis_holds(&set.params, m) {
            return Err(format!("{}: p^m <= d_phi + d_M", set.label));
        }
        let mut units = 0;
        for pt in &set.points {
            let eval = PointEvaluation::new(&set.params, &set.ring, pt.clone(), 1).map_err(err)?;
            units += eval.rank_check().map_err(err)?.pass as usize;
        }
        if units == 0 {
            return Err(format!("{}: no point with a unit minor", set.label));
        }
        notes.push(format!("{} {units}/{}", set.label, set.points.len()));
    }
    Ok(format!("unit minors: {}", notes.join(", ")))
}

fn hwkz(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hwkz")).args(args).env("HWKZ_WORKERS", "1").output().expect("binary runs")
}

fn determinism_and_exit_codes() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let mut bytes = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}.json"));
        let o = hwkz(&["converge", "--p", "7", "--q", "3", "--g", "1", "--count", "10", "--seed", "5", "--out", out.to_str().unwrap()]);
        if o.status.code() != Some(0) {
            return Err(format!("converge exited with {:?}", o.status.code()));
        }
        bytes.push((std::fs::read(&out).map_err(err)?, std::fs::read(out.with_extension("csv")).map_err(err)?));
    }
    if bytes[0] != bytes[1] {
        return Err("reports differ between identical runs".into());
    }
    let cases: [(&[&str], i32); 5] = [
        (&["verify", "ghosts", "--p", "7", "--q", "3", "--g", "1", "--l", "2"], 0),
        (&["verify", "kz-solution", "--p", "7", "--q", "3", "--g", "1", "--s", "2"], 0),
        (&["verify", "ghosts", "--p", "4", "--q", "3", "--g", "1"], 2),
        (&["converge", "--p", "13", "--q", "3", "--g", "2", "--m", "1"], 2),
        (&["converge", "--p", "7", "--q", "3", "--g", "1", "--count", "10", "--attempts", "2"], 3),
    ];
    for (args, code) in cases {
        let o = hwkz(args);
        if o.status.code() != Some(code) {
            return Err(format!("{args:?} exited with {:?}, expected {code}", o.status.code()));
        }
        if args[3] == "4" && !String::from_utf8_lossy(&o.stderr).contains("p not prime") {
            return Err("missing 'p not prime' message".into());
        }
    }
    Ok("byte-identical JSON and CSV; exit codes 0, 2, 3 as specified".into())
}

fn main() -> ExitCode {
    let sets = point_sets();
    let with_sets = |f: fn(&[PointSet]) -> Outcome| -> Outcome {
        match &sets {
            Ok(s) => f(s),
            Err(e) => Err(format!("domain search: {e}")),
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("ghost divisibility", Box::new(ghost_divisibility)),
        ("admissibility", Box::new(admissibility)),
        ("mod-p factorization", Box::new(mod_p_factorization)),
        ("ratio congruence", Box::new(ratio_congruence)),
        ("derivation congruences", Box::new(derivations)),
        ("KZ congruences", Box::new(kz_congruences)),
        ("leading terms and degrees", Box::new(leading_terms_and_degrees)),
        ("solution congruences", Box::new(solution_congruences)),
        ("convergence certification", Box::new(move || with_sets(convergence))),
        ("Gaudin relation", Box::new(move || with_sets(gaudin))),
        ("rank minor", Box::new(move || with_sets(rank))),
        ("determinism and exit codes", Box::new(determinism_and_exit_codes)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
