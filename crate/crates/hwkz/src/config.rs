use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hwkz_core::kz::{make_params, KzParams};
use serde::{Deserialize, Serialize};

/// How checks are carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Symbolic,
    Evaluation,
    /// Symbolic while the estimated term count stays below `10^7`.
    Auto,
}

/// Flags shared by every command. A JSON config file may supply any of
/// them under the same names; flags given on the command line win.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Opts {
    /// Prime p
    #[arg(long)]
    pub p: Option<u64>,
    /// Denominator q, dividing p - 1
    #[arg(long)]
    pub q: Option<u64>,
    /// Number g of solutions; there are n = qg + 1 points
    #[arg(long)]
    pub g: Option<usize>,
    /// Degree of the unramified extension used for points.
    #[arg(long)]
    pub m: Option<usize>,
    /// Highest level checked
    #[arg(long = "s-max")]
    pub s_max: Option<usize>,
    /// Seed for point sampling
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Number of evaluation or domain points.
    #[arg(long)]
    pub count: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Extra p-adic digits scanned beyond each claimed exponent.
    #[arg(long = "precision-guard")]
    pub precision_guard: Option<u32>,
    /// Tuple length for the ghost, admissibility and Hasse-Witt suites.
    #[arg(long)]
    pub l: Option<usize>,
    /// Check this level only.
    #[arg(long)]
    pub s: Option<usize>,
    /// Candidate budget for the domain point search.
    #[arg(long)]
    pub attempts: Option<usize>,
}

impl Opts {
    fn or(self, file: Opts) -> Opts {
        Opts {
            p: self.p.or(file.p),
            q: self.q.or(file.q),
            g: self.g.or(file.g),
            m: self.m.or(file.m),
            s_max: self.s_max.or(file.s_max),
            seed: self.seed.or(file.seed),
            mode: self.mode.or(file.mode),
            count: self.count.or(file.count),
            out: self.out.or(file.out),
            precision_guard: self.precision_guard.or(file.precision_guard),
            l: self.l.or(file.l),
            s: self.s.or(file.s),
            attempts: self.attempts.or(file.attempts),
        }
    }
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: KzParams,
    pub m: usize,
    pub s_max: usize,
    pub seed: u64,
    pub mode: ModeArg,
    pub count: usize,
    pub out: Option<PathBuf>,
    pub guard: u32,
    pub l: usize,
    pub s: Option<usize>,
    pub attempts: Option<usize>,
}

/// Configuration problems; the process exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<hwkz_core::Error> for ConfigError {
    fn from(e: hwkz_core::Error) -> Self {
        match e {
            hwkz_core::Error::NotPrime(x) => ConfigError(format!("p not prime (or q not prime): {x}")),
            other => ConfigError(other.to_string()),
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<Opts, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ConfigError(format!("bad config {}: {e}", path.display())))
}

/// Merges flags over the config file and validates the result.
/// `default_s_max` and `default_count` depend on the command.
pub fn resolve(cli: Opts, file: Option<&Path>, default_s_max: usize, default_count: usize) -> Result<RunConfig, ConfigError> {
    let opts = match file {
        Some(path) => cli.or(read_config_file(path)?),
        None => cli,
    };
    let need = |name: &str, v: Option<u64>| v.ok_or_else(|| ConfigError(format!("missing --{name}")));
    let p = need("p", opts.p)?;
    if !hwkz_core::ring::is_prime(p) {
        return Err(ConfigError(format!("p not prime: {p}")));
    }
    let q = need("q", opts.q)?;
    let g = need("g", opts.g.map(|x| x as u64))? as usize;
    let s_max = opts.s_max.unwrap_or(default_s_max);
    if s_max == 0 {
        return Err(ConfigError("--s-max must be at least 1".into()));
    }
    if opts.s == Some(0) {
        return Err(ConfigError("--s must be at least 1".into()));
    }
    let s_max = s_max.max(opts.s.unwrap_or(0));
    let params = make_params(p, q, g)?.with_s_max(s_max + 1);
    let m = opts.m.unwrap_or(1);
    if m == 0 {
        return Err(ConfigError("--m must be at least 1".into()));
    }
    let count = opts.count.unwrap_or(default_count);
    if count == 0 {
        return Err(ConfigError("--count must be at least 1".into()));
    }
    Ok(RunConfig {
        params,
        m,
        s_max,
        seed: opts.seed.unwrap_or(0),
        mode: opts.mode.unwrap_or(ModeArg::Auto),
        count,
        out: opts.out,
        guard: opts.precision_guard.unwrap_or(2),
        l: opts.l.unwrap_or(2),
        s: opts.s,
        attempts: opts.attempts,
    })
}

impl RunConfig {
    /// The levels a verify run covers: `--s` alone, or `1..=s_max`.
    pub fn levels(&self) -> Vec<usize> {
        match self.s {
            Some(s) => vec![s],
            None => (1..=self.s_max).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(p: u64) -> Opts {
        Opts { p: Some(p), q: Some(3), g: Some(1), ..Opts::default() }
    }

    #[test]
    fn flags_override_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"p": 13, "q": 3, "g": 2, "seed": 9, "count": 4}"#).unwrap();
        let cfg = resolve(Opts { g: Some(1), p: Some(7), ..Opts::default() }, Some(&path), 2, 20).unwrap();
        assert_eq!((cfg.params.p, cfg.params.g, cfg.seed, cfg.count), (7, 1, 9, 4));
        assert_eq!(cfg.levels(), vec![1, 2]);
    }

    #[test]
    fn invalid_input() {
        assert!(resolve(opts(4), None, 2, 1).unwrap_err().0.contains("p not prime"));
        assert!(resolve(opts(3), None, 2, 1).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"p": 7, "bogus": 1}"#).unwrap();
        assert!(resolve(Opts::default(), Some(&path), 2, 1).is_err());
    }
}
