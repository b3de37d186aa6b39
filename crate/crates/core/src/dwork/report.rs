use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ring::Valuation;

/// How a check was carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    /// Full polynomial identities or congruences.
    Symbolic,
    /// Values at sample points.
    Evaluation,
}

/// A report parameter value.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Param {
    Int(i64),
    Ints(Vec<i64>),
    Text(String),
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Int(v)
    }
}
impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param::Int(v as i64)
    }
}
impl From<u32> for Param {
    fn from(v: u32) -> Self {
        Param::Int(v as i64)
    }
}
impl From<usize> for Param {
    fn from(v: usize) -> Self {
        Param::Int(v as i64)
    }
}
impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}
impl From<String> for Param {
    fn from(v: String) -> Self {
        Param::Text(v)
    }
}
impl From<Vec<i64>> for Param {
    fn from(v: Vec<i64>) -> Self {
        Param::Ints(v)
    }
}

/// Outcome of one congruence or identity check.
///
/// `claimed_exponent = None` marks an exact identity over `Z`; then
/// `measured_valuation` is `None` when the residual vanishes. Otherwise
/// `pass` is exactly `measured_valuation ≥ claimed_exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CongruenceReport {
    pub check: String,
    pub params: BTreeMap<String, Param>,
    pub mode: Mode,
    pub claimed_exponent: Option<u32>,
    pub measured_valuation: Option<Valuation>,
    pub pass: bool,
    pub witness: Option<String>,
}

impl CongruenceReport {
    pub fn congruence(check: &str, mode: Mode, claimed: u32, measured: Valuation, witness: Option<String>) -> Self {
        let pass = measured.at_least(claimed);
        CongruenceReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            mode,
            claimed_exponent: Some(claimed),
            measured_valuation: Some(measured),
            pass,
            witness: if pass { None } else { witness },
        }
    }

    /// Exact identity; `residual` is the valuation of the nonzero residual, if any.
    pub fn identity(check: &str, mode: Mode, residual: Option<Valuation>, witness: Option<String>) -> Self {
        let pass = residual.is_none();
        CongruenceReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            mode,
            claimed_exponent: None,
            measured_valuation: residual,
            pass,
            witness: if pass { None } else { witness },
        }
    }

    /// A pass/fail predicate with no valuation attached.
    pub fn predicate(check: &str, mode: Mode, pass: bool, witness: Option<String>) -> Self {
        CongruenceReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            mode,
            claimed_exponent: None,
            measured_valuation: None,
            pass,
            witness: if pass { None } else { witness },
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Param>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

/// Every report passed.
pub fn all_pass(reports: &[CongruenceReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
