//! Named checks C1..C25, each binding a quantitative statement about metric
//! lattices to an exhaustive or sampled sweep with exact assertions.
//!
//! `max_violation` is the largest signed `lhs - rhs` for inequalities, the
//! largest `|lhs - rhs|` for equalities and `1` for a failed structural
//! property, so a check passes exactly when it is at most 0. Ties between
//! equally bad instances go to the earliest one in enumeration order.

mod embeddings;
mod examples;
mod kernels;
mod logic;
mod pn;
mod selectors;
mod singular;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use metriclat_core::kernels::KernelError;
use metriclat_core::logic::LogicError;
use metriclat_core::partition::{bell_numbers, PartitionError};
use metriclat_core::{LatticeError, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sweep::{pool, Worst};

/// Check ids with a one-line statement each.
pub const CHECKS: [(&str, &str); 25] = [
    ("C1", "metric-lattice sentences vanish on P_n and Boolean lattices"),
    ("C2", "#(x+y) and #xy for singular y"),
    ("C3", "d(x, Σ_n) = ([x]-1)/(n-1)"),
    ("C4", "x ≤ y implies ⟨x⟩ - ⟨y⟩ ≤ 2(#x - #y)"),
    ("C5", "d(x, Σ_n) ≤ 48 max_y φ(x,y) and the x* bound"),
    ("C6", "modular elements are the singular partitions"),
    ("C7", "singular partitions are within 1/(n-1) of a maximal Boolean sublattice"),
    ("C8", "selectors: combinatorial and metric descriptions agree"),
    ("C9", "selector repair"),
    ("C10", "χ_z(y) ∸ 2d(y+z,1) = 0"),
    ("C11", "selector trim: d(z,w) ≤ 4|1-|x|-|z||"),
    ("C12", "d(z, Γ(y)) ≤ 24 d(x,y) for z ∈ Γ(x)"),
    ("C13", "d(y,Γ(x)) ≤ 4|1-|x|-|y|| + 20d(x+y,1) + 1200 max_w φ(y,w)"),
    ("C14", "Hausdorff closed form and γ search agree with brute force"),
    ("C15", "d_Haus(Γ(x),Γ(y)) ≤ d(x,y)"),
    ("C16", "d(x,y) ≤ 4 d_Haus and d(x,x+y) ≤ 2 d_Haus"),
    ("C17", "meet is not uniformly continuous on P_3n"),
    ("C18", "complement pair in P_4"),
    ("C19", "inclusion-exclusion fails in P_3"),
    ("C20", "Björner embeddings: isometric join embeddings that are not elementary"),
    ("C21", "ψ separates Π_n from its image in Π_2n"),
    ("C22", "kernel suite: Wilf, PSD, CND, Kotelyanskii, FKG"),
    ("C23", "rank on NC_4 is not submodular"),
    ("C24", "selector sets form a meet semilattice with ρ = d'"),
    ("C25", "search for the finite condition behind property Γ (exploratory)"),
];

/// Default cap on planned instances per run.
pub const DEFAULT_BUDGET: u64 = 10_000_000_000;
/// Cap with `--deep`.
pub const DEEP_BUDGET: u64 = 1_000_000_000_000;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("{check}: {reason}")]
    BudgetExceeded { check: String, reason: String },
    #[error("{check}: {reason}")]
    BadParams { check: String, reason: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Inclusive range of sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl NRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        NRange { lo, hi }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

impl FromStr for NRange {
    type Err = String;

    /// `"5"` or `"2..7"` (inclusive).
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad size {t:?} in {s:?}"));
        let r = match s.split_once("..") {
            Some((a, b)) => NRange::new(num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let v = num(s)?;
                NRange::new(v, v)
            }
        };
        if r.lo > r.hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Params {
    pub n: Option<NRange>,
    pub seed: u64,
    pub deep: bool,
    /// Random instances for sampled parts.
    pub samples: Option<u64>,
    /// The constant `K` of C17, or the number of witnesses in C25.
    pub k: Option<i64>,
    pub budget: Option<u64>,
    /// Fill `elapsed_ms`; off by default so reports are byte-identical.
    pub timing: bool,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Exploratory,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Exploratory => "exploratory",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub n: String,
    pub instances: u64,
    #[serde(with = "crate::io::rational_str")]
    pub max_violation: Rational,
    pub witness: String,
    pub status: Status,
    pub seed: u64,
    pub elapsed_ms: u64,
    pub params: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// An extremal ratio and where it was attained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimate {
    pub check_id: String,
    pub n: String,
    #[serde(with = "crate::io::rational_str")]
    pub value: Rational,
    /// The constant the ratio is bounded by.
    #[serde(with = "crate::io::rational_str")]
    pub bound: Rational,
    pub witness: String,
    pub instances: u64,
}

/// State shared by one check run.
pub(crate) struct Run<'a> {
    id: &'static str,
    params: &'a Params,
    planned: u128,
    notes: BTreeMap<String, String>,
}

/// What a check hands back.
pub(crate) struct Outcome {
    pub n: String,
    pub worst: Worst,
    pub exploratory: bool,
}

impl Outcome {
    pub fn new(n: impl fmt::Display, worst: Worst) -> Self {
        Outcome { n: n.to_string(), worst, exploratory: false }
    }
}

impl<'a> Run<'a> {
    fn new(id: &'static str, params: &'a Params) -> Self {
        Run { id, params, planned: 0, notes: BTreeMap::new() }
    }

    pub fn seed(&self) -> u64 {
        self.params.seed
    }

    pub fn samples(&self, default: u64) -> u64 {
        self.params.samples.unwrap_or(default)
    }

    pub fn params_n(&self) -> Option<NRange> {
        self.params.n
    }

    pub fn k(&self) -> Option<i64> {
        self.params.k
    }

    pub fn bad(&self, reason: impl Into<String>) -> VerifyError {
        VerifyError::BadParams { check: self.id.into(), reason: reason.into() }
    }

    /// The requested sizes, or `default`. Sizes above `plain` need `--deep`;
    /// sizes outside `min..=deep_max` are rejected.
    pub fn range(&mut self, default: NRange, min: usize, plain: usize, deep_max: usize) -> Result<NRange, VerifyError> {
        let r = self.params.n.unwrap_or(default);
        if r.lo < min {
            return Err(self.bad(format!("needs n >= {min}")));
        }
        if r.hi > deep_max {
            return Err(VerifyError::BudgetExceeded {
                check: self.id.into(),
                reason: format!("exhaustive sweep is limited to n <= {deep_max}"),
            });
        }
        if r.hi > plain && !self.params.deep {
            return Err(VerifyError::BudgetExceeded {
                check: self.id.into(),
                reason: format!("n > {plain} needs --deep"),
            });
        }
        self.note("range", r);
        Ok(r)
    }

    /// Registers planned work; fails before any sweep if the cap is exceeded.
    pub fn plan(&mut self, instances: u128) -> Result<(), VerifyError> {
        self.planned += instances;
        let cap = self.params.budget.unwrap_or(if self.params.deep { DEEP_BUDGET } else { DEFAULT_BUDGET });
        if self.planned > cap as u128 {
            return Err(VerifyError::BudgetExceeded {
                check: self.id.into(),
                reason: format!("{} planned instances exceed the cap of {cap}", self.planned),
            });
        }
        Ok(())
    }

    pub fn note(&mut self, key: &str, value: impl fmt::Display) {
        self.notes.insert(key.into(), value.to_string());
    }
}

/// `Bell(n)` as `u128`.
pub(crate) fn bell(n: usize) -> u128 {
    bell_numbers(n)[n]
}

/// `1` when `ok` fails, else `0`.
pub(crate) fn flag(ok: bool) -> Rational {
    Rational::from(i64::from(!ok))
}

pub fn canonical_id(id: &str) -> Option<&'static str> {
    CHECKS.iter().map(|(c, _)| *c).find(|c| c.eq_ignore_ascii_case(id.trim()))
}

fn dispatch(id: &'static str, run: &mut Run) -> Result<Outcome, VerifyError> {
    match id {
        "C1" => logic::c1(run),
        "C2" => singular::c2(run),
        "C3" => singular::c3(run),
        "C4" => singular::c4(run),
        "C5" => singular::c5(run),
        "C6" => singular::c6(run),
        "C7" => singular::c7(run),
        "C8" => selectors::c8(run),
        "C9" => selectors::c9(run),
        "C10" => logic::c10(run),
        "C11" => selectors::c11(run),
        "C12" => selectors::c12(run),
        "C13" => selectors::c13(run),
        "C14" => selectors::c14(run),
        "C15" => selectors::c15(run),
        "C16" => selectors::c16(run),
        "C17" => examples::c17(run),
        "C18" => examples::c18(run),
        "C19" => examples::c19(run),
        "C20" => embeddings::c20(run),
        "C21" => embeddings::c21(run),
        "C22" => kernels::c22(run),
        "C23" => examples::c23(run),
        "C24" => selectors::c24(run),
        "C25" => logic::c25(run),
        _ => unreachable!("id comes from CHECKS"),
    }
}

/// Runs one check on a pool of `params.jobs` workers.
pub fn run_check(id: &str, params: &Params) -> Result<CheckReport, VerifyError> {
    let id = canonical_id(id).ok_or_else(|| VerifyError::UnknownCheck(id.into()))?;
    let start = Instant::now();
    let mut run = Run::new(id, params);
    let outcome = pool(params.jobs).install(|| dispatch(id, &mut run))?;
    let elapsed_ms = if params.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let max_violation = outcome.worst.max_violation();
    let status = if outcome.exploratory {
        Status::Exploratory
    } else if max_violation <= Rational::from(0) {
        Status::Pass
    } else {
        Status::Fail
    };
    let mut notes = run.notes;
    if params.deep {
        notes.insert("deep".into(), "true".into());
    }
    Ok(CheckReport {
        check_id: id.into(),
        n: outcome.n,
        instances: outcome.worst.instances,
        max_violation,
        witness: outcome.worst.witness,
        status,
        seed: params.seed,
        elapsed_ms,
        params: notes,
    })
}

/// C1..C24 with each check's default sizes; `params.n` is ignored.
pub fn run_all(params: &Params) -> Result<Vec<CheckReport>, VerifyError> {
    let p = Params { n: None, ..params.clone() };
    CHECKS[..24].iter().map(|(id, _)| run_check(id, &p)).collect()
}

/// Empirical extremal ratio for the checks that bound one quantity by a
/// constant multiple of another: C5 (48), C11 (4), C12 (24), C16 (4).
pub fn estimate_constant(id: &str, params: &Params) -> Result<Estimate, VerifyError> {
    let id = canonical_id(id).ok_or_else(|| VerifyError::UnknownCheck(id.into()))?;
    let mut run = Run::new(id, params);
    pool(params.jobs).install(|| match id {
        "C5" => singular::estimate_c5(&mut run),
        "C11" => selectors::estimate_c11(&mut run),
        "C12" => selectors::estimate_c12(&mut run),
        "C16" => selectors::estimate_c16(&mut run),
        _ => Err(run.bad("no constant to estimate for this check")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("2..7".parse::<NRange>(), Ok(NRange::new(2, 7)));
        assert_eq!("2..=7".parse::<NRange>(), Ok(NRange::new(2, 7)));
        assert_eq!("5".parse::<NRange>(), Ok(NRange::new(5, 5)));
        assert!("7..2".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
        assert_eq!(NRange::new(2, 7).to_string(), "2..7");
    }

    #[test]
    fn ids_are_case_insensitive() {
        assert_eq!(canonical_id("c3"), Some("C3"));
        assert_eq!(canonical_id("C25"), Some("C25"));
        assert_eq!(canonical_id("C26"), None);
        assert!(matches!(run_check("nope", &Params::default()), Err(VerifyError::UnknownCheck(_))));
    }

    #[test]
    fn deep_gate_and_budget() {
        let p = Params { n: Some(NRange::new(7, 7)), ..Params::default() };
        assert!(matches!(run_check("C5", &p), Err(VerifyError::BudgetExceeded { .. })));
        let p = Params { n: Some(NRange::new(2, 6)), budget: Some(1000), ..Params::default() };
        assert!(matches!(run_check("C5", &p), Err(VerifyError::BudgetExceeded { .. })));
    }
}
