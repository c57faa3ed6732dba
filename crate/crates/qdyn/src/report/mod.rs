//! Verification harness: suites of identity checks, deliberate corruptions,
//! and the versioned JSON report.

pub mod dump;
mod suites;

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coboundary::M0Choice;
use crate::dyncore::evaluate;
use crate::linalg::Mat;
use crate::scalar::{ExactScalar, NumericPoint};

pub const SCHEMA_VERSION: &str = "v1";

/// Environment variable holding the worker count of the check pool.
pub const WORKERS_ENV: &str = "QDYN_WORKERS";

/// Largest rank run without `override_guard`.
pub const GUARD_MAX_N: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Rep,
    Rmatrix,
    Cocycle,
    Dynamics,
    Coboundary,
    Loop,
    Weyl,
    Classical,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Rep,
        Suite::Rmatrix,
        Suite::Cocycle,
        Suite::Dynamics,
        Suite::Coboundary,
        Suite::Loop,
        Suite::Weyl,
        Suite::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rep => "rep",
            Suite::Rmatrix => "rmatrix",
            Suite::Cocycle => "cocycle",
            Suite::Dynamics => "dynamics",
            Suite::Coboundary => "coboundary",
            Suite::Loop => "loop",
            Suite::Weyl => "weyl",
            Suite::Classical => "classical",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError::Unknown("suite", s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Exact-zero residuals over the rational function field.
    #[default]
    Exact,
    /// Residuals evaluated at a seeded sample point, compared against `tol`.
    Numeric,
}

impl FromStr for Backend {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "numeric" => Ok(Backend::Numeric),
            _ => Err(ConfigError::Unknown("backend", s.to_string())),
        }
    }
}

/// Deliberate corruptions; each must make at least one check fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Use `Rᵀ` in place of `R`.
    TransposeR,
    /// Build `M⁽⁻⁾` from the product in ascending instead of descending order.
    SwapMinusOrder,
    /// Compare `R^J` with the closed form stripped of its `D⊗D` conjugation.
    DropRjGauge,
    /// Shift simple roots up instead of down in `τ`.
    WrongTau,
    /// Drop `K²` from the linear relation of `R(x)`.
    DropK2,
    /// Drop `S^[1]` from the first coboundary axiom.
    DropS1,
}

impl Mutation {
    pub const ALL: [Mutation; 6] = [
        Mutation::TransposeR,
        Mutation::SwapMinusOrder,
        Mutation::DropRjGauge,
        Mutation::WrongTau,
        Mutation::DropK2,
        Mutation::DropS1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::TransposeR => "transpose-r",
            Mutation::SwapMinusOrder => "swap-minus-order",
            Mutation::DropRjGauge => "drop-rj-gauge",
            Mutation::WrongTau => "wrong-tau",
            Mutation::DropK2 => "drop-k2",
            Mutation::DropS1 => "drop-s1",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError::Unknown("mutation", s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown {0} `{1}`")]
    Unknown(&'static str, String),
    #[error("rank n = {0} exceeds the resource guard n <= {GUARD_MAX_N}; pass the override to run anyway")]
    ResourceGuard(usize),
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("transposition index {0} outside 1..={1}")]
    BadTransposition(usize, usize),
    #[error("no suites selected")]
    NoSuites,
}

/// Run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub suites: Vec<Suite>,
    pub backend: Backend,
    /// Truncation depth of the numeric infinite products.
    pub depth: usize,
    /// Largest `ν_i/ν_{i+1}` at numeric sample points.
    pub rho_max: f64,
    pub seed: u64,
    /// Numeric acceptance threshold on max-abs residuals.
    pub tol: f64,
    #[serde(serialize_with = "ser_m0")]
    pub m0: M0Choice,
    /// Weyl group elements as words in simple transpositions; empty means
    /// every simple transposition.
    pub perms: Vec<Vec<usize>>,
    pub mutation: Option<Mutation>,
    pub override_guard: bool,
}

fn ser_m0<S: serde::Serializer>(m: &M0Choice, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(match m {
        M0Choice::Zeta => "zeta",
        M0Choice::Trivial => "trivial",
    })
}

impl SuiteConfig {
    pub fn new(n: usize) -> Self {
        SuiteConfig {
            n,
            suites: Suite::ALL.to_vec(),
            backend: Backend::Exact,
            depth: 40,
            rho_max: 0.5,
            seed: 0,
            tol: 1e-10,
            m0: M0Choice::Zeta,
            perms: Vec::new(),
            mutation: None,
            override_guard: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::ZeroRank);
        }
        if self.n > GUARD_MAX_N && !self.override_guard {
            return Err(ConfigError::ResourceGuard(self.n));
        }
        if self.suites.is_empty() {
            return Err(ConfigError::NoSuites);
        }
        for &i in self.perms.iter().flatten() {
            if i == 0 || i > self.n {
                return Err(ConfigError::BadTransposition(i, self.n));
            }
        }
        Ok(())
    }

    /// Seeded sample point with `ν_i/ν_{i+1} ∈ [ρ/2, ρ]` and `q ∈ [0.6, 0.8]`.
    pub fn sample_point(&self) -> NumericPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let q = rng.gen_range(0.6..0.8);
        let mut logs = vec![0.0f64];
        for _ in 0..self.n {
            let r: f64 = rng.gen_range(self.rho_max / 2.0..=self.rho_max);
            let last = *logs.last().expect("nonempty");
            logs.push(last - r.ln());
        }
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let nu: Vec<f64> = logs.iter().map(|l| (l - mean).exp()).collect();
        NumericPoint::from_nu(q, &nu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check could not be evaluated; counts as failure.
    Error,
}

/// Residual of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Residual {
    Exact { zero: bool },
    Numeric { max_abs: f64, tol: f64 },
    /// A measured quantity against an acceptance window.
    Measured { value: f64, accept: String },
    Predicate { holds: bool },
    None,
}

/// First offending entry of a failing check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub item: String,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub id: String,
    /// The identity checked, written out.
    pub anchor: String,
    pub status: Status,
    pub residual: Residual,
    pub witness: Option<Witness>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
    pub wall_ms: f64,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status != Status::Pass)
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let st = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
            };
            let res = match &c.residual {
                Residual::Exact { zero } => format!("exact zero={zero}"),
                Residual::Numeric { max_abs, tol } => format!("max|r|={max_abs:.3e} tol={tol:.1e}"),
                Residual::Measured { value, accept } => format!("value={value:.4} accept {accept}"),
                Residual::Predicate { holds } => format!("holds={holds}"),
                Residual::None => String::new(),
            };
            s.push_str(&format!("{st:5} {:10} {:44} {res} ({:.1} ms)\n", c.suite.name(), c.id, c.wall_ms));
            if let Some(w) = &c.witness {
                let pos = match (w.row, w.col) {
                    (Some(r), Some(c)) => format!(" at ({r},{c})"),
                    _ => String::new(),
                };
                s.push_str(&format!("      witness {}{pos}: {}\n", w.item, w.value));
            }
        }
        s.push_str(&format!("{} passed, {} failed, {:.1} ms\n", self.passed, self.failed, self.wall_ms));
        s
    }
}

/// What a check produces; judged against the backend by the runner.
pub(crate) enum Evidence {
    /// Named residual operators that must vanish.
    Residuals(Vec<(String, Mat<ExactScalar>)>),
    /// Named exact scalars that must vanish.
    Scalars(Vec<(String, ExactScalar)>),
    /// Already numeric max-abs residuals, judged against `tol`.
    Numeric(Vec<(String, f64)>),
    Measured { value: f64, lo: f64, hi: f64 },
    Predicate { holds: bool, witness: String },
}

pub(crate) type CheckFn = Box<dyn Fn(&Env) -> Result<Evidence, String> + Send + Sync>;

pub(crate) struct Check {
    pub suite: Suite,
    pub id: String,
    pub anchor: &'static str,
    pub run: CheckFn,
}

/// Read-only context handed to every check.
pub(crate) struct Env {
    pub cfg: SuiteConfig,
    pub point: NumericPoint,
}

impl Env {
    pub fn mutated(&self, m: Mutation) -> bool {
        self.cfg.mutation == Some(m)
    }
}

/// Runs every selected check and assembles the report.
pub fn run(config: &SuiteConfig) -> Result<VerifyReport, ConfigError> {
    config.validate()?;
    let start = Instant::now();
    let env = Env { cfg: config.clone(), point: config.sample_point() };
    let checks = suites::plan(&config.suites, &env);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers_from_env()).build().expect("thread pool");
    let results: Vec<CheckResult> = pool.install(|| checks.par_iter().map(|c| execute(c, &env)).collect());
    let failed = results.iter().filter(|r| r.status != Status::Pass).count();
    Ok(VerifyReport {
        schema: SCHEMA_VERSION,
        config: config.clone(),
        passed: results.len() - failed,
        failed,
        all_pass: failed == 0,
        checks: results,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Worker count from [`WORKERS_ENV`]; `0` lets the pool choose.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

fn execute(check: &Check, env: &Env) -> CheckResult {
    let t = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| (check.run)(env)));
    let (status, residual, witness) = match outcome {
        Ok(Ok(ev)) => judge(ev, env),
        Ok(Err(e)) => (Status::Error, Residual::None, Some(message_witness(e))),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (Status::Error, Residual::None, Some(message_witness(msg)))
        }
    };
    CheckResult {
        suite: check.suite,
        id: check.id.clone(),
        anchor: check.anchor.to_string(),
        status,
        residual,
        witness,
        wall_ms: t.elapsed().as_secs_f64() * 1e3,
    }
}

fn message_witness(msg: String) -> Witness {
    Witness { item: "error".into(), row: None, col: None, value: msg }
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn judge(ev: Evidence, env: &Env) -> (Status, Residual, Option<Witness>) {
    let tol = env.cfg.tol;
    match ev {
        Evidence::Residuals(list) => match env.cfg.backend {
            Backend::Exact => {
                let witness = list.iter().find_map(|(name, m)| {
                    m.entries().next().map(|(r, c, v)| Witness {
                        item: name.clone(),
                        row: Some(r),
                        col: Some(c),
                        value: v.to_string(),
                    })
                });
                (status_of(witness.is_none()), Residual::Exact { zero: witness.is_none() }, witness)
            }
            Backend::Numeric => {
                let mut worst: (f64, Option<Witness>) = (0.0, None);
                for (name, m) in &list {
                    let mn = match evaluate(m, &env.point) {
                        Ok(x) => x,
                        Err(e) => return (Status::Error, Residual::None, Some(message_witness(e.to_string()))),
                    };
                    for (r, c, v) in mn.entries() {
                        if v.norm() > worst.0 || worst.1.is_none() {
                            worst = (v.norm(), Some(numeric_witness(name, r, c, *v)));
                        }
                    }
                }
                let ok = worst.0 <= tol;
                (status_of(ok), Residual::Numeric { max_abs: worst.0, tol }, if ok { None } else { worst.1 })
            }
        },
        Evidence::Scalars(list) => {
            let as_mats =
                list.into_iter().map(|(name, s)| (name, Mat::diagonal(vec![s]))).collect();
            judge(Evidence::Residuals(as_mats), env)
        }
        Evidence::Numeric(list) => {
            let worst = list.iter().cloned().fold(None::<(String, f64)>, |acc, (n, v)| match acc {
                Some((_, a)) if a >= v && !v.is_nan() => acc,
                _ => Some((n, v)),
            });
            let (name, max_abs) = worst.unwrap_or(("none".into(), 0.0));
            let ok = max_abs <= tol;
            let w = (!ok).then(|| Witness { item: name, row: None, col: None, value: format!("{max_abs:.3e}") });
            (status_of(ok), Residual::Numeric { max_abs, tol }, w)
        }
        Evidence::Measured { value, lo, hi } => {
            let ok = (lo..=hi).contains(&value);
            let w = (!ok).then(|| Witness { item: "value".into(), row: None, col: None, value: format!("{value}") });
            (status_of(ok), Residual::Measured { value, accept: format!("[{lo}, {hi}]") }, w)
        }
        Evidence::Predicate { holds, witness } => {
            let w = (!holds).then(|| Witness { item: "predicate".into(), row: None, col: None, value: witness });
            (status_of(holds), Residual::Predicate { holds }, w)
        }
    }
}

fn numeric_witness(name: &str, r: usize, c: usize, v: Complex64) -> Witness {
    Witness { item: name.to_string(), row: Some(r), col: Some(c), value: format!("{v}") }
}
