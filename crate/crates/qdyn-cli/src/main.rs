//! `qdyn-cli verify` runs identity suites and writes a JSON report;
//! `qdyn-cli dump` writes a matrix as JSON. Worker count: `QDYN_WORKERS`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qdyn::coboundary::M0Choice;
use qdyn::report::dump::{dump, parse_fund_power, DumpObject};
use qdyn::report::{run, Backend, Mutation, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "qdyn-cli", version, about = "Verification harness for dynamical quantum groups of type A")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run identity checks; exit code 0 iff every selected check passes.
    Verify(VerifyArgs),
    /// Write one structure matrix as JSON.
    Dump(DumpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum M0Arg {
    Zeta,
    Trivial,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Rank: the algebra is sl(n+1).
    #[arg(long)]
    n: usize,
    /// Comma-separated suites, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// `exact` or `numeric`.
    #[arg(long, default_value = "exact")]
    backend: String,
    /// Truncation depth of numeric infinite products.
    #[arg(long, default_value_t = 40)]
    depth: usize,
    /// Largest ν-ratio at numeric sample points.
    #[arg(long, default_value_t = 0.5)]
    rho_max: f64,
    /// Numeric acceptance threshold.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Diagonal Gauss factor M0.
    #[arg(long, value_enum, default_value_t = M0Arg::Zeta)]
    m0: M0Arg,
    /// Weyl element as comma-separated simple transpositions, e.g. `1,2`; repeatable.
    #[arg(long = "perm")]
    perms: Vec<String>,
    /// Deliberate corruption to apply.
    #[arg(long)]
    mutation: Option<String>,
    /// JSON report path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Allow ranks beyond the resource guard.
    #[arg(long)]
    override_guard: bool,
    /// Suppress the per-check summary.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(clap::Args)]
struct DumpArgs {
    /// One of R, J, F, M, P.
    #[arg(long)]
    object: String,
    #[arg(long)]
    n: usize,
    /// `fund^k`; two-leg objects act on fund^k ⊗ fund^k.
    #[arg(long, default_value = "fund^1")]
    rep: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    s.split(',').map(|x| x.trim().parse::<Suite>().map_err(Into::into)).collect()
}

fn parse_perm(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("bad transposition index `{x}`")))
        .collect()
}

fn config(a: &VerifyArgs) -> Result<SuiteConfig> {
    let mut c = SuiteConfig::new(a.n);
    c.suites = parse_suites(&a.suite)?;
    c.backend = a.backend.parse::<Backend>()?;
    c.depth = a.depth;
    c.rho_max = a.rho_max;
    c.tol = a.tol;
    c.seed = a.seed;
    c.m0 = match a.m0 {
        M0Arg::Zeta => M0Choice::Zeta,
        M0Arg::Trivial => M0Choice::Trivial,
    };
    c.perms = a.perms.iter().map(|p| parse_perm(p)).collect::<Result<_>>()?;
    c.mutation = a.mutation.as_deref().map(str::parse::<Mutation>).transpose()?;
    c.override_guard = a.override_guard;
    if !(c.rho_max > 0.0 && c.rho_max < 1.0) {
        bail!("--rho-max must lie in (0, 1)");
    }
    c.validate()?;
    Ok(c)
}

fn verify(a: &VerifyArgs) -> Result<ExitCode> {
    let cfg = config(a)?;
    let report = run(&cfg)?;
    if !a.quiet {
        print!("{}", report.summary());
    }
    let json = report.to_json();
    match &a.output {
        Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None if a.quiet => println!("{json}"),
        None => {}
    }
    Ok(if report.all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn dump_cmd(a: &DumpArgs) -> Result<ExitCode> {
    let object: DumpObject = a.object.parse()?;
    let k = parse_fund_power(&a.rep)?;
    let Format::Json = a.format;
    let json = dump(object, a.n, k)?.to_json();
    match &a.output {
        Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.cmd {
        Cmd::Verify(a) => verify(a),
        Cmd::Dump(a) => dump_cmd(a),
    };
    match out {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
