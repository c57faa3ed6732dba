//! Acceptance run: one PASS/FAIL line per criterion, exit code 1 on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qdyn::cgtwist::{epsilon_identity_cartan, epsilon_identity_shift_left, epsilon_identity_shift_right, EpsilonRange};
use qdyn::report::{run, Backend, CheckResult, Mutation, Status, Suite, SuiteConfig, VerifyReport};

const NUMERIC_TOL: f64 = 1e-10;
const RANK1_BUDGET: Duration = Duration::from_secs(30);
const RANK2_BUDGET: Duration = Duration::from_secs(600);
const RMATRIX_BUDGET: Duration = Duration::from_secs(60);

fn report(n: usize, suites: &[Suite], backend: Backend) -> VerifyReport {
    let mut c = SuiteConfig::new(n);
    c.suites = suites.to_vec();
    c.backend = backend;
    c.tol = NUMERIC_TOL;
    run(&c).expect("valid configuration")
}

/// Outcome of a group of checks: all present and passing.
#[derive(Default)]
struct Tally {
    seen: usize,
    bad: Vec<String>,
}

impl Tally {
    /// Requires every check whose id starts with one of `prefixes`; each prefix must match at least once.
    fn require(&mut self, r: &VerifyReport, suite: Suite, prefixes: &[&str]) {
        for p in prefixes {
            let hits: Vec<&CheckResult> = r.checks.iter().filter(|c| c.suite == suite && c.id.starts_with(p)).collect();
            if hits.is_empty() {
                self.bad.push(format!("n={} {suite}/{p}: missing", r.config.n));
            }
            for c in hits {
                self.seen += 1;
                if c.status != Status::Pass {
                    self.bad.push(format!("n={} {suite}/{}", r.config.n, c.id));
                }
            }
        }
    }

    fn require_suite(&mut self, r: &VerifyReport, suite: Suite) {
        self.require(r, suite, &[""]);
    }

    fn flag(&mut self, ok: bool, what: String) {
        self.seen += 1;
        if !ok {
            self.bad.push(what);
        }
    }

    fn line(&self, k: usize, title: &str, extra: &str) -> (bool, String) {
        let ok = self.bad.is_empty();
        let status = if ok { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {k:2} [{status}] {title}: {} checks{extra}", self.seen);
        if !ok {
            s.push_str(&format!("; failing: {}", self.bad.join(", ")));
        }
        (ok, s)
    }
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let full: Vec<VerifyReport> = (1..=3).map(|n| report(n, &Suite::ALL, Backend::Exact)).collect();
    let rank = |n: usize| &full[n - 1];
    let mut lines = Vec::new();

    // 1. standard R
    let mut t = Tally::default();
    let start = Instant::now();
    for n in 1..=3 {
        let r = report(n, &[Suite::Rmatrix], Backend::Exact);
        t.require(&r, Suite::Rmatrix, &["R closed form"]);
        if n <= 2 {
            t.require(&r, Suite::Rmatrix, &["QYBE fund³", "quasitriangularity", "intertwining"]);
        }
    }
    t.require(&report(3, &[Suite::Rmatrix], Backend::Numeric), Suite::Rmatrix, &["QYBE fund³"]);
    let el = start.elapsed();
    t.flag(el < RMATRIX_BUDGET, format!("total {el:?} over {RMATRIX_BUDGET:?}"));
    lines.push(t.line(1, "standard R, closed form n<=3, QYBE exact n<=2, numeric n=3 <= 1e-10", &format!(", {el:.2?}")));

    // 2. cocycle
    let mut t = Tally::default();
    t.require(rank(2), Suite::Cocycle, &["cocycle fund³"]);
    t.require(rank(1), Suite::Cocycle, &["J trivial at rank one"]);
    for n in 1..=3 {
        t.require(rank(n), Suite::Cocycle, &["R^J closed form", "R^J homogeneity"]);
    }
    for n in 1..=6 {
        let empty = epsilon_identity_shift_left(n, EpsilonRange::Full).is_empty()
            && epsilon_identity_shift_right(n, EpsilonRange::Full).is_empty()
            && epsilon_identity_cartan(n, EpsilonRange::Full).is_empty();
        t.flag(empty, format!("ε identities n={n}"));
    }
    lines.push(t.line(2, "cocycle on fund³ n=2, J=1 at n=1, R^J closed form and homogeneity n<=3, ε-table n<=6", ""));

    // 3. ABRR
    let mut t = Tally::default();
    for n in 1..=3 {
        t.require(rank(n), Suite::Dynamics, &["ABRR closed form", "ABRR linear equation", "R(x) closed form"]);
    }
    for n in 1..=2 {
        t.require(rank(n), Suite::Dynamics, &["QDCE fund³", "QDYBE fund³", "R(x) linear relation"]);
    }
    lines.push(t.line(3, "ABRR F closed form and linear equation n<=3, QDCE, QDYBE, R(x) linear relation n<=2", ""));

    // 4. convergence
    let mut t = Tally::default();
    for n in 1..=3 {
        t.require(
            rank(n),
            Suite::Dynamics,
            &["F product truncation", "F product decay ratio"],
        );
        t.require(rank(n), Suite::Coboundary, &["M- product truncation", "M- product decay ratio"]);
    }
    lines.push(t.line(4, "truncated F and M- products: depth 40, ρ=0.5, q=0.7, <= 1e-10, ratio within ±20% of ρ", ""));

    // 5. coboundary
    let mut t = Tally::default();
    for n in 1..=2 {
        t.require(
            rank(n),
            Suite::Coboundary,
            &["coboundary F", "axiom 0", "axiom 1d+", "axiom 1d-", "axiom 1+", "axiom 1-", "axiom 2'", "W = W~", "W factors closed forms"],
        );
    }
    for n in 1..=3 {
        t.require(rank(n), Suite::Coboundary, &["M inverse closed form", "Gauss factor closed forms"]);
    }
    lines.push(t.line(5, "coboundary F = ABRR F n<=2, four axioms, W = W~, M^-1 and Gauss closed forms n<=3", ""));

    // 6. loop
    let mut t = Tally::default();
    for n in 1..=3 {
        t.require(rank(n), Suite::Loop, &["P closed form", "trace of P", "P(w.x) = P(x)"]);
    }
    for n in 1..=2 {
        t.require(
            rank(n),
            Suite::Loop,
            &["quantum determinant of P", "reflection equation", "linear relation", "coproduct of P", "Coxeter factor"],
        );
    }
    t.require(rank(1), Suite::Loop, &["sl2 exponential form dim 2", "sl2 exponential form dim 3"]);
    lines.push(t.line(6, "P closed form, trace, Weyl invariance n<=3; det_q, reflection, linear, coproduct, Coxeter n<=2; sl2 forms", ""));

    // 7. Weyl
    let mut t = Tally::default();
    for n in 1..=2 {
        t.require_suite(rank(n), Suite::Weyl);
    }
    lines.push(t.line(7, "braid relations, Δ(w0), dynWeyl2, dynWeyl3, A_w weight mapping n<=2", ""));

    // 8. classical limits
    let mut t = Tally::default();
    for n in 1..=3 {
        t.require_suite(rank(n), Suite::Classical);
    }
    lines.push(t.line(8, "classical limits of R(x) and R^J: defect ratio 1e-2 → 5e-3 within ±25% of 2", ""));

    // 9. mutations
    let mut t = Tally::default();
    for m in Mutation::ALL {
        let mut c = SuiteConfig::new(2);
        c.mutation = Some(m);
        let r = run(&c).expect("valid configuration");
        t.flag(r.failed > 0, format!("{m} undetected"));
    }
    lines.push(t.line(9, "each of the six corruptions makes at least one check fail", ""));

    // 10. performance
    let mut t = Tally::default();
    let d1 = Duration::from_secs_f64(rank(1).wall_ms / 1e3);
    let d2 = Duration::from_secs_f64(rank(2).wall_ms / 1e3);
    t.flag(d1 < RANK1_BUDGET, format!("n=1 took {d1:?}"));
    t.flag(d2 < RANK2_BUDGET, format!("n=2 took {d2:?}"));
    t.require_suite(rank(1), Suite::Rep);
    t.require_suite(rank(2), Suite::Rep);
    let all_n1_n2 = rank(1).all_pass && rank(2).all_pass;
    t.flag(all_n1_n2, "full n=1 or n=2 suite has failures".into());
    lines.push(t.line(10, "full exact suite n=1 < 30 s and n=2 < 10 min, all checks passing", &format!(", n=1 {d1:.2?}, n=2 {d2:.2?}")));

    let mut ok = true;
    for (pass, s) in &lines {
        println!("{s}");
        ok &= pass;
    }
    println!("acceptance: {} in {:.2?}", if ok { "PASS" } else { "FAIL" }, t0.elapsed());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
