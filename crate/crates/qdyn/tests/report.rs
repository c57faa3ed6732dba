use std::collections::HashSet;

use qdyn::report::dump::{dump, parse_fund_power, DumpObject};
use qdyn::report::{run, Backend, ConfigError, Mutation, Residual, Status, Suite, SuiteConfig};
use qdyn::rmatrix::fundamental_r_closed;

#[test]
fn rank_one_report_passes_and_serializes() {
    let r = run(&SuiteConfig::new(1)).unwrap();
    assert!(r.all_pass, "{}", r.summary());
    assert_eq!(r.exit_code(), 0);
    let ids: HashSet<_> = r.checks.iter().map(|c| (c.suite, c.id.clone())).collect();
    assert_eq!(ids.len(), r.checks.len(), "check ids are unique");
    for s in Suite::ALL {
        assert!(r.checks.iter().any(|c| c.suite == s), "{s} has checks");
    }
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["all_pass"], true);
    let first = &v["checks"][0];
    for key in ["suite", "id", "anchor", "status", "residual", "witness", "wall_ms"] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn failures_carry_a_witness_and_nonzero_exit() {
    let mut c = SuiteConfig::new(2);
    c.suites = vec![Suite::Rmatrix];
    c.mutation = Some(Mutation::TransposeR);
    let r = run(&c).unwrap();
    assert_eq!(r.exit_code(), 1);
    let f = r.failures().next().unwrap();
    assert_eq!(f.status, Status::Fail);
    assert_eq!(f.residual, Residual::Exact { zero: false });
    let w = f.witness.as_ref().unwrap();
    assert!(w.row.is_some() && w.col.is_some() && !w.value.is_empty());
}

#[test]
fn every_mutation_is_detected_at_rank_two() {
    for m in Mutation::ALL {
        let mut c = SuiteConfig::new(2);
        c.mutation = Some(m);
        assert!(run(&c).unwrap().failed > 0, "{m}");
    }
}

#[test]
fn numeric_backend_judges_against_tolerance() {
    let mut c = SuiteConfig::new(2);
    c.backend = Backend::Numeric;
    c.suites = vec![Suite::Rmatrix, Suite::Dynamics];
    let r = run(&c).unwrap();
    assert!(r.all_pass, "{}", r.summary());
    assert!(r.checks.iter().any(|c| matches!(c.residual, Residual::Numeric { .. })));
    c.mutation = Some(Mutation::DropK2);
    let r = run(&c).unwrap();
    let bad = r.failures().next().unwrap();
    assert!(matches!(bad.residual, Residual::Numeric { max_abs, .. } if max_abs > 1e-6));
}

#[test]
fn sample_point_depends_only_on_seed() {
    let mut a = SuiteConfig::new(2);
    a.seed = 7;
    let mut b = a.clone();
    assert_eq!(a.sample_point(), b.sample_point());
    b.seed = 8;
    assert_ne!(a.sample_point(), b.sample_point());
}

#[test]
fn configuration_is_validated() {
    assert_eq!(SuiteConfig::new(0).validate(), Err(ConfigError::ZeroRank));
    assert_eq!(SuiteConfig::new(4).validate(), Err(ConfigError::ResourceGuard(4)));
    let mut c = SuiteConfig::new(4);
    c.override_guard = true;
    assert_eq!(c.validate(), Ok(()));
    let mut c = SuiteConfig::new(2);
    c.perms = vec![vec![1, 3]];
    assert_eq!(c.validate(), Err(ConfigError::BadTransposition(3, 2)));
    c.perms.clear();
    c.suites.clear();
    assert_eq!(c.validate(), Err(ConfigError::NoSuites));
    assert!("weyl".parse::<Suite>().is_ok());
    assert!("nope".parse::<Suite>().is_err());
    for m in Mutation::ALL {
        assert_eq!(m.name().parse::<Mutation>(), Ok(m));
    }
}

#[test]
fn permutation_words_select_weyl_checks() {
    let mut c = SuiteConfig::new(2);
    c.suites = vec![Suite::Loop, Suite::Weyl];
    c.perms = vec![vec![1, 2], vec![1, 2, 1]];
    let r = run(&c).unwrap();
    assert!(r.all_pass, "{}", r.summary());
    for id in ["P(w.x) = P(x), w = s1s2", "P(w.x) = P(x), w = s1s2s1", "dynWeyl2, w = s1s2s1", "dynWeyl3, s1s2·s1s2s1"] {
        assert!(r.checks.iter().any(|c| c.id == id), "{id}");
    }
}

#[test]
fn dumps() {
    assert_eq!(parse_fund_power("fund").unwrap(), 1);
    assert_eq!(parse_fund_power("fund^2").unwrap(), 2);
    assert!(parse_fund_power("fund^0").is_err());
    assert!(parse_fund_power("adj").is_err());
    let d = dump(DumpObject::R, 2, 1).unwrap();
    assert_eq!(d.dims, vec![3, 3]);
    let closed = fundamental_r_closed(2);
    assert_eq!(d.entries.len(), closed.nnz());
    for (r, c, s) in &d.entries {
        assert_eq!(*s, closed.get_or_zero(*r, *c).to_string());
    }
    let p = dump(DumpObject::P, 1, 2).unwrap();
    assert_eq!(p.dims, vec![4]);
    let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
    assert_eq!(v["rep"], "fund^2");
    assert!(v["entries"][0][2].is_string());
    assert!("Q".parse::<DumpObject>().is_err());
}
