use std::process::Command;

fn cli() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qdyn-cli"));
    c.env("QDYN_WORKERS", "2");
    c
}

fn json_report(args: &[&str]) -> (i32, serde_json::Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cli().args(args).arg("--output").arg(&path).arg("--quiet").output().unwrap();
    let v = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (out.status.code().unwrap(), v)
}

#[test]
fn full_rank_one_run_passes() {
    let (code, v) = json_report(&["verify", "--n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["failed"], 0);
}

#[test]
fn trivial_m0_coboundary_passes() {
    let (code, v) = json_report(&["verify", "--n", "1", "--suite", "coboundary", "--m0", "trivial"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["m0"], "trivial");
}

#[test]
fn numeric_dynamics_at_rank_three() {
    let (code, v) = json_report(&[
        "verify", "--n", "3", "--suite", "dynamics", "--backend", "numeric", "--depth", "40", "--tol", "1e-10",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["config"]["backend"], "numeric");
}

#[test]
fn mutation_fails_with_exit_one() {
    let (code, v) = json_report(&["verify", "--n", "2", "--suite", "coboundary", "--mutation", "drop-s1"]);
    assert_eq!(code, 1);
    let failing: Vec<_> = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failing.is_empty());
    assert!(failing[0]["witness"]["value"].is_string());
}

#[test]
fn perm_flag_adds_checks() {
    let (code, v) = json_report(&["verify", "--n", "2", "--suite", "loop", "--perm", "1,2"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["id"] == "P(w.x) = P(x), w = s1s2"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        vec!["verify", "--n", "4"],
        vec!["verify", "--n", "2", "--suite", "bogus"],
        vec!["verify", "--n", "2", "--perm", "3"],
        vec!["verify", "--n", "2", "--backend", "fast"],
        vec!["dump", "--object", "X", "--n", "1"],
    ] {
        let out = cli().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn dump_writes_matrix_json() {
    let out = cli().args(["dump", "--object", "F", "--n", "2", "--rep", "fund^1", "--format", "json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["object"], "F");
    assert_eq!(v["dims"], serde_json::json!([3, 3]));
    let entries = v["entries"].as_array().unwrap();
    // F = 1 + strictly lower part, so all nine diagonal entries are present
    assert!(entries.iter().filter(|e| e[0] == e[1]).count() == 9);
}
