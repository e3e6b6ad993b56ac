use std::process::{Command, Output};

use ccr_cli::report::{Record, Status};
use ccr_cli::sweep::{parse_csv, Row};
use ccr_cli::{EXIT_CONFIG, EXIT_FAIL, EXIT_PASS};
use serde_json::Value;

fn ccr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccr")).args(args).env("CCR_NO_COLOR", "1").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn records(v: &Value) -> Vec<Record> {
    serde_json::from_value(v["records"].clone()).unwrap()
}

#[test]
fn envelope_shape() {
    let out = ccr(&["verify", "--kind", "fock", "--dim", "32", "--grid", "0.2,0.1"]);
    assert_eq!(out.status.code(), Some(EXIT_PASS), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tool"]["name"], "ccr");
    assert_eq!(v["command"], "verify");
    assert_eq!(v["config"]["kind"], "fock");
    let recs = records(&v);
    assert_eq!(v["summary"]["total"].as_u64().unwrap() as usize, recs.len());
    assert!(recs.iter().all(|r| r.status != Status::Fail));
    assert!(recs.iter().any(|r| r.check_id == "weyl.relation"));
    // summary goes to stderr, never into the report
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("ccr verify: ok"));
    assert!(!err.contains('\u{1b}'));
}

#[test]
fn failing_run_names_the_check() {
    let out = ccr(&["verify", "--kind", "antifock", "--dim", "16"]);
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAIL weyl."), "{err}");
    let recs = records(&json(&out));
    let failed: Vec<_> = recs.iter().filter(|r| r.status == Status::Fail).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|r| r.residual.unwrap() > r.tolerance));
}

#[test]
fn lambda_skips_carry_reasons() {
    let out = ccr(&["verify", "--kind", "lambda", "--lambda", "-1/3", "--dim", "17"]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let recs = records(&json(&out));
    let skipped: Vec<_> = recs.iter().filter(|r| r.status == Status::Skipped).collect();
    assert!(skipped.iter().any(|r| r.check_id.starts_with("weyl.")));
    assert!(skipped.iter().all(|r| r.reason.as_deref().is_some_and(|s| !s.is_empty()) && r.pass.is_none()));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["verify", "--kind", "lambda", "--dim", "9"][..],
        &["verify", "--kind", "lambda", "--lambda", "-1/2", "--dim", "8"][..],
        &["verify", "--kind", "fock", "--lambda", "1/2", "--dim", "8"][..],
        &["verify", "--dim", "32", "--grid", "0.1;0.2"][..],
        &["verify", "--dim", "32", "--grid", "11,0"][..],
        &["verify", "--dim", "32", "--tol", "-1"][..],
        &["verify", "--dim", "8", "--margin", "8"][..],
        &["sweep", "--dims", "32"][..],
        &["eval", "a * (a"][..],
        &["frobnicate"][..],
    ] {
        let out = ccr(args);
        assert_eq!(out.status.code(), Some(EXIT_CONFIG), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(ccr(&["--help"]).status.code(), Some(0));
    assert_eq!(ccr(&["--version"]).status.code(), Some(0));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["verify", "--dim", "24", "--margin", "6", "--grid", "0.1,0.1", "--seed", "4"];
    let to_stdout = ccr(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let to_file = ccr(&with_out);
    assert_eq!(to_stdout.status.code(), to_file.status.code());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn verify_csv() {
    let out = ccr(&["verify", "--kind", "lambda", "--lambda", "-1/2", "--dim", "9", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check_id,status,residual,tolerance,reason"));
    assert!(lines.any(|l| l.contains(",skipped,")));
}

#[test]
fn sweep_csv_round_trips_json() {
    let base = ["sweep", "--dims", "16,24,32", "--grid", "0.3,0.3;-0.2,0.4"];
    let j = ccr(&base);
    assert_eq!(j.status.code(), Some(EXIT_PASS), "{}", String::from_utf8_lossy(&j.stderr));
    let mut csv_args = base.to_vec();
    csv_args.extend(["--format", "csv"]);
    let c = ccr(&csv_args);
    let text = String::from_utf8(c.stdout).unwrap();
    assert!(text.starts_with("D,s,t,residual\n"));

    let from_csv = parse_csv(&text).unwrap();
    let from_json: Vec<Row> = records(&json(&j))
        .iter()
        .filter(|r| r.check_id == ccr_cli::sweep::ROW_ID)
        .map(|r| Row {
            dim: r.parameters["D"].as_u64().unwrap() as usize,
            s: r.parameters["s"].as_f64().unwrap(),
            t: r.parameters["t"].as_f64().unwrap(),
            residual: r.residual.unwrap(),
        })
        .collect();
    assert_eq!(from_csv.len(), 6);
    assert_eq!(from_csv, from_json);
}

#[test]
fn sweep_series_recommends_tolerance() {
    let out = ccr(&["sweep", "--dims", "16,32", "--grid", "0.3,0.3", "--precision", "f64"]);
    let v = json(&out);
    let recs = records(&v);
    let series = recs.iter().find(|r| r.check_id == ccr_cli::sweep::SERIES_ID).unwrap();
    let r_max = series.residual.unwrap();
    assert_eq!(series.parameters["recommended_tol_star"].as_f64().unwrap(), 10.0 * r_max);
    assert_eq!(series.parameters["monotone"], true);
    assert_eq!(v["config"]["precision"], "f64");
}

#[test]
fn sweep_lambda_is_skipped() {
    let out = ccr(&["sweep", "--kind", "lambda", "--lambda", "-2/3", "--dims", "17,33"]);
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let recs = records(&json(&out));
    assert!(!recs.is_empty() && recs.iter().all(|r| r.status == Status::Skipped));
}

#[test]
fn eval_through_library_entry_point() {
    assert_eq!(ccr_cli::run(["ccr", "eval", "a * a+"]), EXIT_PASS);
    assert_eq!(ccr_cli::run(["ccr", "eval", "J*a", "--kind", "lambda", "--lambda", "-1/2"]), EXIT_CONFIG);
    let out = ccr(&["eval", "a * a+", "--kind", "fock", "--state", "e0 + 2*e1"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1 · e0 + 4 · e1\n");
}

#[test]
fn reports_match_published_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../../../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in [
        &["verify", "--dim", "16"][..],
        &["verify", "--kind", "fock", "--dim", "24", "--margin", "4", "--tol", "1e-9"][..],
        &["verify", "--kind", "lambda", "--lambda", "-1/2", "--dim", "9"][..],
        &["sweep", "--dims", "16,32", "--precision", "f64"][..],
        &["sweep", "--kind", "lambda", "--lambda", "-1/3", "--dims", "9,17"][..],
    ] {
        let report = json(&ccr(args));
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}
