use std::path::PathBuf;
use std::process::{Command, Output};

use symidem::idempotents::IdempotentSet;
use symidem::verify::check_set;

fn symidem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symidem"))
        .args(args)
        .env_remove("SYMIDEM_DENSE_BOUND")
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn stdout_json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tensor_count(args: &[&str]) -> usize {
    stdout_json(&symidem(args))["tensors"].as_array().unwrap().len()
}

#[test]
fn construct_counts() {
    assert_eq!(tensor_count(&["construct", "--algebra", "h", "--field", "gaussian", "--n", "3", "--ell", "2"]), 2);
    assert_eq!(tensor_count(&["construct", "--algebra", "o", "--field", "rational", "--n", "2", "--m", "2"]), 4);
    assert_eq!(tensor_count(&["construct", "--algebra", "h", "--field", "rational", "--n", "4"]), 9);
    assert_eq!(tensor_count(&["construct", "--algebra", "o", "--field", "gaussian", "--n", "2"]), 5);
}

#[test]
fn construct_is_byte_identical() {
    let args = ["construct", "--algebra", "o", "--field", "gaussian", "--n", "3", "--m", "3"];
    let a = symidem(&args);
    let b = symidem(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixtures_round_trip() {
    let cases: &[&[&str]] = &[
        &["--algebra", "h", "--field", "gaussian", "--n", "4", "--ell", "3"],
        &["--algebra", "h", "--field", "rational", "--n", "5"],
        &["--algebra", "h", "--field", "rational", "--n", "4"],
        &["--algebra", "o", "--field", "rational", "--n", "3", "--m", "2"],
        &["--algebra", "o", "--field", "gaussian", "--n", "2"],
    ];
    for (i, case) in cases.iter().enumerate() {
        let path = tmp(&format!("fixture{i}.json"));
        let p = path.to_str().unwrap();
        let mut args = vec!["construct"];
        args.extend_from_slice(case);
        args.extend_from_slice(&["--out", p]);
        assert!(symidem(&args).status.success());
        let set: IdempotentSet = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let r = check_set(&set);
        assert!(r.passed(), "{case:?}: {}", r.detail);
        let o = symidem(&["verify", "--fixture", p]);
        assert_eq!(o.status.code(), Some(0), "{case:?}");
    }
}

#[test]
fn range_errors_exit_2_and_name_the_bound() {
    let o = symidem(&["construct", "--algebra", "h", "--n", "3", "--ell", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ℓ must lie in [⌈n/2⌉, n]"), "{err}");

    let o = symidem(&["construct", "--algebra", "o", "--n", "4", "--m", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m must lie in [⌈n/2⌉, n]"));

    assert_eq!(symidem(&["construct", "--algebra", "h", "--n", "0"]).status.code(), Some(2));
    assert_eq!(symidem(&["construct", "--algebra", "h", "--n", "2", "--m", "2"]).status.code(), Some(2));
    assert_eq!(symidem(&["construct", "--algebra", "x", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn verify_quick_passes_deterministically() {
    let a = symidem(&["verify", "--profile", "quick"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = symidem(&["verify", "--profile", "quick"]);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["summary"]["skipped"], 0);
    assert!(report["results"][0].get("elapsed_ms").is_none());
}

#[test]
fn verify_writes_report_and_prints_summary() {
    let path = tmp("report.json");
    let o = symidem(&["verify", "--profile", "quick", "--timings", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("0 failed"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report["results"][0].get("elapsed_ms").is_some());
}

#[test]
fn flipped_sign_fails_and_lists_checks() {
    let o = symidem(&["verify", "--profile", "quick", "--flip-sign", "3,5"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("failing checks:") && err.contains("table/octonion"), "{err}");
}

#[test]
fn quick_profile_skip_is_fatal() {
    let o = symidem(&["verify", "--profile", "quick", "--dense-bound", "16"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped checks:"));
}

#[test]
fn dense_bound_reads_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_symidem"))
        .args(["dims", "--algebra", "o", "--n", "3"])
        .env("SYMIDEM_DENSE_BOUND", "16")
        .output()
        .unwrap();
    let v = stdout_json(&o);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["realized"].is_null()));
}

fn total(algebra: &str, n: &str, field: &str) -> (u64, u64) {
    let v = stdout_json(&symidem(&["dims", "--algebra", algebra, "--n", n]));
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["field"] == field && r["scope"] == "total").unwrap().clone();
    (row["closed_form"].as_u64().unwrap(), row["realized"].as_u64().unwrap())
}

#[test]
fn dims_examples() {
    // (n+1)(n+3)/4 at n = 5
    assert_eq!(total("h", "5", "GaussianComplex"), (12, 12));
    // (n+2)(n+3)(n+4)/24 at n = 2
    assert_eq!(total("o", "2", "GaussianComplex"), (5, 5));
    // (n+1)(n+3)/8 at n = 3
    assert_eq!(total("h", "3", "RationalReal"), (3, 3));
}
