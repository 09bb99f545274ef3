use std::process::{Command, Output};

use serde_json::Value;

fn utester(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_utester"))
        .args(args)
        .arg("--json-only")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

#[test]
fn verify_ppovm_lists_100_checks() {
    let out = utester(&["verify", "--suite", "ppovm", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["payload"]["suites"][0]["checks"].as_array().unwrap().len(), 100);
    assert!(out.stderr.is_empty());
}

#[test]
fn bound_zero_z_zero_x() {
    let out = utester(&["bound", "--t1", "0Z", "--t2", "0X", "--starts", "32", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let v = r["payload"]["value"].as_f64().unwrap();
    assert!((v - 1.0).abs() < 1e-4, "{v}");
    assert_eq!(r["payload"]["starts"].as_array().unwrap().len(), 32);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(utester(&["bound", "--t1", "0Z", "--badflag"]).status.code(), Some(2));
    assert_eq!(utester(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(utester(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_2_with_report() {
    let out = utester(&["bound", "--t1", "0Q", "--t2", "0X"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "error");
    let out = utester(&["qkd", "extended", "--D", "3", "--rounds", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn muub_check_verdicts() {
    let out = utester(&["muub-check", "--a", "rotation", "--b", "hadamard-pair"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((report(&out)["payload"]["kappa"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let out = utester(&["muub-check", "--a", "pauli", "--b", "pauli"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["payload"]["verdict"], false);
}

#[test]
fn files_accepted_where_names_are() {
    let dir = tempfile::tempdir().unwrap();
    let dump = report(&utester(&["basis", "dump", "+X"]));
    let tester_path = dir.path().join("plus.json");
    std::fs::write(&tester_path, dump["payload"]["tester"].to_string()).unwrap();
    let out = utester(&["bound", "--t1", "0Z", "--t2", tester_path.to_str().unwrap(), "--starts", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["payload"]["value"].as_f64().unwrap() < 1e-6);

    let dump = report(&utester(&["basis", "dump", "pauli-unbiased"]));
    let basis_path = dir.path().join("pu.json");
    std::fs::write(&basis_path, dump["payload"]["basis"].to_string()).unwrap();
    let out = utester(&["muub-check", "--a", "pauli", "--b", basis_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn qkd_config_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"protocol":"lm05","d":2,"D":2,"rounds":400,"control_fraction":0.5,
            "eve":{"kind":"qmm","probe":{"policy":"random"}},
            "tester_sets":[["0Z","1Z"],["+X","-X"]],"encodings":["rotation","rotation"],"seed":11}"#,
    )
    .unwrap();
    let trace = dir.path().join("trace.csv");
    let out = utester(&[
        "qkd",
        "lm05",
        "--config",
        cfg.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stats = &report(&out)["payload"]["stats"];
    assert_eq!(stats["rounds"], 400);
    assert!(stats["cm_mismatch"]["count"].as_u64().unwrap() > 0);

    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("round,mode,bob_set,bob_tester"));
    assert_eq!(lines.count(), 400);

    let out = utester(&["qkd", "extended", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_argv_identical_payload() {
    let args = ["qkd", "extended", "--D", "4", "--eve", "qmm", "--eve-policy", "random", "--rounds", "3000", "--seed", "5"];
    let a = report(&utester(&args));
    let b = report(&utester(&args));
    assert_eq!(a["payload"].to_string(), b["payload"].to_string());
}

#[test]
fn logs_go_to_stderr_unless_json_only() {
    let out = Command::new(env!("CARGO_BIN_EXE_utester"))
        .args(["basis", "list"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("pauli-unbiased"));
    assert!(report(&out)["payload"]["bases"].is_array());
}
