use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn validator() -> jsonschema::Validator {
    let text = include_str!("../schema/output.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

/// Runs with `--json`, checks the document against the schema and returns it
/// with the exit code.
fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stdout)));
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    (out.status.code().unwrap(), v)
}

#[test]
fn verify_exit_codes() {
    let qiex = fixture("qiex.trs");
    let halflog = fixture("halflog.trs");
    assert_eq!(code(&["verify", &qiex, "-a", &fixture("qiex.si")]), 0);
    let si = fixture("halflog.si");
    assert_eq!(
        code(&["verify", &halflog, "-a", &si, "--relax-nullary", "1"]),
        1
    );
    assert_eq!(
        code(&[
            "verify",
            &halflog,
            "-a",
            &si,
            "--relax-nullary",
            "1",
            "--kind",
            "dpi"
        ]),
        0
    );
    let doubling = fixture("doubling.trs");
    assert_eq!(
        code(&[
            "verify",
            &doubling,
            "-a",
            &fixture("doubling.si"),
            "--kind",
            "pi"
        ]),
        0
    );
}

#[test]
fn usage_and_input_errors_exit_3() {
    assert_eq!(code(&["check", &fixture("broken.trs")]), 3);
    assert_eq!(code(&["check", &fixture("no-such-file.trs")]), 3);
    assert_eq!(code(&["frobnicate"]), 3);
    assert_eq!(
        code(&["synth", &fixture("qiex.trs"), "--domain", "reals"]),
        3
    );
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn synth_outcomes() {
    let (c, v) = json(&["synth", &fixture("qiex.trs")]);
    assert_eq!((c, v["status"].as_str()), (0, Some("found")));
    assert_eq!(v["assignment"]["f"], "X1");
    let (c, v) = json(&["synth", &fixture("grow.trs")]);
    assert_eq!((c, v["status"].as_str()), (1, Some("exhausted")));
    let sqrt2 = fixture("gadget-sqrt2.trs");
    let (c, v) = json(&[
        "synth",
        &sqrt2,
        "--domain",
        "rat:6",
        "-d",
        "6",
        "--timeout",
        "0.01",
    ]);
    assert_eq!((c, v["status"].as_str()), (2, Some("timed_out")));
    let (c, _) = json(&["synth", &fixture("qiex.trs"), "--template", "linear"]);
    assert_eq!(c, 0);
}

#[test]
fn eval_outcomes() {
    let doubling = fixture("doubling.trs");
    let out = run(&["eval", &doubling, "d(s(s(0)))"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "s(s(s(s(0)))), 3 steps"
    );
    let (c, v) = json(&["eval", &fixture("qiex.trs"), "f(0)", "--max-steps", "5"]);
    assert_eq!((c, v["outcome"].as_str()), (2, Some("budget_exceeded")));
    assert_eq!(code(&["eval", &doubling, "d(x)"]), 3);
}

#[test]
fn every_command_matches_the_schema() {
    let qiex = fixture("qiex.trs");
    let doubling = fixture("doubling.trs");
    let model = fixture("golden/qiex-qi.model");
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", &qiex],
        vec!["dp", &qiex],
        vec!["encode", &qiex],
        vec!["check-model", &qiex, &model],
        vec!["rc", &doubling, "--max-size", "5"],
        vec!["bound", &doubling, "--max-size", "5"],
        vec!["bound", &doubling, "--rc", "linear:1", "--max-size", "5"],
    ];
    for args in cases {
        let (c, v) = json(&args);
        assert_eq!(c, 0, "{args:?}: {v}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn solver_models() {
    let (c, v) = json(&[
        "check-model",
        &fixture("grow.trs"),
        &fixture("golden/grow-qi.out"),
    ]);
    assert_eq!((c, &v["unsat"]), (1, &Value::Bool(true)));
    let doubling = fixture("doubling.trs");
    let model = fixture("golden/doubling-pi.model");
    let (c, v) = json(&["check-model", &doubling, &model, "--kind", "pi"]);
    assert_eq!((c, v["report"]["overall"].as_str()), (0, Some("valid")));
}

#[test]
fn encode_writes_the_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qiex.smt2");
    let path_s = path.display().to_string();
    let (c, v) = json(&["encode", &fixture("qiex.trs"), "-o", &path_s]);
    assert_eq!(c, 0);
    assert_eq!(v["smtlib"], Value::Null);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        written,
        std::fs::read_to_string(fixture("golden/qiex-qi.smt2")).unwrap()
    );
}

#[test]
fn same_seed_same_bytes() {
    let doubling = fixture("doubling.trs");
    let args = ["--json", "--seed", "7", "rc", &doubling, "--max-size", "14"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["rc"]["approximate"], Value::Bool(true));
}

#[test]
fn schema_rejects_malformed_documents() {
    let (_, mut v) = json(&["eval", &fixture("doubling.trs"), "d(0)"]);
    let schema = validator();
    assert!(schema.is_valid(&v));
    v["schema_version"] = 2.into();
    assert!(!schema.is_valid(&v));
    v["schema_version"] = 1.into();
    v["outcome"] = "diverged".into();
    assert!(!schema.is_valid(&v));
    v["outcome"] = "stuck".into();
    v["command"] = "verify".into();
    assert!(!schema.is_valid(&v));
}
