use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_semistab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn r_table_has_certificates() {
    let o = run(&["tables", "--r", "2", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("R(2, 2) = 4  admissible N <= 1000: 1, 2, 4"), "{out}");
    assert!(out.contains("R(1, 1) = unbounded"));
    assert_eq!(out.lines().count(), 8);
}

#[test]
fn quasithm_oracle_command() {
    let o = run(&["oracle", "quasithm", "--kmax", "3", "--nmax", "12", "--Nmax", "20"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn rejects_bad_scenarios_precisely() {
    let f = file(r#"{"d": 1, "p": 0, "tau": [[2, 1], [1, 1]]}"#);
    let o = run(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("non-cyclotomic"), "{err}");

    let f = file(r#"{"d": 1, "p": 0, "tau": [[1, 0], [0, 1]], "colour": "red"}"#);
    let err = String::from_utf8(run(&["analyze", f.path().to_str().unwrap()]).stderr).unwrap();
    assert!(err.contains("unknown field"), "{err}");

    let o = run(&["verify", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cohomology_command() {
    let f = file(r#"{"d": 2, "p": 3, "tau": [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]}"#);
    let o = run(&["cohomology", f.path().to_str().unwrap(), "--k", "2", "--n", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vanishing"], true);
    assert_eq!(v["verdicts"][0]["hypothesis"], true);
    assert_eq!(v["verdicts"][0]["conclusion"], true);

    let o = run(&["cohomology", f.path().to_str().unwrap(), "--k", "2", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["excluded"].as_str().unwrap().contains("N(3)"));
}

#[test]
fn verify_and_text_output() {
    let o = run(&["verify", "--suite", "neron3", "--trials", "50", "--seed", "11"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["regime"], "hypothesis-preserving");

    let f = file(r#"{"d": 1, "p": 0, "tau": [[0, -1], [1, -1]], "n": 7}"#);
    let out = stdout(&run(&["analyze", f.path().to_str().unwrap(), "--format", "text"]));
    assert!(out.contains("X_3(F): order 3"), "{out}");
    assert!(!out.contains("VIOLATION"));
}

#[test]
fn lists_suites() {
    let out = stdout(&run(&["suites"]));
    assert!(out.lines().any(|l| l.starts_with("witness-subgroup")));
}

#[test]
fn bundled_scenarios_analyze_cleanly() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["analyze", path.to_str().unwrap(), "--format", "json"]);
        assert!(o.status.success(), "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 4);
}
