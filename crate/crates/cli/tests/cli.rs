use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_repzeta"));
    c.env_remove("REPZETA_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const F2_L2: &str = r#"{"base":"Fq","p":2,"k":1,"level":2}"#;

#[test]
fn witten_a2() {
    let out = run(&["witten", "--type", "A2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["r"], 2);
    assert_eq!(v["kappa"], 3);
    assert_eq!(v["abscissa"], "2/3");
}

#[test]
fn witten_rejects_unknown_type() {
    let out = run(&["witten", "--type", "E5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn mellin_worked_example() {
    let input = scratch(
        "example.json",
        r#"{"factors":[{"coeffs":[1,0,0]},{"coeffs":[0,1,0]},{"coeffs":[1,3,0]},{"coeffs":[2,0,1]}]}"#,
    );
    let out = run(&[
        "mellin-abscissa",
        "--input",
        input.to_str().unwrap(),
        "--witness",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["abscissa"], "1");
    assert_eq!(v["witness"], serde_json::json!([1, 2]));
}

#[test]
fn malformed_input_names_the_field() {
    let input = scratch("bad.json", r#"{"factors":[{"coeffs":[1,"x"]}]}"#);
    let out = run(&["mellin-abscissa", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("factors[0]"), "{err}");
    assert!(out.stdout.is_empty());

    let out = run(&[
        "orbits",
        "--ring",
        r#"{"base":"Fq","p":2,"k":1}"#,
        "--by-type",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("level"));

    assert_eq!(run(&["twist-zeta", "--q", "3"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn orbit_counts_by_type() {
    let out = run(&["orbits", "--ring", F2_L2, "--by-type", "--brute"]);
    assert!(out.status.success());
    let v = json(&out);
    let table = v["table"].as_array().unwrap();
    assert_eq!(table.len(), 2);
    for row in table {
        let closed: Vec<String> = row["closed"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_str().unwrap().to_string())
            .collect();
        let brute: Vec<String> = row["brute"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(closed, brute);
    }
    assert_eq!(table[0]["closed"], serde_json::json!(["4", "4", "8"]));
}

#[test]
fn verify_kernel_suite_passes() {
    let out = run(&[
        "verify",
        "--suite",
        "kernel-type-3",
        "--q",
        "2",
        "--levels",
        "1..5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn verify_reports_failure_with_exit_two() {
    let out = run(&[
        "verify", "--suite", "sl-split", "--q", "2", "--levels", "1..2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["passed"], false);
    let out = run(&[
        "verify",
        "--suite",
        "sl-split-corrected",
        "--q",
        "2",
        "--levels",
        "1..2",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--criterion", "3", "--seed", "11"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(a.status.success());
}

#[test]
fn cap_from_config_env_and_flag() {
    let args = ["orbits", "--ring", F2_L2, "--by-type", "--brute"];
    let cfg = scratch("small.conf", "# tiny\ncap = 10\n");
    let out = bin().arg("--config").arg(&cfg).args(args).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );

    let out = bin().env("REPZETA_CAP", "10").args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin()
        .env("REPZETA_CAP", "10")
        .args(["--cap", "2^20"])
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success());

    let out = bin()
        .env("REPZETA_CAP", "zero")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("REPZETA_CAP"));
}

#[test]
fn csv_output() {
    let out = run(&[
        "--format",
        "csv",
        "identity-check",
        "--q",
        "2..3",
        "--r",
        "2..3",
    ]);
    assert!(out.status.success());
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = rd.headers().unwrap().clone();
    assert!(headers.len() > 1);
    assert!(rd.records().count() >= 4);

    let out = run(&["--format", "csv", "verify", "--suite", "witten"]);
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        rd.headers().unwrap(),
        vec!["suite", "label", "passed", "detail"]
    );
}

#[test]
fn twist_zeta_closed_form() {
    let out = run(&[
        "twist-zeta",
        "--q",
        "3",
        "--s",
        "2",
        "--rmax",
        "6",
        "--closed-form",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["sum_exact"], "5185/2592");
    assert!((v["sum"].as_f64().unwrap() - v["closed_form"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn sc_count_companion() {
    let out = run(&[
        "sc-count", "--ring", F2_L2, "--trace", "[0]", "--det", "[1]", "--brute",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert!(v.to_string().contains("order_brute"));
}
