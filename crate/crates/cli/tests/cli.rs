use std::path::Path;
use std::process::{Command, Output};

use polyberg::{gamma_sequence, MatrixSeq, SymbolSpec};
use serde_json::Value;

const IND_HALF: &str = r#"{"kind":"indicator","s":0.5}"#;

fn polyberg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyberg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_seq(path: &Path) -> MatrixSeq {
    MatrixSeq::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gamma_writes_every_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("seq.json");
    let o = polyberg(&["gamma", "--n", "3", "--alpha", "0", "--xi-max", "8", "--symbol", IND_HALF, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let seq = read_seq(&out);
    assert_eq!(seq.mats.len(), 11);
    assert_eq!(seq.mats[0].xi, -2);
    assert!(stderr(&o).contains("tail deviation"));
}

#[test]
fn gamma_n1_indicator_values() {
    let o = polyberg(&["gamma", "--n", "1", "--alpha", "0", "--xi-max", "3", "--symbol", IND_HALF]);
    assert!(o.status.success());
    let seq = MatrixSeq::from_json(&stdout(&o)).unwrap();
    for (m, want) in seq.mats.iter().zip([0.25, 1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0]) {
        assert!((m.entries[(0, 0)].re - want).abs() < 1e-15);
    }
}

#[test]
fn gamma_constant_is_scaled_identity() {
    let o = polyberg(&["gamma", "--xi-max", "4", "--symbol", r#"{"kind":"const","value":2}"#]);
    assert!(o.status.success());
    let seq = MatrixSeq::from_json(&stdout(&o)).unwrap();
    for m in &seq.mats {
        let d = m.order();
        for j in 0..d {
            for k in 0..d {
                let want = if j == k { 2.0 } else { 0.0 };
                assert!((m.entries[(j, k)].re - want).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn exported_json_reimports_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("seq.json");
    let sym = r#"{"kind":"poly_t","coeffs":[0.3,-1.1,0.7]}"#;
    let o = polyberg(&["gamma", "--n", "3", "--alpha", "2.5", "--xi-max", "10", "--symbol", sym, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let direct = gamma_sequence(&SymbolSpec::from_json(sym).unwrap(), 3, 2.5, 10).unwrap();
    let back = read_seq(&out);
    assert_eq!(back.mats, direct.mats);
    assert_eq!(back.scalar_limit, direct.scalar_limit);
}

#[test]
fn symbol_from_file_and_csv_block() {
    let dir = tempfile::tempdir().unwrap();
    let sym = dir.path().join("sym.json");
    std::fs::write(&sym, IND_HALF).unwrap();
    let arg = format!("@{}", sym.display());
    let o = polyberg(&["gamma", "--n", "2", "--xi-max", "3", "--symbol", &arg, "--format", "csv", "--xi", "-1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,k,value"));
    assert_eq!(lines.count(), 1);
    let o = polyberg(&["gamma", "--symbol", IND_HALF, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_symbol_json_exits_2() {
    let o = polyberg(&["gamma", "--symbol", "{not json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad symbol JSON"));
    let o = polyberg(&["gamma", "--symbol", r#"{"kind":"indicator","s":1.5}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn separate_distinct_frequencies() {
    let o = polyberg(&["separate", "--n", "2", "--alpha", "0", "--state", "0:1,0", "--state", "2:1,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["gap"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert_eq!(v["witness"]["kind"], "plans");
}

#[test]
fn separate_infinity_from_finite() {
    let o = polyberg(&["separate", "--n", "2", "--alpha", "0", "--state", "inf", "--state", "1:1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"]["kind"], "symbol");
    assert_eq!(v["values"][0].as_f64().unwrap(), 0.0);
    assert!((v["gap"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-14);
}

#[test]
fn coincidence_pairs_exit_3() {
    let u0 = (3.0f64 / 4.0).sqrt();
    let state = format!("0:{u0},0.5");
    let o = polyberg(&["separate", "--n", "2", "--alpha", "0", "--state", &state, "--state", "2:1,0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not separable by construction"));
    let o = polyberg(&["separate", "--n", "3", "--state", "-2:1", "--state", "2:1,0,0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn separate_needs_two_states() {
    let o = polyberg(&["separate", "--state", "inf"]);
    assert_eq!(o.status.code(), Some(2));
    let o = polyberg(&["separate", "--n", "2", "--state", "0:1,0", "--state", "0:1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn purestate_reports_both_paths() {
    let o = polyberg(&["purestate", "--n", "2", "--symbol", IND_HALF, "--state", "2:1,0", "--state", "inf"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v[0]["value"].as_f64().unwrap() - 1.0 / 64.0).abs() < 1e-12);
    assert!((v[0]["integral"].as_f64().unwrap() - 1.0 / 64.0).abs() < 1e-12);
    assert_eq!(v[1]["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn basis_demo_rebuilds_units() {
    let o = polyberg(&["basis", "--n", "5", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_error"].as_f64().unwrap() < 1e-8);
    let o = polyberg(&["basis", "--n", "3", "--alpha", "1", "--xi", "-1", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1 + 4);
}

#[test]
fn oracle_agrees() {
    let o = polyberg(&["oracle", "--n", "2", "--alpha", "1", "--symbol", r#"{"kind":"jacobi_g","p":2}"#]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_diff"].as_f64().unwrap() < 1e-6);
}

#[test]
fn verify_default_passes() {
    let o = polyberg(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
}

#[test]
fn verify_negative_alpha_skips_sup_bound() {
    let o = polyberg(&["verify", "--alpha", "-0.5", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("unproven for α ≤ 0"));
}

#[test]
fn verify_is_seed_independent() {
    for seed in ["7", "8"] {
        let o = polyberg(&["verify", "--seed", seed, "--n", "3"]);
        assert_eq!(o.status.code(), Some(0), "seed {seed}: {}", stdout(&o));
    }
}

#[test]
fn verify_reports_failures_with_exit_1() {
    // A nonzero threshold above every antidiagonal entry makes the check fail.
    let o = polyberg(&["verify", "--n", "2", "--alpha", "1", "--tol-nonzero", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("failed:"));
}

#[test]
fn thread_count_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_polyberg"))
            .args(["gamma", "--n", "2", "--xi-max", "5", "--symbol", IND_HALF])
            .env("POLYBERG_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}
