use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankmetric"))
        .args(args)
        .env_remove("RANKMETRIC_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn check_gab_reports_the_shift() {
    let v = json(&["check-gab", "G:k=3,s=2", "--q", "2", "--n", "5", "--format", "json"]);
    assert_eq!(v["s"], 2);
    assert_eq!(v["mrd"], "verified_true");
    let v = json(&["check-gab", "H:k=3,s=1,eta=g^2", "--q", "3", "--n", "5", "--format", "json"]);
    assert_eq!(v["equivalent"], false);
}

#[test]
fn check_twisted_recovers_a_witness() {
    let v = json(&["check-twisted", "H:k=3,s=1,eta=g^2", "--q", "3", "--n", "5", "--format", "json"]);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["s"], 1);
    let v = json(&["check-twisted", "G:k=3", "--q", "3", "--n", "5", "--format", "json"]);
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["rejected"][0]["step"], "intersection");
}

#[test]
fn invariants_of_a_sporadic_code() {
    let v = json(&["invariants", "C3:s=1", "--format", "json"]);
    assert_eq!(v["q"], 3);
    assert_eq!(v["h"], 1);
    assert_eq!(v["ind"], serde_json::json!([2, 2]));
    assert_eq!(v["ind_status"], "certified");
    assert_eq!(v["R_exp"], 7);
    assert_eq!(v["fixture_match"], true);
}

#[test]
fn dual_written_to_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("rankmetric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dual = dir.join("dual.json");
    let back = dir.join("back.json");
    let code = dir.join("code.json");
    let d = dual.to_str().unwrap();
    let args = ["--q", "2", "--n", "4", "--format", "json"];
    assert!(run(&[&["construct", "G:k=2"], &args[..], &["--out", code.to_str().unwrap()]].concat())
        .status
        .success());
    assert!(run(&[&["dual", "G:k=2"], &args[..], &["--out", d]].concat()).status.success());
    assert!(run(&[&["dual", d], &args[..], &["--out", back.to_str().unwrap()]].concat())
        .status
        .success());
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&code).unwrap()).unwrap();
    let b: Value = serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dual).unwrap()).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rankdist_csv_and_budget_fallback() {
    let out = run(&["rankdist", "G:k=2", "--q", "2", "--n", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("rank,count"));
    let total: u128 = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<u128>().unwrap())
        .sum();
    assert_eq!(total, 256);
    let out = Command::new(env!("CARGO_BIN_EXE_rankmetric"))
        .args(["rankdist", "G:k=2", "--q", "2", "--n", "4", "--format", "json", "--samples", "50"])
        .env("RANKMETRIC_BUDGET", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exact"], false);
}

#[test]
fn mindist_and_sample_mrd() {
    let v = json(&["mindist", "C5", "--format", "json", "--workers", "1"]);
    assert_eq!(v["d"], 5);
    let v = json(&["sample-mrd", "--q", "3", "--n", "4", "--k", "4", "--trials", "3", "--format", "json"]);
    assert_eq!(v["mrd_fraction"], 1.0);
}

#[test]
fn adjoint_of_gabidulin_is_gabidulin_sized() {
    let out = run(&["adjoint", "G:k=3", "--q", "2", "--n", "5"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("dim 3"));
}

#[test]
fn bad_parameters_fail_cleanly() {
    // at q = 2 every nonzero η violates the norm condition
    let out = run(&["construct", "H:k=2,eta=g^1", "--q", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = run(&["construct", "C3", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["construct", "Z9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table1_reproduces_the_fixture() {
    let out = run(&["table1", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    for row in rows {
        assert!(row.ends_with(",true,match") || row.ends_with(",true,consistent"), "{row}");
    }
}
