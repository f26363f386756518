use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coordrate::regions::LinearSystem;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coordrate"))
        .args(args)
        .env_remove("COORDRATE_SEED")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

const EQUAL_BITS_WYNER: &str = r#"{
  "scheme": "wyner",
  "q": {"axes": [{"name": "X", "size": 2}, {"name": "Y", "size": 2}], "probs": [0.5, 0, 0, 0.5]},
  "aux": {"axes": [{"name": "X", "size": 2}, {"name": "Y", "size": 2}, {"name": "U", "size": 2}],
          "probs": [0.5, 0, 0, 0, 0, 0, 0, 0.5]},
  "rate": 1.5
}"#;

#[test]
fn dsbs_sweep_csv() {
    let text = stdout(&run(&["dsbs", "--a", "0.1", "--sweep-t", "0:1:0.01", "--format", "csv"]));
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,t,f,mi_term,cmi_term");
    assert_eq!(lines.len(), 102);
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[1], 0.0);
    assert!((first[2] - 0.436380).abs() < 1e-6);
    let last: Vec<f64> = lines[101].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[1], 1.0);
    assert!((last[2] - 0.531004).abs() < 1e-6);
    assert!(lines.iter().all(|l| l.split(',').count() == 5));
}

#[test]
fn dsbs_summary_and_explicit_weights() {
    let v = json(&run(&["dsbs", "--a", "0.1", "--a", "0.2"]));
    assert!((v[0]["t_star"].as_f64().unwrap() - 0.343436).abs() < 1e-5);
    assert!((v[1]["t_star"].as_f64().unwrap() - 0.442523).abs() < 1e-5);
    let v = json(&run(&["dsbs", "--a", "0.2", "--t", "0.5342,1"]));
    assert!((v[0]["f"].as_f64().unwrap() - 0.207683).abs() < 1e-5);
    assert!((v[1]["f"].as_f64().unwrap() - 0.278072).abs() < 1e-5);
}

#[test]
fn measure_examples() {
    let pmf = data("dsbs02.json");
    let p = pmf.to_str().unwrap();
    let v = json(&run(&["measure", "--pmf", p, "--quantity", "mutual_information"]));
    assert!((v["value"].as_f64().unwrap() - 0.278072).abs() < 1e-6);
    let text = stdout(&run(&["measure", "--pmf", p, "--quantity", "entropy", "--format", "csv"]));
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("entropy,"));
    let h: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((h - 1.721928).abs() < 1e-6);
    let v = json(&run(&["measure", "--pmf", p, "--quantity", "tv_distance", "--other", p]));
    assert_eq!(v["value"].as_f64().unwrap(), 0.0);
    let v = json(&run(&["measure", "--pmf", p, "--quantity", "total_correlation"]));
    assert!((v["value"].as_f64().unwrap() - 0.278072).abs() < 1e-6);
}

#[test]
fn fme_reproduces_the_checked_in_region() {
    let pre = data("pre_elimination.json");
    let out: LinearSystem = serde_json::from_str(&stdout(&run(&[
        "fme", "--system", pre.to_str().unwrap(), "--eliminate", "R0",
    ])))
    .unwrap();
    let mut expected: LinearSystem =
        serde_json::from_str(&std::fs::read_to_string(data("eliminated_region.json")).unwrap()).unwrap();
    expected.assumptions = out.assumptions.clone();
    assert_eq!(out.ineqs.len(), 6);
    assert_eq!(out.canonical_set(), expected.canonical_set());
    let csv = stdout(&run(&["fme", "--system", pre.to_str().unwrap(), "--eliminate", "R0", "--format", "csv"]));
    assert_eq!(csv.lines().next(), Some("lhs,rel,rhs"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn region_examples() {
    let member = |args: &[&str]| json(&run(args))["member"].as_bool().unwrap();
    assert!(member(&["region", "--kind", "two_equal", "--hx", "1", "--rates", "0.5,0.5,0.5"]));
    assert!(!member(&["region", "--kind", "two_equal", "--hx", "1", "--rates", "0.49,1,1"]));
    let third = 1.0f64 / 3.0;
    let r = format!("{third},{third},{third},{third}");
    assert!(member(&["region", "--kind", "equal_forehead", "--hx", "1", "--rates", &r]));
    let r = format!("{},{third},{third},{third}", 2.0 * third);
    assert!(member(&["region", "--kind", "equal_indv", "--hx", "1", "--rates", &r]));
    assert!(member(&["region", "--kind", "equal_general", "--hx", "1", "--rates", "0.5,0.5,0.5", "--views", "1;2"]));
    let out = run(&["region", "--kind", "equal_general", "--hx", "1", "--rates", "0.5,0.5,0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["dsbs"]).status.code(), Some(1));
    assert_eq!(run(&["dsbs", "--a", "0.7"]).status.code(), Some(1));
    assert_eq!(run(&["measure", "--pmf", "/nonexistent.json", "--quantity", "entropy"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, EQUAL_BITS_WYNER).unwrap();
    let out = run(&["simulate", "--config", cfg.to_str().unwrap(), "--n", "30", "--seeds", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
}

#[test]
fn output_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("sweep.csv");
    let t = target.to_str().unwrap();
    let printed = stdout(&run(&["dsbs", "--a", "0.1", "--t", "0,1", "--format", "csv"]));
    assert!(run(&["dsbs", "--a", "0.1", "--t", "0,1", "--format", "csv", "--output", t]).status.success());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), printed);
    let failed = dir.path().join("never.csv");
    let out = run(&["dsbs", "--a", "0.9", "--t", "0", "--output", failed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!failed.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn simulate_replays_its_own_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, EQUAL_BITS_WYNER).unwrap();
    let first = stdout(&run(&["simulate", "--config", cfg.to_str().unwrap(), "--n", "2,4", "--seeds", "5", "--seed", "7", "--threads", "2"]));
    let doc: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["seeds"], serde_json::json!([7, 8, 9, 10, 11]));
    assert_eq!(doc["report"]["rows"].as_array().unwrap().len(), 10);
    let saved = dir.path().join("out.json");
    std::fs::write(&saved, &first).unwrap();
    let again = stdout(&run(&["simulate", "--config", saved.to_str().unwrap()]));
    assert_eq!(first, again);
    let csv = stdout(&run(&["simulate", "--config", cfg.to_str().unwrap(), "--n", "2", "--seeds", "3", "--format", "csv"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "scheme,n,seed,R,R0,Rstar,R1,R2,tv");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("wyner,2,median,"));
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, EQUAL_BITS_WYNER).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_coordrate"))
        .args(["simulate", "--config", cfg.to_str().unwrap(), "--n", "2", "--seeds", "2"])
        .env("COORDRATE_SEED", "40")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["seeds"], serde_json::json!([40, 41]));
}

#[test]
fn optimize_round_trips_through_its_output() {
    let dir = tempfile::tempdir().unwrap();
    let pmf = dir.path().join("dsbs01.json");
    std::fs::write(&pmf, r#"{"axes": [{"name": "X", "size": 2}, {"name": "Y", "size": 2}], "probs": [0.05, 0.45, 0.45, 0.05]}"#).unwrap();
    let p = pmf.to_str().unwrap();
    let first = stdout(&run(&["optimize", "--pmf", p, "--problem", "wyner_ci", "--card-u", "2", "--restarts", "4", "--seed", "3"]));
    let doc: Value = serde_json::from_str(&first).unwrap();
    assert!((doc["value"].as_f64().unwrap() - 0.872761).abs() < 2e-3);
    assert_eq!(doc["config"]["seed"], 3);
    let saved = dir.path().join("opt.json");
    std::fs::write(&saved, &first).unwrap();
    let again = stdout(&run(&["optimize", "--pmf", p, "--problem", "wyner_ci", "--optimizer-config", saved.to_str().unwrap()]));
    assert_eq!(first, again);
    let out = run(&["optimize", "--pmf", p, "--problem", "relaxed_wyner_ci", "--card-u", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["optimize", "--pmf", p, "--problem", "wyner_ci", "--restarts", "0"]);
    assert_eq!(out.status.code(), Some(1));
}
