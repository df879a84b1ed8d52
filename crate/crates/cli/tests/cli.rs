use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qgrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn column(csv: &str, idx: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn cube_root_hbar_matches_closed_form() {
    let out = qgrowth(&["growth", "--fn", "cube-root", "--functional", "Hbar", "--grid", "0.05:0.95:50"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "r,value,functional,function_id,nodes");
    let r = column(&csv, 0);
    let v = column(&csv, 1);
    assert_eq!(r.len(), 50);
    for (r, v) in r.iter().zip(&v) {
        let exact = 3.0 * r.powf(2.0 / 3.0);
        assert!((v - exact).abs() <= 1e-10 * exact, "r={r} v={v}");
    }
}

#[test]
fn dellis_frequency_is_nondecreasing_below_the_critical_radius() {
    let out = qgrowth(&["growth", "--fn", "dellis", "--functional", "I", "--grid", "0.05:0.45:20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = column(&String::from_utf8(out.stdout).unwrap(), 1);
    assert_eq!(v.len(), 20);
    for w in v.windows(2) {
        assert!(w[1] >= w[0] - 1e-7, "{} then {}", w[0], w[1]);
    }
}

#[test]
fn h1_equals_hbar() {
    let grid = "0.1:0.9:12";
    let a = qgrowth(&["growth", "--fn", "roots:2,1,0", "--functional", "hN:1", "--grid", grid]);
    let b = qgrowth(&["growth", "--fn", "roots:2,1,0", "--functional", "Hbar", "--grid", grid]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(column(&String::from_utf8(a.stdout).unwrap(), 1), column(&String::from_utf8(b.stdout).unwrap(), 1));
}

#[test]
fn unknown_function_exits_2() {
    let out = qgrowth(&["growth", "--fn", "no-such-map", "--functional", "H"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-map"));
    assert_eq!(qgrowth(&["counterexample", "--fn", "roots:2,1,0"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_and_bad_usage_exit_2() {
    assert_eq!(qgrowth(&["verify", "--suite", "thm9.9"]).status.code(), Some(2));
    assert_eq!(qgrowth(&["growth", "--fn", "dellis", "--grid", "0.2:0.1:10"]).status.code(), Some(2));
    assert_eq!(qgrowth(&["growth", "--fn", "dellis", "--grid", "0.1:0.5:5"]).status.code(), Some(2));
    assert_eq!(qgrowth(&["growth", "--fn", "dellis", "--grid", "0.1:1.5:10"]).status.code(), Some(2));
    assert_eq!(qgrowth(&["growth", "--fn", "dellis", "--functional", "K"]).status.code(), Some(2));
    assert_eq!(qgrowth(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn critical_radius_is_shifted_or_refused() {
    let args = ["growth", "--fn", "dellis", "--functional", "D", "--grid", "0.1:0.9:9"];
    let shifted = qgrowth(&args);
    assert_eq!(shifted.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&shifted.stderr).contains("warning"));
    let r = column(&String::from_utf8(shifted.stdout).unwrap(), 0);
    let h = r[1] - r[0];
    assert!(r.iter().all(|x| (x - 0.5).abs() >= 0.25 * h));
    assert!(r.windows(2).any(|w| ((w[0] + w[1]) / 2.0 - 0.5).abs() < 1e-12));

    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(qgrowth(&strict).status.code(), Some(3));
}

#[test]
fn output_file_gets_a_sidecar_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = qgrowth(&["growth", "--fn", "dellis", "--functional", "H", "--grid", "0.05:0.45:10", "--out", path_str(p)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["function_id"], "roots:2,2,-1");
    assert_eq!(meta["grid"]["count"], 10);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# run\nfn = cube-root\nfunctional = H\ngrid = 0.1:0.8:8\n").unwrap();
    let from_file = qgrowth(&["growth", "--config", path_str(&cfg)]);
    assert_eq!(from_file.status.code(), Some(0));
    let csv = String::from_utf8(from_file.stdout).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.lines().nth(1).unwrap().contains(",H,"));

    let overridden = qgrowth(&["growth", "--config", path_str(&cfg), "--functional", "D"]);
    assert!(String::from_utf8(overridden.stdout).unwrap().lines().nth(1).unwrap().contains(",D,"));

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(qgrowth(&["growth", "--config", path_str(&cfg)]).status.code(), Some(2));
}

#[test]
fn verify_named_suite_passes_and_reports_json() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("suite.json");
    let out = qgrowth(&["verify", "thm1.2", "--out", path_str(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.starts_with("PASSED "));
    let (k, n) = summary.trim()["PASSED ".len()..].split_once('/').unwrap();
    assert_eq!(k, n);
    let reports: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(!reports.is_empty());
    for r in &reports {
        assert!(r["claim_id"].as_str().unwrap().starts_with("thm1.2"));
        assert_eq!(r["passed"], true);
    }
}

#[test]
fn verify_without_out_prints_json_and_summary_on_stderr() {
    let out = qgrowth(&["verify", "--suite", "cex-dellis-3rd"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(reports.iter().any(|r| r["expectation"] == "must_fail"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASSED"));
}

#[test]
fn finiteness_suite_reports_mismatch_with_exit_1_and_still_writes() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("finiteness.json");
    let out = qgrowth(&["verify", "lemma5.2-finiteness", "--out", path_str(&out_path)]);
    assert_eq!(out.status.code(), Some(1));
    let reports: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(reports.len(), 3);
}

#[test]
fn counterexample_curves_have_the_predicted_signs() {
    let cube = qgrowth(&["counterexample", "--fn", "cube-root", "--grid", "0.05:0.95:19"]);
    assert_eq!(cube.status.code(), Some(0));
    let csv = String::from_utf8(cube.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "rho,value,quantity");
    assert!(column(&csv, 1).iter().all(|v| *v < 0.0));

    let dellis = qgrowth(&["counterexample", "--fn", "dellis", "--grid", "0.55:0.95:17"]);
    assert_eq!(dellis.status.code(), Some(0));
    assert!(column(&String::from_utf8(dellis.stdout).unwrap(), 1).iter().all(|v| *v < -0.01));

    let second = qgrowth(&["counterexample", "--fn", "dellis", "--order", "2", "--grid", "0.05:0.95:19"]);
    assert_eq!(second.status.code(), Some(0));
    assert!(column(&String::from_utf8(second.stdout).unwrap(), 1).iter().all(|v| *v > 0.0));

    let early = qgrowth(&["counterexample", "--fn", "dellis", "--grid", "0.1:0.4:8"]);
    assert_eq!(early.status.code(), Some(0));
}
