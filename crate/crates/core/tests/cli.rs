use std::path::Path;
use std::process::{Command, Output};

use swapcorr::analysis::{sweep, Case, LambdaGrid, SweepConfig};
use swapcorr::output::{parse_csv, CSV_HEADER};
use swapcorr::povm::{asymmetric_povm, werner_bell_povm, Povm};

fn swapcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swapcorr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweep_writes_one_row_per_lambda_outcome_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("case1.csv");
    let res = swapcorr(&["sweep", "--case", "I", "--grid", "101", "--out", path_str(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(res.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 101 * 4 * 3);
}

#[test]
fn sweep_case_four_pair14_nonlocal() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c4.csv");
    let res = swapcorr(&["sweep", "--case", "IV", "--grid", "11", "--out", path_str(&out)]);
    assert_eq!(res.status.code(), Some(0));
    let recs = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows: Vec<_> = recs.iter().filter(|r| r.pair.code() == "14" && r.lambda > 0.0).collect();
    assert_eq!(rows.len(), 10 * 4);
    assert!(rows.iter().all(|r| r.nonlocality > 0.0));
}

#[test]
fn sweep_csv_round_trips() {
    let res = swapcorr(&["sweep", "--case", "II", "--grid", "11"]);
    assert_eq!(res.status.code(), Some(0));
    let parsed = parse_csv(&String::from_utf8(res.stdout).unwrap()).unwrap();
    let direct = sweep(&SweepConfig::new(Case::II, LambdaGrid::unit(11))).unwrap();
    assert_eq!(parsed.len(), direct.len());
    for (a, b) in parsed.iter().zip(&direct) {
        assert_eq!((a.outcome, a.pair, a.x), (b.outcome, b.pair, b.x));
        for (u, v) in [
            (a.lambda, b.lambda),
            (a.probability, b.probability),
            (a.negativity, b.negativity),
            (a.steering2, b.steering2),
            (a.steering3, b.steering3),
            (a.nonlocality, b.nonlocality),
            (a.m, b.m),
            (a.lambda3, b.lambda3),
        ] {
            assert!((u - v).abs() <= 1e-11 * v.abs().max(1.0), "{u} vs {v}");
        }
    }
}

#[test]
fn failed_sweep_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.csv");
    let res = swapcorr(&["sweep", "--case", "II", "--x", "1.5", "--out", path_str(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn bad_flags_exit_two() {
    for args in [
        &["sweep", "--case", "VII"][..],
        &["sweep", "--case", "I", "--grid", "abc"],
        &["frobnicate"],
        &["sweep", "--case", "I", "--lambda-start", "-0.1"],
    ] {
        let res = swapcorr(args);
        assert_eq!(res.status.code(), Some(2), "{args:?}");
        assert!(!res.stderr.is_empty());
    }
}

#[test]
fn thresholds_case_one_lists_six_values() {
    let res = swapcorr(&["thresholds", "--case", "I"]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8(res.stdout).unwrap();
    for v in ["0.333333333", "0.577350269", "0.707106781", "0.91068360", "0.748609", "0.624519"] {
        assert!(text.contains(v), "{v} missing:\n{text}");
    }
    let coarse = swapcorr(&["thresholds", "--case", "I", "--tol", "1e-3", "--format", "csv"]);
    assert_eq!(coarse.status.code(), Some(0));
    let csv = String::from_utf8(coarse.stdout).unwrap();
    let row = csv.lines().find(|l| l.starts_with("I,,14,negativity")).unwrap();
    let lo: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
    assert!((lo - 1.0 / 3.0).abs() < 1e-3);
}

#[test]
fn thresholds_case_three_never_rows() {
    let res = swapcorr(&["thresholds", "--case", "III", "--format", "csv", "--grid", "21"]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8(res.stdout).unwrap();
    let never: Vec<_> = text.lines().filter(|l| l.contains(",never,")).collect();
    let has = |p: &str, m: &str| never.iter().any(|l| l.contains(&format!(",{p},{m},")));
    assert!(has("14", "nonlocality") && has("12", "nonlocality") && has("34", "nonlocality"));
}

fn write_povm(dir: &Path, name: &str, p: &Povm) -> String {
    let path = dir.join(name);
    std::fs::write(&path, p.to_json_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze_projective_bell_measurement() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_povm(dir.path(), "bell.json", &werner_bell_povm(1.0).unwrap());
    let res = swapcorr(&["analyze", "--povm", &path, "--format", "csv"]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let text = String::from_utf8(res.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12);
    for r in rows {
        let neg: f64 = r[4].parse().unwrap();
        let want = if r[2] == "14" { 1.0 } else { 0.0 };
        assert!((neg - want).abs() < 1e-10, "{r:?}");
    }
}

#[test]
fn analyze_asymmetric_pair14_nonlocal() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_povm(dir.path(), "asym.json", &asymmetric_povm(0.8, 0.5).unwrap());
    let res = swapcorr(&["analyze", "--povm", &path]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8(res.stdout).unwrap();
    let rows: Vec<_> = text.lines().filter(|l| l.trim_start().starts_with("14 ")).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|l| l.trim_end().ends_with("yes       yes       yes")), "{text}");
}

#[test]
fn analyze_incomplete_povm_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let bell = werner_bell_povm(1.0).unwrap();
    let doubled = Povm::new("doubled", bell.effects.iter().map(|e| e.scale(2.0)).collect());
    let path = write_povm(dir.path(), "doubled.json", &doubled);
    let res = swapcorr(&["analyze", "--povm", &path]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8(res.stderr).unwrap();
    assert!(err.contains("do not sum to identity"), "{err}");
}

#[test]
fn analyze_malformed_json_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    let row = "[[1,0],[0,0],[0,0],[0,0]]";
    let short = "[[1,0],[0,0],[0,0]]";
    std::fs::write(&path, format!(r#"{{"label": "short", "effects": [[{row},{row},{short},{row}]]}}"#)).unwrap();
    let res = swapcorr(&["analyze", "--povm", path.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
    let err = String::from_utf8(res.stderr).unwrap();
    assert!(err.contains("effect 0, row 2"), "{err}");
}

#[test]
fn analyze_missing_file_exits_one() {
    let res = swapcorr(&["analyze", "--povm", "/nonexistent/povm.json"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn verify_default_passes_and_fault_fails() {
    let ok = swapcorr(&["verify"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 4);

    assert_eq!(swapcorr(&["verify", "--grid", "11"]).status.code(), Some(0));

    let bad = swapcorr(&["verify", "--grid", "11", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text.contains("! pair 12  negativity"), "{text}");
}
