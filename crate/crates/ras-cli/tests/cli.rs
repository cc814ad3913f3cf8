//! End-to-end tests of the `ras` binary: exit codes, report files, and the
//! documented command lines.

use std::process::{Command, Output};

fn ras(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ras"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn construct_translation_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let csv = dir.path().join("samples.csv");
    let out = ras(&[
        "construct",
        "--family",
        "translation",
        "--profile",
        "paperA",
        "--n",
        "3",
        "--alphas",
        "1,0,0",
        "--signature",
        "+++",
        "--out",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["family"], "translation");
    assert_eq!(report["n"], 3);
    assert_eq!(report["signature"], "+++");
    assert_eq!(report["eps_i0"], 1.0);
    assert_eq!(report["skipped_points"], 0);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c["pass"], true, "check {} failed", c["name"]);
        assert!(c["sup"].as_f64().unwrap() <= c["tol"].as_f64().unwrap());
    }

    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("invariant,phi,dphi,ddphi,f,df,rho,res1,res2,res3"));
    assert_eq!(lines.count(), 256);
}

#[test]
fn radial_profile_in_xi_is_a_domain_error() {
    let out = ras(&["construct", "--family", "radial", "--profile", "xi"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("r, not xi"));
}

#[test]
fn construct_warped_passes() {
    let out = ras(&[
        "construct",
        "--family",
        "warped",
        "--profile",
        "paperB",
        "--n",
        "3",
        "--m",
        "2",
        "--box",
        "-0.8,0.8",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: pass"));
}

#[test]
fn verify_gaussian_fixture_passes_and_detects_wrong_rho() {
    let fixture = &[
        "verify",
        "--family",
        "radial",
        "--profile",
        "1",
        "--f",
        "r/2",
        "--rho",
    ];
    let good = ras(&[fixture.as_slice(), &["1"]].concat());
    assert_eq!(code(&good), 0, "stderr: {}", String::from_utf8_lossy(&good.stderr));

    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let bad = ras(&[fixture.as_slice(), &["2", "--out", json.to_str().unwrap()]].concat());
    assert_eq!(code(&bad), 1);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(c["pass"], false);
        assert_eq!(c["sup"].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn malformed_expression_is_a_parse_error() {
    let out = ras(&[
        "verify",
        "--family",
        "radial",
        "--profile",
        "1",
        "--f",
        "1+(",
        "--rho",
        "1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn gallery_passes_by_default() {
    let out = ras(&["gallery"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    for label in ["A ", "A (n=4)", "B", "C"] {
        assert!(text.contains(label), "missing case {label}");
    }
    assert_eq!(text.matches(" pass").count(), 4);
}

#[test]
fn gallery_lorentzian_variant_passes() {
    let out = ras(&["gallery", "--signature", "-++", "--alphas", "0,1,0"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("A (variant)"));
}

#[test]
fn gallery_below_the_quadrature_floor_fails() {
    let out = ras(&["gallery", "--tol", "1e-14"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("first failing case"));
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = ras(&[
            "construct",
            "--family",
            "radial",
            "--profile",
            "paperC",
            "--window",
            "0.1,4",
            "--box",
            "-0.85,0.85",
            "--per-axis",
            "5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn null_direction_reports_vanishing_rho() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = ras(&[
        "construct",
        "--family",
        "translation",
        "--profile",
        "paperA",
        "--signature",
        "-+++",
        "--alphas",
        "1,1,0,0",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["eps_i0"], 0.0);
}
