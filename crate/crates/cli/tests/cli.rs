//! End-to-end tests of the command-line interface: exit codes, file
//! outputs, and the scene override flags.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dpw-forge"))
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("dpw_forge_cli_{}_{name}", std::process::id()));
    p
}

#[test]
fn generate_cylinder_writes_obj_and_report() {
    let obj = tmp("cyl.obj");
    let report = tmp("cyl.json");
    let scene = tmp("cyl_scene.json");
    std::fs::write(
        &scene,
        r#"{
        "surface": {"kind": "dpw", "family": "cylinder"},
        "ambient": {"tag": "r3", "h": 0.5},
        "domain": {"kind": "rectangle", "u": [-0.5, 0.5], "v": [-0.5, 0.5], "nu": 7, "nv": 7},
        "numerics": {"loop_order": 12}
    }"#,
    )
    .unwrap();
    let out = bin()
        .args(["generate", "--scene"])
        .arg(&scene)
        .arg("--obj")
        .arg(&obj)
        .arg("--report")
        .arg(&report)
        .arg("--threads")
        .arg("2")
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let obj_text = std::fs::read_to_string(&obj).unwrap();
    assert!(obj_text.starts_with("# dpw-forge\n# lambda_order 12\n# ambient r3\n"));
    assert_eq!(obj_text.lines().filter(|l| l.starts_with("v ")).count(), 49);
    assert_eq!(obj_text.lines().filter(|l| l.starts_with("f ")).count(), 72);

    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(rep["tool_version"].is_string());
    assert!(rep["scene"]["surface"]["family"] == "cylinder");
    let h = rep["geometry"]["H_mean"].as_f64().unwrap();
    assert!((h - 0.5).abs() < 1e-3, "H_mean {h}");
    assert!(rep["geometry"]["conformal_defect_max"].as_f64().unwrap() < 1e-4);

    // determinism: rerun and compare bytes
    let obj2 = tmp("cyl2.obj");
    let out = bin()
        .args(["generate", "--scene"])
        .arg(&scene)
        .arg("--obj")
        .arg(&obj2)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read(&obj).unwrap(), std::fs::read(&obj2).unwrap());
    for p in [obj, obj2, report, scene] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn invalid_gammas_exit_code_2() {
    let out = bin()
        .args([
            "generate",
            "--surface",
            "cylinder",
            "--ambient",
            "s3",
            "--gamma1",
            "0.0",
            "--gamma2",
            "3.141592653589793",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("gamma"), "stderr: {err}");
}

#[test]
fn period_reports_closed_and_open() {
    let out = bin()
        .args([
            "period", "--surface", "delaunay", "--ambient", "h3", "--s", "0.2", "--t", "0.2",
            "--q", "0.5", "--close",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("CLOSED"), "{text}");

    let out = bin()
        .args([
            "period", "--surface", "delaunay", "--ambient", "r3", "--s", "0.3", "--t", "0.1",
            "--r", "0.35",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("OPEN"), "{text}");
}

#[test]
fn weight_prints_cylinder_value() {
    let out = bin()
        .args([
            "weight", "--surface", "delaunay", "--ambient", "r3", "--s", "0.25", "--t", "0.25",
            "--close",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let w = rep["weight"].as_f64().unwrap();
    assert!((w - std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(rep["classification"], "cylinder");
}

#[test]
fn selftest_passes() {
    let out = bin().args(["selftest", "--cases", "5"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(rep["passed"], true);
}

#[test]
fn generate_delaunay_close_has_small_seam() {
    let out = bin()
        .args([
            "generate", "--surface", "delaunay", "--ambient", "h3", "--s", "0.2", "--t", "0.2",
            "--q", "0.5", "--close", "--nu", "3", "--nv", "17",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let gap = rep["seam_gap"].as_f64().unwrap();
    assert!(gap < 1e-6, "seam gap {gap}");
    assert!(rep["period"]["monodromy_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_weierstrass_catalog_surface() {
    let out = bin()
        .args([
            "verify",
            "--surface",
            "enneper",
            "--representation",
            "weierstrass",
            "--nu",
            "5",
            "--nv",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rep: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let h = rep["geometry"]["H_mean"].as_f64().unwrap();
    assert!(h.abs() < 1e-4, "H_mean {h}");
}
