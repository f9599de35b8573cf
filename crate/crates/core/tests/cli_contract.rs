//! Exit-code contract, report determinism, and output formats of the CLI.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_surflap")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

const SPHERE_CONFIG: &str = r#"{
  "surface": {"catalog": "paper-ellipsoid", "params": {"a": 1.0}},
  "frame": "kehys",
  "sampling": {"grid": [5, 5]}
}"#;

const ELLIPSOID_DECOMP_CONFIG: &str = r#"{
  "surface": {"catalog": "paper-ellipsoid", "params": {"a": 2.0}},
  "frame": "kehys",
  "fields": {
    "v": ["0.4*z1^2 - 0.8*z2", "sin(z1)*cos(z2) + 0.3"],
    "rule": ["(0.4*z1^2 - 0.8*z2)*(1 + s)", "(sin(z1)*cos(z2) + 0.3)*(1 - 2*s)"]
  },
  "extension": "divergence-free",
  "sampling": {"random": 8, "seed": 42}
}"#;

#[test]
fn curvature_on_unit_sphere_exits_zero_with_unit_kappa_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_CONFIG);
    let json_path = dir.path().join("report.json");
    let out = run(&[
        "curvature",
        "--config",
        &cfg,
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    let points = report["points"].as_array().unwrap();
    assert_eq!(points.len(), 25);
    for row in points {
        let kappa = row["values"]["kappa"].as_f64().unwrap();
        assert!((kappa - 1.0).abs() < 1e-9, "kappa row {kappa}");
    }
}

#[test]
fn malformed_expression_in_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{
  "surface": {"catalog": "paper-ellipsoid", "params": {"a": 2.0}},
  "fields": {"v": ["z1 + ", "z2"]},
  "extension": "compatible",
  "sampling": {"grid": [2, 2]}
}"#,
    );
    let out = run(&["verify", "--config", &cfg, "--suite", "lemmas"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error"), "diagnostic: {err}");
}

#[test]
fn unknown_catalog_entry_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "unknown.json",
        r#"{"surface": {"catalog": "moebius"}, "sampling": {"grid": [2, 2]}}"#,
    );
    let out = run(&["curvature", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn impossible_tolerance_override_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_CONFIG);
    let out = run(&[
        "verify",
        "--config",
        &cfg,
        "--suite",
        "structure",
        "--tol-override",
        "structure.orthonormality=1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("FAIL structure.orthonormality"),
        "summary: {stdout}"
    );
}

#[test]
fn identical_config_and_seed_give_byte_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "decomp.json", ELLIPSOID_DECOMP_CONFIG);
    let mut dumps = Vec::new();
    for name in ["r1.json", "r2.json"] {
        let path = dir.path().join(name);
        let out = run(&[
            "verify",
            "--config",
            &cfg,
            "--suite",
            "decomposition",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let text = std::fs::read_to_string(&path).unwrap();
        let stripped: String = text
            .lines()
            .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n");
        dumps.push(stripped);
    }
    assert_eq!(
        dumps[0], dumps[1],
        "reports must be byte-identical modulo timestamp"
    );
}

#[test]
fn mutation_flag_turns_passing_suite_into_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "decomp.json", ELLIPSOID_DECOMP_CONFIG);
    let ok = run(&["verify", "--config", &cfg, "--suite", "decomposition"]);
    assert!(
        ok.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&ok.stderr)
    );
    let broken = run(&[
        "verify",
        "--config",
        &cfg,
        "--suite",
        "decomposition",
        "--debug-flip",
        "nq",
    ]);
    assert_eq!(broken.status.code(), Some(1));
}

#[test]
fn fold_over_during_extend_exits_one_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fold.json",
        r#"{
  "surface": {"catalog": "unit-sphere"},
  "frame": "kehys",
  "fields": {"v": ["sin(z2)", "0"]},
  "extension": "compatible",
  "sampling": {"grid": [2, 2]},
  "domain": {"z1": [-1.0, 1.0], "z2": [0.5, 2.6], "s_max": 2.0}
}"#,
    );
    let out = run(&["extend", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fold-over"), "diagnostic: {err}");
}

#[test]
fn compare_frames_reports_divergent_e_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "compare.json",
        r#"{
  "surface": {"catalog": "paper-ellipsoid", "params": {"a": 2.0}},
  "fields": {"v": ["0.4*z1^2 - 0.8*z2", "sin(z1)*cos(z2) + 0.3"]},
  "extension": "compatible",
  "sampling": {"grid": [3, 3]},
  "domain": {"z1": [-0.5, 0.5], "z2": [0.8, 1.2], "s_max": 0.1}
}"#,
    );
    let json_path = dir.path().join("cmp.json");
    let out = run(&[
        "compare-frames",
        "--config",
        &cfg,
        "--frame",
        "kehys",
        "--frame",
        "tilde",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let spread = report["points"][0]["values"]["e_entry_spread"]
        .as_f64()
        .unwrap();
    assert!(spread > 0.01, "E-entry spread {spread}");
}

#[test]
fn csv_output_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_CONFIG);
    let csv_path = dir.path().join("rows.csv");
    let out = run(&[
        "curvature",
        "--config",
        &cfg,
        "--grid",
        "4x3",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.lines().count(), 1 + 12, "header plus 4x3 rows");
    assert!(text.lines().next().unwrap().starts_with("z1,z2,s,label"));
}

#[test]
fn grid_flag_overrides_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_CONFIG);
    let json_path = dir.path().join("r.json");
    let out = run(&[
        "curvature",
        "--config",
        &cfg,
        "--grid",
        "7x2",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["points"].as_array().unwrap().len(), 14);
}

#[test]
fn random_points_without_seed_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sphere.json", SPHERE_CONFIG);
    let out = run(&["curvature", "--config", &cfg, "--points", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structure_suite_on_flat_plane_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "flat.json",
        r#"{"surface": {"catalog": "flat-plane"}, "frame": "cartesian", "sampling": {"grid": [4, 4]}}"#,
    );
    let out = run(&[
        "verify",
        "--config",
        &cfg,
        "--suite",
        "structure",
        "--tol-override",
        "structure.orthonormality=1e-12",
        "--tol-override",
        "structure.dtheta=1e-12",
        "--tol-override",
        "structure.gauss=1e-12",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn single_frame_comparison_degenerates_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "compare1.json",
        r#"{
  "surface": {"catalog": "paper-ellipsoid", "params": {"a": 2.0}},
  "fields": {"v": ["0.4*z1^2 - 0.8*z2", "sin(z1)*cos(z2) + 0.3"]},
  "extension": "compatible",
  "sampling": {"grid": [2, 2]}
}"#,
    );
    let out = run(&["compare-frames", "--config", &cfg, "--frame", "kehys"]);
    assert!(out.status.success());
}

#[test]
fn cartesian_and_tube_frames_agree_on_flat_plane_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "flatcmp.json",
        r#"{
  "surface": {"catalog": "flat-plane"},
  "fields": {"v": ["z1*z2", "cos(z1)"]},
  "extension": "compatible",
  "sampling": {"grid": [2, 2]},
  "domain": {"z1": [-0.8, 0.8], "z2": [-0.8, 0.8], "s_max": 0.2}
}"#,
    );
    let json_path = dir.path().join("flat.json");
    let out = run(&[
        "compare-frames",
        "--config",
        &cfg,
        "--frame",
        "cartesian",
        "--frame",
        "normal-tube",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    // both frames see E = 0 on the flat plane
    for row in report["points"].as_array().unwrap() {
        for key in ["e11", "e12", "e21", "e22"] {
            let v = row["values"][key].as_f64().unwrap();
            assert!(v.abs() < 1e-10, "{key} = {v}");
        }
    }
}

#[test]
fn inline_surface_with_automatic_frame() {
    // the ellipsoid family written inline instead of through the catalog,
    // with the automatic normal-tube frame
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "inline.json",
        r#"{
  "surface": {
    "psi": ["a*y3*cos(y1)*sin(y2)", "a*y3*sin(y1)*sin(y2)", "y3*cos(y2)"],
    "f": ["z1", "z2", "1"],
    "params": {"a": 2.0}
  },
  "frame": "normal-tube",
  "sampling": {"grid": [3, 3]},
  "domain": {"z1": [-0.8, 0.8], "z2": [0.6, 2.5], "s_max": 0.08}
}"#,
    );
    let json_path = dir.path().join("inline.json.out");
    let out = run(&[
        "verify",
        "--config",
        &cfg,
        "--suite",
        "structure",
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["surface"], "inline");
    assert!(report["pass"].as_bool().unwrap());
}

#[test]
fn inline_explicit_metric_surface() {
    let dir = tempfile::tempdir().unwrap();
    let body_without_frame = r#"{
  "surface": {
    "metric": ["1", "0", "0", "0", "1 + 0.2*y1^2", "0", "0", "0", "1"],
    "f": ["z1", "z2", "0"]
  },
  "sampling": {"grid": [2, 2]},
  "domain": {"z1": [-0.5, 0.5], "z2": [-0.5, 0.5], "s_max": 0.05}
}"#;
    // explicit metrics cannot use the (default) normal-tube frame
    let cfg = write_config(dir.path(), "metric.json", body_without_frame);
    let out = run(&["curvature", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("flat-pullback"), "diagnostic: {err}");

    // with an inline closed-form frame the same surface works
    let cfg2 = write_config(
        dir.path(),
        "metric_with_frame.json",
        r#"{
  "surface": {
    "metric": ["1", "0", "0", "0", "1 + 0.2*y1^2", "0", "0", "0", "1"],
    "f": ["z1", "z2", "0"]
  },
  "frame_closed_form": [
    ["1", "0", "0"],
    ["0", "1/sqrt(1 + 0.2*y1^2)", "0"],
    ["0", "0", "1"]
  ],
  "sampling": {"grid": [2, 2]},
  "domain": {"z1": [-0.5, 0.5], "z2": [-0.5, 0.5], "s_max": 0.05}
}"#,
    );
    let out2 = run(&["curvature", "--config", &cfg2]);
    assert!(
        out2.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out2.stderr)
    );
}
