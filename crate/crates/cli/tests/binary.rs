use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn glars(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glars"))
        .args(args)
        .env("GLARS_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn prostate_csv() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/prostate.csv")
}

fn toy_csv(dir: &Path) -> PathBuf {
    let path = dir.join("toy.csv");
    let mut body = String::from("a,b,c,y\n");
    for i in 0..10 {
        let a = i as f64;
        let b = ((i * 7) % 5) as f64 - 2.0;
        let c = ((i * 3) % 4) as f64 * 0.5;
        body.push_str(&format!("{a},{b},{c},{}\n", 0.8 * a - b + 0.3 * c + (i % 3) as f64 * 0.1));
    }
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn unknown_estimator_is_a_usage_error() {
    let out = glars(&["prostate", "--estimator", "adpLARS-XYZ"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("adpLARS-rd"));
}

#[test]
fn missing_response_column_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = toy_csv(dir.path());
    let out = glars(&["fit", "--input", csv.to_str().unwrap(), "--response", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn fit_toy_writes_a_terminated_path() {
    let dir = tempfile::tempdir().unwrap();
    let csv = toy_csv(dir.path());
    let out_dir = dir.path().join("out");
    let out = glars(&[
        "fit",
        "--input",
        csv.to_str().unwrap(),
        "--response",
        "y",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = std::fs::read_to_string(out_dir.join("fit_path.csv")).unwrap();
    let rows: Vec<&str> = path.lines().skip(1).collect();
    assert!(!rows.is_empty() && rows.len() <= 24);
    assert!(rows.last().unwrap().split(',').nth(1) == Some("terminal"));
    let coefs = std::fs::read_to_string(out_dir.join("fit_coefficients.csv")).unwrap();
    assert_eq!(coefs.lines().count(), 1 + 1 + 3);
}

#[test]
fn fit_prostate_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = glars(&[
        "fit",
        "--input",
        prostate_csv().to_str().unwrap(),
        "--response",
        "lpsa",
        "--estimator",
        "adpLARS-rd",
        "--alpha",
        "0.9",
        "--d",
        "0.7",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("fit.json")).unwrap()).unwrap();
    assert!(v.is_object());
}

#[test]
fn prostate_single_estimator_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = glars(&["prostate", "--estimator", "adpLARS-rd", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(dir.path().join("prostate_medians.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("Algorithm,RMSE"));
    assert!(lines[1].starts_with("adpLARS-rd,"));
}

#[test]
fn diagnostics_reports_every_predictor() {
    let out = glars(&["diagnostics", "--input", prostate_csv().to_str().unwrap(), "--response", "lpsa"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["lcavol", "lweight", "age", "lbph", "svi", "lcp", "gleason", "pgg45"] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn invalid_simulation_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = glars(&["simulate", "--rho", "1.5", "--replicates", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
