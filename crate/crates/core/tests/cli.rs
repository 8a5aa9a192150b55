use std::path::Path;
use std::process::Command;

use serde_json::Value;

const INTERVAL_LINEAR: &str = r#"{
  "n": 1,
  "objective": {"n": 1, "terms": [{"alpha": [1], "c": 1.0}]},
  "constraints": [{"n": 1, "terms": [{"alpha": [0], "c": 1.0}, {"alpha": [2], "c": -1.0}]}]
}"#;

const BINARY_SQUARE: &str = r#"{
  "n": 2,
  "objective": {"n": 2, "terms": [
    {"alpha": [1, 0], "c": -1.0}, {"alpha": [0, 1], "c": -1.0}, {"alpha": [1, 1], "c": 1.0}]},
  "equalities": [
    {"n": 2, "terms": [{"alpha": [1, 0], "c": 1.0}, {"alpha": [2, 0], "c": -1.0}]},
    {"n": 2, "terms": [{"alpha": [0, 1], "c": 1.0}, {"alpha": [0, 2], "c": -1.0}]}],
  "ball_radius": 1.5
}"#;

fn momlab(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_momlab")).args(args).output().unwrap();
    (
        out.status.success(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_reports_bounds_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let prob = write(dir.path(), "p.json", INTERVAL_LINEAR);
    let sdpa = dir.path().join("p.dat-s");
    let (ok, out, err) = momlab(&["solve", "--problem", &prob, "--level", "2", "--sos", "--export-sdpa", sdpa.to_str().unwrap()]);
    assert!(ok, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["m_d_star"].as_f64().unwrap() + 1.0).abs() < 1e-6);
    assert_eq!(v["status"], "Optimal");
    assert!(v["certificate_residual"].as_f64().unwrap() < 1e-6);
    assert!(v["certificate"]["terms"].is_array());
    assert!(std::fs::read_to_string(sdpa).unwrap().contains("= mDIM"));
}

#[test]
fn extract_finds_three_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let prob = write(dir.path(), "p.json", BINARY_SQUARE);
    let (ok, out, err) = momlab(&["extract", "--problem", &prob, "--level", "3"]);
    assert!(ok, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["flatness"]["is_flat"], true);
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 3);
    for f in v["atom_values"].as_array().unwrap() {
        assert!((f.as_f64().unwrap() + 1.0).abs() < 1e-5);
    }
    assert!(v["atom_in_k"].as_array().unwrap().iter().all(|b| b == true));

    let (ok, out, _) = momlab(&["extract", "--problem", &prob, "--level", "2"]);
    assert!(ok);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["candidate_in_k"], false);
}

#[test]
fn upper_levels() {
    let dir = tempfile::tempdir().unwrap();
    let prob = write(dir.path(), "p.json", INTERVAL_LINEAR);
    let (ok, out, err) = momlab(&["upper", "--problem", &prob, "--measure", "box", "--levels", "0:2:4"]);
    assert!(ok, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let u: Vec<f64> = v.as_array().unwrap().iter().map(|r| r["u_d_star"].as_f64().unwrap()).collect();
    assert_eq!(u.len(), 3);
    assert!((u[1] + 1.0 / 3f64.sqrt()).abs() < 1e-8);
    assert!(u.windows(2).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn support_csv() {
    let dir = tempfile::tempdir().unwrap();
    // Uniform measure on {-0.5, 0.5}.
    let moments = r#"{"n": 1, "moments": [
        {"alpha": [0], "y": 1.0}, {"alpha": [1], "y": 0.0}, {"alpha": [2], "y": 0.25},
        {"alpha": [3], "y": 0.0}, {"alpha": [4], "y": 0.0625}]}"#;
    let m = write(dir.path(), "m.json", moments);
    let (ok, out, err) = momlab(&["support", "--moments", &m, "--method", "cd", "--box", "-1:1", "--res", "5", "--degree", "1", "--threshold", "2.5"]);
    assert!(ok, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x1,value,included");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "-1,5,0");
    assert_eq!(lines[2], "-0.5,2,1");
    assert_eq!(lines[3], "0,1,1");

    let (ok, out, err) = momlab(&["support", "--moments", &m, "--method", "power", "--res", "5", "--degree", "2"]);
    assert!(ok, "{err}");
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn bench_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus.json");
    let out_dir = dir.path().join("report");
    let (ok, out, err) = momlab(&["bench", "--corpus", corpus.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(ok, "{err}");
    assert!(out.contains("shifted_paraboloid: ok"), "{out}");
    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.starts_with("problem,d,m_d,f_d,u_d,est_err,mom_dist,status"));
    assert!(out_dir.join("summary.md").exists());
}

#[test]
fn bad_input_fails_cleanly() {
    let (ok, _, err) = momlab(&["solve", "--problem", "/nonexistent.json", "--level", "2"]);
    assert!(!ok);
    assert!(err.starts_with("error:"), "{err}");
}
