use std::path::Path;
use std::process::{Command, Output};

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir")).args(args).output().expect("binary runs")
}

fn error_record(out: &Output) -> serde_json::Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().expect("an error line");
    serde_json::from_str(line).expect("single-line JSON error record")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pressure_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = casimir(&["--out", path(dir.path()), "pressure", "--model", "ideal", "--a", "1000", "--T", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("pressure.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("model,a_nm,T_K,pressure_Pa,ratio_to_ideal"));
    let p: f64 = lines.next().unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((p / -1.3001e-3 - 1.0).abs() < 0.01);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "ok");
}

#[test]
fn standard_relation_on_plasma_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = casimir(&["--out", path(dir.path()), "kk-check", "--model", "plasma", "--relation", "standard"]);
    assert_eq!(out.status.code(), Some(1));
    let rec = error_record(&out);
    assert_eq!(rec["kind"], "validation");
    assert!(rec["message"].as_str().unwrap().starts_with("INADMISSIBLE"));
    // nothing is computed or written before validation
    assert!(!dir.path().join("kk_check.csv").exists());
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"tolerances": {"quad_rel_tol": 1e-10, "quad_tol": 1}}"#).unwrap();
    let out = casimir(&["--config", path(&cfg), "--out", path(dir.path()), "pressure", "--model", "drude"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = error_record(&out)["message"].as_str().unwrap().to_string();
    assert!(msg.contains("/tolerances") && msg.contains("quad_tol"), "{msg}");
}

#[test]
fn missing_data_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.csv");
    let out = casimir(&["--out", path(dir.path()), "fit", "--data", path(&missing)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["kind"], "io");
}

#[test]
fn zero_workers_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = casimir(&["--workers", "0", "--out", path(dir.path()), "pressure", "--model", "drude"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outputs_identical_across_worker_counts() {
    let runs: &[&[&str]] = &[
        &["compare", "--model", "drude", "--model", "plasma", "--a", "500:1500:3", "--T", "300"],
        &["kk-check", "--model", "generalized", "--relation", "generalized"],
        &["nernst"],
    ];
    for args in runs {
        let mut csvs = Vec::new();
        for w in ["1", "4"] {
            let dir = tempfile::tempdir().unwrap();
            let mut full = vec!["--workers", w, "--out", path(dir.path())];
            full.extend_from_slice(args);
            let out = casimir(&full);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
            let mut files: Vec<_> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .collect();
            files.sort();
            assert!(!files.is_empty());
            csvs.push(files.iter().map(|p| std::fs::read(p).unwrap()).collect::<Vec<_>>());
        }
        assert_eq!(csvs[0], csvs[1], "{args:?}");
    }
}
