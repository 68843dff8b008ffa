use std::path::Path;
use std::process::{Command, Output};

fn minkabs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minkabs"))
        .args(args)
        .env_remove("MINKABS_THREADS")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn geometry_suite_passes_and_is_deterministic() {
    let a = minkabs(&["verify-geometry", "--seed", "5"]);
    let b = minkabs(&["verify-geometry", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["suite"], "verify-geometry");
    assert_eq!(r["all_pass"], true);
    assert_eq!(r["config"]["seed"], 5);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() >= 5);
    for c in checks {
        let residual = c["residual"].as_f64().unwrap();
        assert_eq!(c["pass"], residual <= c["tolerance"].as_f64().unwrap());
        assert!(c.get("seconds").is_none());
    }
    let c = minkabs(&["verify-geometry", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn timing_adds_seconds() {
    let out = minkabs(&["verify-geometry", "--timing"]);
    let r = report(&out);
    assert!(r["checks"][0]["seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(minkabs(&["verify-geometry", "--lattice", "7"]).status.code(), Some(2));
    let typo = write_config(dir.path(), r#"{"lattis": 16}"#);
    let out = minkabs(&["verify-covariance", "--config", &typo]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lattis"));
    let missing = dir.path().join("absent.json");
    let out = minkabs(&["demo-causality", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(minkabs(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(minkabs(&["verify-geometry", "--json", "--csv"]).status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_a_configuration_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_minkabs"))
        .args(["verify-geometry"])
        .env("MINKABS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_minkabs"))
        .args(["verify-geometry"])
        .env("MINKABS_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn causality_csv_has_one_row_per_sweep_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"lattice": 16, "delta_t": [0.0, 0.25, 0.5], "rapidities": [0.1], "iterations": 5}"#,
    );
    let csv_path = dir.path().join("sweep.csv");
    let out = minkabs(&["demo-causality", "--config", &cfg, "--csv", "--out", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("delta_t_sec,rapidity,leakage,N"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0][2].abs() <= 1e-10);
    assert!(rows[1..].iter().all(|r| r[2] > 1e-6 && r[3] == 16.0));
    assert_eq!(rows[3][1], 0.1);
}

#[test]
fn failing_checks_exit_with_one() {
    // A region that outgrows the 16-point lattice cannot be evaluated.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"lattice": 16, "delta_t": [3.0], "rapidities": [], "iterations": 2}"#);
    let out = minkabs(&["demo-causality", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["all_pass"], false);
    let first = &r["checks"][0];
    assert_eq!(first["pass"], false);
    assert!(first["residual"].is_null());
    assert!(first["error"].as_str().unwrap().contains("lattice"));
}

#[test]
fn covariance_report_carries_a_convergence_table() {
    let out = minkabs(&["verify-covariance", "--lattice", "16", "--seed", "3"]);
    let r = report(&out);
    let code = out.status.code().unwrap();
    assert_eq!(code == 0, r["all_pass"] == true);
    let table = r["convergence"].as_array().unwrap();
    let sizes: Vec<u64> = table.iter().map(|row| row["N"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [16, 32]);
    let check = |name: &str| {
        r["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap()
            .clone()
    };
    assert_eq!(check("eq1-lattice-symmetries")["pass"], true);
    assert_eq!(check("prop4-own-observer-tau-variance")["residual"], 0.0);
    assert_eq!(check("prop2-fixed-label-witness")["bound"], "at_least");
}
