use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    dir: TempDir,
    output: Output,
}

impl Run {
    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn report(&self, name: &str) -> Value {
        let text = std::fs::read_to_string(self.out().join(name)).unwrap();
        serde_json::from_str(&text).unwrap()
    }

    fn stdout(&self) -> String {
        String::from_utf8_lossy(&self.output.stdout).into_owned()
    }

    fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.output.stderr).into_owned()
    }
}

fn photonwf(config: &str, args: &[&str]) -> Run {
    let dir = TempDir::new().unwrap();
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, config).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_photonwf"))
        .arg("--config")
        .arg(&config_path)
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(args)
        .output()
        .unwrap();
    Run { dir, output }
}

fn success(config: &str, args: &[&str]) -> Run {
    let run = photonwf(config, args);
    assert!(
        run.output.status.success(),
        "stdout:\n{}\nstderr:\n{}",
        run.stdout(),
        run.stderr()
    );
    run
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn read_csv(path: &Path) -> Vec<Vec<f64>> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().filter_map(|s| s.parse().ok()).collect())
        .collect()
}

#[test]
fn evolve_conserves_energy_of_single_wave() {
    let run = success(
        r#"{"state": {"preset": "single"}, "evolve": {"times": [0, 0.7, 3.1]}}"#,
        &["evolve"],
    );
    let report = run.report("evolve_report.json");
    assert!(f(&report["energy_drift"]) < 1e-12);
    assert!(f(&report["photon_number_drift"]) < 1e-12);
    for s in report["snapshots"].as_array().unwrap() {
        assert!(f(&s["transversality_residual"]) < 1e-12);
        assert!(run.out().join(s["file"].as_str().unwrap()).exists());
    }
}

#[test]
fn zero_state_has_no_photons() {
    let run = success(r#"{"state": {"preset": "zero"}}"#, &["evolve"]);
    let report = run.report("evolve_report.json");
    for s in report["snapshots"].as_array().unwrap() {
        assert_eq!(f(&s["photon_number"]), 0.0);
        assert_eq!(f(&s["energy"]), 0.0);
    }
}

#[test]
fn normalized_pair_holds_one_photon() {
    let run = success(
        r#"{"state": {"preset": "pair"}, "evolve": {"normalize": true, "write_flow": true}}"#,
        &["evolve"],
    );
    let report = run.report("evolve_report.json");
    for s in report["snapshots"].as_array().unwrap() {
        assert!((f(&s["photon_number"]) - 1.0).abs() < 1e-12);
    }
    assert!(run.out().join("flow_002.csv").exists());
}

#[test]
fn evolve_reads_back_its_own_snapshot() {
    let first = success(
        r#"{"state": {"preset": "pair"}, "evolve": {"times": [0, 2]}}"#,
        &["evolve"],
    );
    let snapshot = first.out().join("snapshot_001.phwf");
    let config = format!(
        r#"{{"state": {{"field_file": {:?}}}, "evolve": {{"times": [2, 5]}}}}"#,
        snapshot
    );
    let second = success(&config, &["evolve"]);
    let a = first.report("evolve_report.json");
    let b = second.report("evolve_report.json");
    let e0 = f(&a["snapshots"][0]["energy"]);
    assert!((f(&b["snapshots"][1]["energy"]) - e0).abs() < 1e-12 * e0);
}

fn verdicts(report: &Value, recipe: &str) -> Vec<String> {
    report["scenarios"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s[recipe]["verdict"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn boost_audit_separates_consistent_and_violated_cases() {
    let run = success("{}", &["boost-audit"]);
    let report = run.report("audit_report.json");
    let ok = "four_vector_consistent".to_string();
    let bad = "violated".to_string();
    assert_eq!(
        verdicts(&report, "phi_based"),
        [ok.clone(), ok.clone(), ok, bad.clone()]
    );
    assert_eq!(verdicts(&report, "weber_based")[0], bad);
    assert!(run.stdout().contains("FAIL"));

    // The crossed profile swings between the analytic extremes of the
    // closed form at u = c/2, k_r = 1, k_l = 2, I = 1.
    let rows = read_csv(&run.out().join("interference.csv"));
    assert_eq!(rows.len(), 256);
    let rho: Vec<f64> = rows.iter().map(|r| r[5]).collect();
    let hi = rho.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = rho.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!((hi - 2.1403).abs() < 1e-3, "{hi}");
    assert!((lo - 1.3238).abs() < 1e-3, "{lo}");
    for r in &rows {
        assert!((r[5] - r[7]).abs() < 1e-12 * r[7]);
    }
}

#[test]
fn boost_audit_without_motion_passes_everything() {
    let run = success(r#"{"audit": {"u": 0.0}}"#, &["boost-audit"]);
    let report = run.report("audit_report.json");
    for recipe in ["phi_based", "weber_based"] {
        assert!(verdicts(&report, recipe)
            .iter()
            .all(|v| v == "four_vector_consistent"));
    }
}

#[test]
fn tolerance_flag_overrides_config() {
    let run = success("{}", &["boost-audit", "--tolerance", "1.0"]);
    let report = run.report("audit_report.json");
    assert_eq!(f(&report["tolerance"]), 1.0);
    assert!(verdicts(&report, "phi_based")
        .iter()
        .all(|v| v == "four_vector_consistent"));
}

fn max_speed(rows: &[Vec<f64>]) -> f64 {
    rows.iter()
        .map(|r| (r[5] * r[5] + r[6] * r[6] + r[7] * r[7]).sqrt())
        .fold(0.0, f64::max)
}

#[test]
fn single_wave_guides_at_light_speed() {
    let run = success(
        r#"{"state": {"preset": "single"}, "trajectories": {"count": 6}}"#,
        &["trajectories"],
    );
    let rows = read_csv(&run.out().join("trajectories.csv"));
    for r in &rows {
        assert!((r[5].abs() + r[6].abs()) < 1e-12);
        assert!((r[7] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn pair_guides_at_a_third_of_light_speed() {
    let run = success(
        r#"{"trajectories": {"count": 6, "t1": 0.5}}"#,
        &["trajectories"],
    );
    let summary = run.report("trajectories_summary.json");
    assert!((f(&summary["max_speed_over_c"]) - 1.0 / 3.0).abs() < 1e-12);
    let rows = read_csv(&run.out().join("trajectories.csv"));
    assert!((max_speed(&rows) - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn trajectories_are_deterministic_per_seed() {
    let config = r#"{"trajectories": {"count": 5, "t1": 0.3, "guidance": "weber_based"}}"#;
    let read = |seed: &str| {
        let run = success(config, &["trajectories", "--seed", seed]);
        std::fs::read_to_string(run.out().join("trajectories.csv")).unwrap()
    };
    assert_eq!(read("7"), read("7"));
    assert_ne!(read("7"), read("8"));
}

#[test]
fn boosted_frame_reports_frame_checks() {
    let run = success(
        r#"{"boost": {"direction": [1, 0, 0], "u": 0.5},
            "trajectories": {"frame": "boosted", "count": 4, "t1": 0.2}}"#,
        &["trajectories"],
    );
    let summary = run.report("trajectories_summary.json");
    assert!(f(&summary["max_speed_over_c"]) <= 1.0 + 1e-12);
    assert!(f(&summary["frame_checks"]["max_mismatch"]) > 1e-3);
}

#[test]
fn boosted_frame_needs_a_boost() {
    let run = photonwf(
        r#"{"trajectories": {"frame": "boosted"}}"#,
        &["trajectories"],
    );
    assert!(!run.output.status.success());
    assert!(run.stderr().contains("boost"), "{}", run.stderr());
}

#[test]
fn doubleslit_shows_fringes_at_the_expected_spacing() {
    let run = success(
        r#"{"doubleslit": {"geometry": {"n": 32, "box_length": 25.132741228718345, "carrier_modes": 8, "tilt_modes": 4},
                           "times": [0, 2]}}"#,
        &["doubleslit"],
    );
    let report = run.report("doubleslit_report.json");
    let expected = f(&report["expected_spacing"]);
    for frame in report["frames"].as_array().unwrap() {
        let spacing = f(&frame["fringes"]["spacing"]);
        assert!((spacing - expected).abs() < 1e-9 * expected);
        assert!(f(&frame["fringes"]["visibility"]) > 0.3);
        let rows = read_csv(&run.out().join(frame["file"].as_str().unwrap()));
        assert_eq!(rows.len(), 32 * 32);
        assert!(rows.iter().all(|r| r[2] >= 0.0));
    }
}

#[test]
fn unknown_config_key_is_reported_with_location() {
    let run = photonwf("{\n  \"grid\": {\"n\": 8, \"size\": 3}\n}", &["info"]);
    assert!(!run.output.status.success());
    let err = run.stderr();
    assert!(err.contains("size") && err.contains("line 2"), "{err}");
}

#[test]
fn info_prints_grid_quantities() {
    let run = success(r#"{"grid": {"n": 8, "L": 4.0}}"#, &["info"]);
    let info: Value = serde_json::from_str(&run.stdout()).unwrap();
    assert_eq!(f(&info["grid"]["dx"]), 0.5);
    assert_eq!(
        f(&info["grid"]["k_max"]),
        3.0 * 2.0 * std::f64::consts::PI / 4.0
    );
}
