use std::process::Command;

use mpb_core::harness::*;

fn mpb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mpb"))
}

fn small(name: &str) -> ExperimentConfig {
    let mut cfg = preset(name).unwrap();
    cfg.symbols = 2000;
    cfg.snr_grid_db = vec![-10.0, 10.0, 30.0];
    cfg
}

#[test]
fn presets_round_trip_through_json() {
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap();
        cfg.validate().unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back = parse_config(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
    assert!(preset("nope").is_err());
}

#[test]
fn sweep_csv_layout() {
    let sweeps = run_sweep(&small("fig4b-pn2")).unwrap();
    assert_eq!(sweeps.len(), 2);
    for s in &sweeps {
        let csv = sweep_csv(&s.rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(SWEEP_HEADER));
        assert_eq!(lines.count(), 3);
        assert!(s.errors.is_empty());
    }
}

#[test]
fn sweep_is_identical_across_worker_counts() {
    let cfg = small("fig4c-tones5");
    let render = |n| {
        with_workers(Some(n), || run_sweep(&cfg)).unwrap().unwrap().iter().map(|s| sweep_csv(&s.rows)).collect::<Vec<_>>()
    };
    let one = render(1);
    assert_eq!(one, render(4));
    assert_eq!(one, render(8));
}

#[test]
fn eigen_curves_cross_at_predicted_threshold() {
    let mut cfg = preset("fig4b-pn2").unwrap();
    cfg.snr_grid_db = (0..=30).map(|i| 20.0 + i as f64).collect();
    let curves = run_eigencurves(&cfg).unwrap();
    let maximin = curves.iter().find(|c| c.label == "maximin").unwrap();
    let cross = maximin.crossing_snr_db.unwrap();
    assert!((cross - maximin.snr_t0_db).abs() < 0.05, "{cross} vs {}", maximin.snr_t0_db);
    assert!(eigen_csv(maximin).starts_with(EIGEN_HEADER));
}

#[test]
fn cli_lists_presets() {
    let out = mpb().arg("presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), PRESET_NAMES.to_vec());
}

#[test]
fn cli_rejects_bad_usage() {
    assert_eq!(mpb().args(["sweep", "--bogus"]).output().unwrap().status.code(), Some(1));
    assert_eq!(mpb().arg("sweep").output().unwrap().status.code(), Some(1));
    assert_eq!(mpb().args(["sweep", "--preset", "nope"]).output().unwrap().status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "symbols": 5}"#).unwrap();
    let out = mpb().args(["sweep", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cli_sweep_and_analyze_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = mpb()
        .args(["sweep", "--preset", "fig4b-pn2", "--symbols", "1000", "--seed", "7", "--snr-db", "-10,20", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for label in ["maximin", "papc"] {
        let csv = std::fs::read_to_string(dir.path().join(format!("sweep_{label}.csv"))).unwrap();
        assert!(csv.starts_with(SWEEP_HEADER));
        assert_eq!(csv.lines().count(), 3);
    }
    let out = mpb().args(["analyze", "--preset", "fig4b-pn2", "--out"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("analysis.json")).unwrap()).unwrap();
    let schemes = v["schemes"].as_array().unwrap();
    assert_eq!(schemes.len(), 2);
    let papc = schemes.iter().find(|s| s["label"] == "papc").unwrap();
    assert_eq!(papc["snr_t0_db"], "inf");
}
