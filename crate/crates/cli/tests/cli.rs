use std::process::{Command, Output};

use simplex_lattice_cli::commands;
use simplex_lattice_cli::{Format, GridKind, SweepConfig};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplex-lattice")).args(args).output().expect("binary runs")
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        &["count", "--preset", "nope"][..],
        &["count", "--preset", "golden", "--delta", "0.7"],
        &["count", "--preset", "golden", "--t-min", "0"],
        &["error-sweep", "--weights", "2,3"],
        &["count"],
        &["error-sweep", "--preset", "golden", "--grid", "jump-aligned", "--t-min", "1"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn degenerate_counts_warn_but_succeed() {
    let out = run(&["count", "--weights", "2,3", "--t-max", "50", "--points", "3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate incline"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    std::fs::write(&path, r#"{"preset": "sqrt2", "t_min": 5, "t_max": 50, "points": 4}"#).unwrap();
    let out = run(&["count", "--config", path.to_str().unwrap(), "--points", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // header plus open and closed rows per point
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().starts_with("5.0000000000000000e0,5,open"));

    std::fs::write(&path, r#"{"preset": "sqrt2", "bogus": 1}"#).unwrap();
    assert_eq!(run(&["count", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["dioph", "--preset", "golden", "--scan", "1000", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_eq!(doc["rows"][0]["partial_quotients"], "1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1");
}

#[test]
fn counts_unchanged_when_precision_doubles() {
    let base = SweepConfig { preset: Some("sqrt2-sqrt3".into()), t_min: 5.0, t_max: 200.0, points: 6, ..SweepConfig::default() };
    let a = commands::count(&base).unwrap();
    let b = commands::count(&SweepConfig { precision_bits: 256, ..base.clone() }).unwrap();
    let i = a.column("exact_count").unwrap();
    let counts = |t: &simplex_lattice_cli::Table| t.rows.iter().map(|r| r[i].render()).collect::<Vec<_>>();
    assert_eq!(counts(&a), counts(&b));
}

#[test]
fn counts_are_monotone_and_closed_dominates_open() {
    let cfg = SweepConfig { preset: Some("sqrt2".into()), t_min: 10.0, t_max: 1000.0, points: 15, ..SweepConfig::default() };
    let table = commands::count(&cfg).unwrap();
    let counts = table.floats("exact_count");
    let (open, closed): (Vec<f64>, Vec<f64>) = (counts.iter().step_by(2).copied().collect(), counts.iter().skip(1).step_by(2).copied().collect());
    assert!(open.windows(2).all(|p| p[0] <= p[1]));
    assert!(open.iter().zip(&closed).all(|(o, c)| o < c));
    let t = table.floats("t");
    let rrr = table.floats("rrr");
    // errors stay well below the boundary-shell size
    assert!(rrr.iter().zip(&t).all(|(r, t)| *r < t.ln().powi(2) + 5.0));
}

#[test]
fn sweep_serial_equals_parallel_in_process() {
    let cfg = SweepConfig {
        preset: Some("golden".into()),
        grid: GridKind::JumpAligned,
        t_min: 50.0,
        t_max: 5000.0,
        points: 24,
        seed: 11,
        ..SweepConfig::default()
    };
    let serial = commands::error_sweep(&cfg).unwrap();
    let parallel = commands::error_sweep(&SweepConfig { jobs: 3, ..cfg.clone() }).unwrap();
    for format in [Format::Csv, Format::Json] {
        assert_eq!(serial.to_bytes(format).unwrap(), parallel.to_bytes(format).unwrap());
    }
    assert_eq!(serial.fits.len(), 6);
}

#[test]
fn lattice_sum_bound_covers_measured_error_after_calibration() {
    let cfg = SweepConfig { preset: Some("golden".into()), t_min: 10.0, t_max: 2000.0, points: 8, ..SweepConfig::default() };
    let table = commands::lattice_sum(&cfg).unwrap();
    let i = table.column("covered").unwrap();
    assert!(table.rows.iter().all(|r| r[i].render() == "true"));
    let s2 = table.floats("s2_total");
    assert!(s2.windows(2).all(|p| p[0] <= p[1]));
}
