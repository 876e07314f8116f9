use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
[region]
boundary = [
  { lon = 110.0, lat = 30.0 },
  { lon = 114.0, lat = 30.0 },
  { lon = 114.0, lat = 34.0 },
  { lon = 110.0, lat = 34.0 },
]

[grid]
cell_radius_deg = 1.0

[annealing]
t0 = 1.0
t_min = 0.5
alpha = 0.5
coverage_target = 0.3
n_periods = 1
n_epochs = 4
seed = 9
"#;

fn walkeropt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walkeropt"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn scenario(dir: &Path, extra: &str) -> String {
    let path = dir.join("scenario.toml");
    fs::write(&path, format!("output_dir = \"out\"\n{SMALL}{extra}")).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn version_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let out = walkeropt(&["--version"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("walkeropt "));
    let out = walkeropt(&["--help"], dir.path());
    let help = String::from_utf8_lossy(&out.stdout);
    for cmd in [
        "propagate",
        "footprint",
        "coverage",
        "optimize",
        "reproduce",
    ] {
        assert!(help.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn propagate_writes_ground_tracks() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario(dir.path(), "");
    let out = walkeropt(&["propagate", &path], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("out/ground_tracks.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("sat_id,t_s,lon_deg,lat_deg"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    let ids: std::collections::BTreeSet<i64> = rows.iter().map(|r| r[0] as i64).collect();
    assert_eq!(ids.len(), 6);
    assert!(rows
        .iter()
        .all(|r| r[2] > -180.0 && r[2] <= 180.0 && r[3].abs() <= 40.0 + 1e-7));
}

#[test]
fn footprint_and_coverage_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario(dir.path(), "");
    let out = walkeropt(&["footprint", &path, "--out-dir", "fp"], dir.path());
    assert!(out.status.success());
    let geo = fs::read_to_string(dir.path().join("fp/footprints.geojson")).unwrap();
    assert_eq!(geo.matches("\"type\":\"Feature\"").count(), 6 * 4);
    assert!(dir.path().join("fp/grid.geojson").exists());

    let out = walkeropt(&["coverage", &path, "--epochs", "3"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("average coverage"));
    let csv = fs::read_to_string(dir.path().join("out/coverage_series.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t_s,covered,total,ratio"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn optimize_success_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario(dir.path(), "");
    let out = walkeropt(&["optimize", &path, "-v"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "history.csv",
        "coverage_series.csv",
        "best_constellation.csv",
        "ground_tracks.csv",
        "footprints.geojson",
        "grid.geojson",
    ] {
        assert!(dir.path().join("out").join(name).exists(), "{name}");
    }
    // log lines go to stderr, results to stdout
    assert!(String::from_utf8_lossy(&out.stderr).contains("INFO"));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("INFO"));
}

#[test]
fn infeasible_search_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario(dir.path(), "");
    let text = fs::read_to_string(&path).unwrap().replace(
        "coverage_target = 0.3",
        "coverage_target = 1.0\nmax_total_sats = 8",
    );
    fs::write(&path, text).unwrap();
    let out = walkeropt(&["optimize", &path], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let history = fs::read_to_string(dir.path().join("out/history.csv")).unwrap();
    assert!(history.lines().count() > 1);
    assert!(!dir.path().join("out/best_constellation.csv").exists());
}

#[test]
fn configuration_errors_exit_two_with_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario(dir.path(), "\n[orbit]\ne = 1.5\n");
    let out = walkeropt(&["coverage", &path], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orbit.e"));

    let path = scenario(dir.path(), "");
    let out = walkeropt(&["coverage", &path, "--cell-radius-deg", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = walkeropt(&["coverage", &path, "--threads", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = walkeropt(&["coverage", "missing.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_initial_constellation() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario(dir.path(), "");
    let text = format!("initial = []\n{}", fs::read_to_string(&path).unwrap());
    fs::write(&path, text).unwrap();
    let out = walkeropt(&["optimize", &path], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = walkeropt(&["coverage", &path], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("out/coverage_series.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv
        .lines()
        .skip(1)
        .all(|l| l.contains(",0,") && l.ends_with(",0.000000000000")));
}
