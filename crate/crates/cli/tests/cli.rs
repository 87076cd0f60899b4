use std::fs;
use std::path::Path;
use std::process::Command;

use cstj_cli::{load_config, Overrides};
use cstj_core::sim::Mode;

const SMALL: &str = "scenario.steps = 2\nscenario.trials = 1\nscenario.agents = 4\nfilter.particles = 200\n";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cstj-sim"));
    c.env_remove("CSTJ_SIM_SEED");
    c
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn small_run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, SMALL).unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["config.toml", "steps.csv", "summary.csv", "manifest.toml"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let (header, rows) = read_csv(&out.join("steps.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(header.len(), 11 + 4 * 7);
    assert!(rows.iter().all(|r| r.len() == header.len()));

    let manifest: toml::Table = toml::from_str(&fs::read_to_string(out.join("manifest.toml")).unwrap()).unwrap();
    assert_eq!(manifest["version"].as_str(), Some(env!("CARGO_PKG_VERSION")));
    assert_eq!(manifest["seed"].as_integer(), Some(0));
    assert!(manifest["duration_s"].as_float().unwrap() >= 0.0);
}

#[test]
fn config_echo_reparses_to_the_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        format!("{SMALL}antenna.opening_angle_deg = 60\nscenario.mode = \"cstj\"\n"),
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--mode", "ct", "--seed", "42", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let resolved = load_config(
        &cfg,
        &Overrides {
            mode: Some(Mode::Ct),
            seed: Some(42),
            ..Default::default()
        },
    )
    .unwrap();
    let echoed = load_config(&out.join("config.toml"), &Overrides::default()).unwrap();
    assert_eq!(echoed, resolved);
    assert_eq!(echoed.mode, Mode::Ct);
}

#[test]
fn summary_first_step_is_mean_of_step_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "scenario.steps = 2\nscenario.trials = 4\nfilter.particles = 200\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    assert!(bin()
        .args(["run", "--seed", "3", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());

    let (h, rows) = read_csv(&out.join("steps.csv"));
    let col = |name: &str| h.iter().position(|c| c == name).unwrap();
    let first: Vec<&Vec<String>> = rows.iter().filter(|r| r[col("step")] == "1").collect();
    assert_eq!(first.len(), 4);
    let err_mean = first
        .iter()
        .map(|r| r[col("tracking_error_m")].parse::<f64>().unwrap())
        .sum::<f64>()
        / 4.0;
    let powers: Vec<f64> = first
        .iter()
        .filter(|r| !r[col("target_power_db")].is_empty())
        .map(|r| r[col("target_power_db")].parse().unwrap())
        .collect();

    let (sh, srows) = read_csv(&out.join("summary.csv"));
    let scol = |name: &str| sh.iter().position(|c| c == name).unwrap();
    let s1 = &srows[0];
    assert_eq!(s1[scol("step")], "1");
    let logged: f64 = s1[scol("mean_tracking_error_m")].parse().unwrap();
    assert!((logged - err_mean).abs() <= 1e-7 * err_mean.abs().max(1.0));
    if powers.is_empty() {
        assert_eq!(s1[scol("mean_target_power_db")], "");
    } else {
        let mean = powers.iter().sum::<f64>() / powers.len() as f64;
        let logged: f64 = s1[scol("mean_target_power_db")].parse().unwrap();
        assert!((logged - mean).abs() <= 1e-7 * mean.abs());
        let present: f64 = s1[scol("target_power_present")].parse().unwrap();
        assert_eq!(present, powers.len() as f64 / 4.0);
    }
}

#[test]
fn seed_precedence_flag_then_env_then_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, format!("{SMALL}scenario.seed = 5\n")).unwrap();
    let run = |name: &str, flag: Option<&str>, env: Option<&str>| {
        let out = dir.path().join(name);
        let mut c = bin();
        c.args(["run", "--config"]).arg(&cfg).arg("--out").arg(&out);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        if let Some(e) = env {
            c.env("CSTJ_SIM_SEED", e);
        }
        assert!(c.status().unwrap().success());
        load_config(&out.join("config.toml"), &Overrides::default())
            .unwrap()
            .seed
    };
    assert_eq!(run("file", None, None), 5);
    assert_eq!(run("env", None, Some("9")), 9);
    assert_eq!(run("flag", Some("11"), Some("9")), 11);
}

#[test]
fn failures_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "sensing.lamda_c = 3\n").unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sensing.lamda_c"));

    fs::write(&bad, "actions.radial_steps_m = [-1]\n").unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert!(!out.status.success());

    let missing = bin()
        .args(["run", "--config", "/nonexistent/x.toml", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/x.toml"));

    let unknown = bin()
        .args(["preset", "figure5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!unknown.status.success());
}
