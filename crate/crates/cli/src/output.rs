//! CSV step logs, per-step summaries and the run manifest.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use cstj_core::sim::{summarize, TrialLog, TrialSummary};

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> OutputError + '_ {
    move |source| OutputError::Csv {
        path: path.display().to_string(),
        source,
    }
}

/// Formats a float with 9 significant digits, plain notation for moderate
/// magnitudes and scientific otherwise; trailing zeros are trimmed.
pub fn fmt_sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_sig9).unwrap_or_default()
}

pub fn steps_header(n_agents: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "trial",
        "step",
        "truth_x",
        "truth_y",
        "truth_z",
        "fused_x",
        "fused_y",
        "fused_z",
        "tracking_error_m",
        "target_power_db",
        "max_interference_db",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for id in 1..=n_agents {
        for field in [
            "x",
            "y",
            "z",
            "power_index",
            "fallback",
            "interference_db",
            "measurements",
        ] {
            h.push(format!("agent{id}_{field}"));
        }
    }
    h
}

/// Writes one row per trial and step.
pub fn write_steps_csv(path: &Path, trials: &[TrialLog], n_agents: usize) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(steps_header(n_agents)).map_err(csv_err(path))?;
    for t in trials {
        for s in &t.steps {
            let mut row = vec![t.trial.to_string(), s.step.to_string()];
            row.extend(s.truth.position.iter().map(|v| fmt_sig9(*v)));
            row.extend(s.fused.mean.position.iter().map(|v| fmt_sig9(*v)));
            row.push(fmt_sig9(s.tracking_error_m));
            row.push(opt(s.target_power_db));
            row.push(opt(s.max_interference_db));
            for a in &s.agents {
                row.extend(a.decision.chosen_position.iter().map(|v| fmt_sig9(*v)));
                row.push(a.decision.power_index.to_string());
                row.push(a.decision.fallback_used.as_str().to_string());
                row.push(opt(a.interference_db));
                row.push(a.n_measurements.to_string());
            }
            w.write_record(&row).map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

pub const SUMMARY_HEADER: [&str; 7] = [
    "step",
    "mean_tracking_error_m",
    "mean_target_power_db",
    "target_power_present",
    "mean_max_interference_db",
    "violation_rate",
    "trials",
];

pub fn write_summary_csv(path: &Path, summary: &TrialSummary) -> Result<(), OutputError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(SUMMARY_HEADER).map_err(csv_err(path))?;
    for s in &summary.steps {
        w.write_record([
            s.step.to_string(),
            fmt_sig9(s.mean_tracking_error_m),
            opt(s.mean_target_power_db),
            fmt_sig9(s.target_power_present),
            opt(s.mean_max_interference_db),
            fmt_sig9(s.violation_rate),
            summary.n_trials.to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Files produced for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub config: PathBuf,
    pub steps: PathBuf,
    pub summary: PathBuf,
}

/// Writes the config echo, step log and summary of one scenario into `dir`.
pub fn emit_run(
    dir: &Path,
    config_echo: &str,
    trials: &[TrialLog],
    n_agents: usize,
    threshold_db: f64,
) -> Result<(RunOutputs, TrialSummary), OutputError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let out = RunOutputs {
        config: dir.join("config.toml"),
        steps: dir.join("steps.csv"),
        summary: dir.join("summary.csv"),
    };
    fs::write(&out.config, config_echo).map_err(io_err(&out.config))?;
    write_steps_csv(&out.steps, trials, n_agents)?;
    let summary = summarize(trials, threshold_db);
    write_summary_csv(&out.summary, &summary)?;
    Ok((out, summary))
}

/// Record of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub seed: u64,
    pub jobs: usize,
    pub runs: Vec<(String, RunOutputs)>,
    pub duration_s: f64,
}

impl RunManifest {
    pub fn render(&self, base: &Path) -> String {
        let rel = |p: &Path| p.strip_prefix(base).unwrap_or(p).display().to_string();
        let mut root = toml::Table::new();
        root.insert("tool".into(), "cstj-sim".into());
        root.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        root.insert("command".into(), self.command.clone().into());
        root.insert("seed".into(), toml::Value::Integer(self.seed as i64));
        root.insert("jobs".into(), toml::Value::Integer(self.jobs as i64));
        root.insert("duration_s".into(), self.duration_s.into());
        let runs = self
            .runs
            .iter()
            .map(|(name, o)| {
                let mut t = toml::Table::new();
                t.insert("name".into(), name.clone().into());
                t.insert("config".into(), rel(&o.config).into());
                t.insert("steps".into(), rel(&o.steps).into());
                t.insert("summary".into(), rel(&o.summary).into());
                toml::Value::Table(t)
            })
            .collect();
        root.insert("runs".into(), toml::Value::Array(runs));
        toml::to_string(&root).expect("manifest always serializes")
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, OutputError> {
        let path = dir.join("manifest.toml");
        fs::write(&path, self.render(dir)).map_err(io_err(&path))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(1.0), "1");
        assert_eq!(fmt_sig9(-28.4206), "-28.4206");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig9(123456.789012), "123456.789");
        assert_eq!(fmt_sig9(9.9999999999), "10");
        assert_eq!(fmt_sig9(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig9(2.0e12), "2e12");
        assert_eq!(fmt_sig9(-0.000123456789123), "-0.000123456789");
    }

    #[test]
    fn formatted_values_parse_back_closely() {
        for x in [std::f64::consts::PI, -1234.5678, 7.0e-3, 3.0e10] {
            let back: f64 = fmt_sig9(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-9 * x.abs());
        }
    }

    #[test]
    fn header_width() {
        assert_eq!(steps_header(4).len(), 11 + 4 * 7);
    }
}
