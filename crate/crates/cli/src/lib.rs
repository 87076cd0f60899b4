//! Front end of the simulator: config files, presets and CSV artifacts.

pub mod config;
pub mod output;
pub mod presets;

use std::path::Path;
use std::time::Instant;

use cstj_core::sim::{run_trials, ScenarioConfig, SimError};

pub use config::{echo_config, load_config, parse_config, ConfigError, Overrides};
pub use output::{emit_run, OutputError, RunManifest, RunOutputs};
pub use presets::{preset, Preset};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Output(#[from] OutputError),
}

/// Runs the named scenarios, each into its own directory under `out`, or
/// directly into `out` when there is exactly one unnamed scenario.
pub fn execute(
    command: &str,
    scenarios: &[(String, ScenarioConfig)],
    out: &Path,
    jobs: usize,
) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let mut runs = Vec::with_capacity(scenarios.len());
    for (name, cfg) in scenarios {
        let trials = run_trials(cfg, cfg.n_trials, jobs)?;
        let dir = if name.is_empty() {
            out.to_path_buf()
        } else {
            out.join(name)
        };
        let (outputs, _) = emit_run(
            &dir,
            &echo_config(cfg),
            &trials,
            cfg.n_agents,
            cfg.rf.interference_threshold_db,
        )?;
        runs.push((
            if name.is_empty() {
                "run".to_string()
            } else {
                name.clone()
            },
            outputs,
        ));
    }
    let manifest = RunManifest {
        command: command.to_string(),
        seed: scenarios.first().map_or(0, |(_, c)| c.seed),
        jobs,
        runs,
        duration_s: start.elapsed().as_secs_f64(),
    };
    std::fs::create_dir_all(out).map_err(|source| OutputError::Io {
        path: out.display().to_string(),
        source,
    })?;
    manifest.write(out)?;
    Ok(manifest)
}
