use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use cstj_cli::config::KEYS;
use cstj_cli::{execute, load_config, parse_config, preset, Overrides, Preset};
use cstj_core::sim::Mode;

#[derive(Debug, Parser)]
#[command(
    name = "cstj-sim",
    version,
    about = "Cooperative tracking and jamming of a rogue drone"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: cstj_core::sim::ConfigError| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario from a config file.
    Run {
        /// Scenario file; defaults are used for missing keys (or all keys if omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed; falls back to CSTJ_SIM_SEED, then to the file.
        #[arg(long, env = "CSTJ_SIM_SEED", value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        #[arg(long)]
        agents: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        /// Worker threads for trials; results do not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a predefined experiment batch.
    Preset {
        name: Preset,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "CSTJ_SIM_SEED", default_value_t = 0,
              value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn key_help() -> String {
    let width = KEYS.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::from("Config keys (dotted, or grouped under [section] headers):\n");
    for (k, d) in KEYS {
        s.push_str(&format!("  {k:width$}  {d}\n"));
    }
    s
}

fn main() -> ExitCode {
    let matches = Cli::command()
        .mut_subcommand("run", |c| c.after_long_help(key_help()))
        .get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            trials,
            mode,
            agents,
            steps,
            jobs,
            out,
        } => {
            let overrides = Overrides {
                seed,
                trials,
                mode,
                agents,
                steps,
            };
            let cfg = match &config {
                Some(path) => load_config(path, &overrides),
                None => parse_config("", &overrides),
            };
            cfg.map_err(Into::into)
                .and_then(|cfg| execute("run", &[(String::new(), cfg)], &out, jobs.max(1)))
        }
        Command::Preset { name, out, seed, jobs } => {
            let label = match name {
                Preset::Figure3Compare => "preset figure3_compare",
                Preset::Figure4Sweep => "preset figure4_sweep",
            };
            execute(label, &preset(name, seed), &out, jobs.max(1))
        }
    };
    match result {
        Ok(manifest) => {
            for (name, o) in &manifest.runs {
                eprintln!("{name}: {}", o.steps.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
