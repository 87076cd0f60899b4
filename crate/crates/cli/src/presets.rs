//! Named experiment batches.

use cstj_core::sim::{Mode, ScenarioConfig};
use cstj_core::{ActionGrid, PowerLevels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// CSTJ against the tracking-only baseline, 4 agents.
    #[value(name = "figure3_compare")]
    Figure3Compare,
    /// CSTJ with 2 to 12 agents.
    #[value(name = "figure4_sweep")]
    Figure4Sweep,
}

pub const SWEEP_AGENTS: [usize; 6] = [2, 4, 6, 8, 10, 12];

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "figure3_compare" => Ok(Preset::Figure3Compare),
            "figure4_sweep" => Ok(Preset::Figure4Sweep),
            other => Err(format!(
                "unknown preset {other:?}; expected figure3_compare or figure4_sweep"
            )),
        }
    }
}

/// Named scenarios of a preset; every scenario shares the master seed.
pub fn preset(which: Preset, seed: u64) -> Vec<(String, ScenarioConfig)> {
    let base = ScenarioConfig {
        seed,
        n_steps: 50,
        n_trials: 50,
        ..ScenarioConfig::default()
    };
    match which {
        Preset::Figure3Compare => vec![
            (
                "cstj".into(),
                ScenarioConfig {
                    mode: Mode::Cstj,
                    ..base.clone()
                },
            ),
            (
                "ct".into(),
                ScenarioConfig {
                    mode: Mode::Ct,
                    ct_power_db: 7.0,
                    ..base
                },
            ),
        ],
        Preset::Figure4Sweep => {
            let mut rf = base.rf.clone();
            rf.power_levels = PowerLevels::new(vec![0.0, 7.0, 10.0]).expect("valid levels");
            let actions = ActionGrid::new(vec![1.0, 3.0], 2, 4).expect("valid grid");
            SWEEP_AGENTS
                .iter()
                .map(|&n| {
                    (
                        format!("agents_{n:02}"),
                        ScenarioConfig {
                            n_agents: n,
                            rf: rf.clone(),
                            actions: actions.clone(),
                            ..base.clone()
                        },
                    )
                })
                .collect()
        }
    }
}
