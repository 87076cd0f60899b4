//! Cross-trial aggregation of step logs.

use super::TrialLog;

/// Cross-trial statistics of one step index.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSummary {
    pub step: usize,
    pub mean_tracking_error_m: f64,
    /// Mean of the target power in dB over trials where it was present.
    pub mean_target_power_db: Option<f64>,
    /// Fraction of trials where some power reached the target.
    pub target_power_present: f64,
    /// Mean over trials of the largest per-agent interference, dB, where present.
    pub mean_max_interference_db: Option<f64>,
    /// Fraction of trials violating the interference threshold at this step.
    pub violation_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub n_trials: usize,
    pub steps: Vec<StepSummary>,
    /// Per trial, the number of steps at which some agent's interference was
    /// at or above the threshold.
    pub violations: Vec<usize>,
    /// Per trial, the number of violating steps with no fallback raised.
    pub violations_without_fallback: Vec<usize>,
}

impl TrialSummary {
    pub fn trials_with_violation(&self) -> usize {
        self.violations.iter().filter(|v| **v > 0).count()
    }

    /// Grand mean of the per-step mean target power over steps where defined.
    pub fn overall_target_power_db(&self) -> Option<f64> {
        mean(self.steps.iter().filter_map(|s| s.mean_target_power_db))
    }

    pub fn overall_tracking_error_m(&self) -> f64 {
        mean(self.steps.iter().map(|s| s.mean_tracking_error_m)).unwrap_or(f64::NAN)
    }
}

/// Order-independent mean: values are sorted before summation so that any
/// permutation of trials yields the bitwise same result.
fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    Some(v.iter().sum::<f64>() / v.len() as f64)
}

/// Aggregates trials step by step. Trials are expected to have equal length;
/// a step index is summarized over the trials that reached it.
pub fn summarize(trials: &[TrialLog], threshold_db: f64) -> TrialSummary {
    let n_steps = trials.iter().map(|t| t.steps.len()).max().unwrap_or(0);
    let steps = (0..n_steps)
        .map(|i| {
            let rows: Vec<_> = trials.iter().filter_map(|t| t.steps.get(i)).collect();
            let n = rows.len() as f64;
            StepSummary {
                step: i + 1,
                mean_tracking_error_m: mean(rows.iter().map(|s| s.tracking_error_m)).unwrap_or(f64::NAN),
                mean_target_power_db: mean(rows.iter().filter_map(|s| s.target_power_db)),
                target_power_present: rows.iter().filter(|s| s.target_power_db.is_some()).count() as f64 / n,
                mean_max_interference_db: mean(rows.iter().filter_map(|s| s.max_interference_db)),
                violation_rate: rows.iter().filter(|s| s.violates(threshold_db)).count() as f64 / n,
            }
        })
        .collect();
    TrialSummary {
        n_trials: trials.len(),
        steps,
        violations: trials
            .iter()
            .map(|t| t.steps.iter().filter(|s| s.violates(threshold_db)).count())
            .collect(),
        violations_without_fallback: trials
            .iter()
            .map(|t| {
                t.steps
                    .iter()
                    .filter(|s| !s.any_fallback() && s.violates(threshold_db))
                    .count()
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{run_trial_indexed, run_trials, Mode, ScenarioConfig};
    use super::*;

    fn cfg() -> ScenarioConfig {
        ScenarioConfig {
            mode: Mode::Ct,
            seed: 9,
            n_steps: 4,
            n_particles: 200,
            ..Default::default()
        }
    }

    #[test]
    fn single_trial_summary_is_that_trial() {
        let c = cfg();
        let steps = run_trial_indexed(&c, 0).unwrap();
        let s = summarize(
            &[TrialLog {
                trial: 0,
                steps: steps.clone(),
            }],
            -50.0,
        );
        assert_eq!(s.n_trials, 1);
        for (row, step) in s.steps.iter().zip(&steps) {
            assert_eq!(row.mean_tracking_error_m, step.tracking_error_m);
            assert_eq!(row.mean_target_power_db, step.target_power_db);
            assert_eq!(row.mean_max_interference_db, step.max_interference_db);
        }
        assert!(s.violations[0] <= c.n_steps);
    }

    #[test]
    fn permutation_invariant() {
        let trials = run_trials(&cfg(), 4, 1).unwrap();
        let mut shuffled = trials.clone();
        shuffled.reverse();
        shuffled.swap(0, 2);
        let a = summarize(&trials, -50.0);
        let b = summarize(&shuffled, -50.0);
        assert_eq!(a.steps, b.steps);
        let mut va = a.violations.clone();
        let mut vb = b.violations.clone();
        va.sort();
        vb.sort();
        assert_eq!(va, vb);
    }
}
