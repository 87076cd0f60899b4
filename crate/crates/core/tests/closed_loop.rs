//! Closed-loop behaviour of full trials.

use cstj_core::sim::{run_trial, run_trials, summarize, Mode, ScenarioConfig};

#[test]
fn error_at_step_ten_below_step_one_in_most_seeds() {
    let cfg = ScenarioConfig {
        n_steps: 10,
        seed: 31,
        ..Default::default()
    };
    let trials = run_trials(&cfg, 50, 1).unwrap();
    let improved = trials
        .iter()
        .filter(|t| t.steps[9].tracking_error_m < t.steps[0].tracking_error_m)
        .count();
    println!("tracking error decreased from step 1 to step 10 in {improved}/50 seeds");
    assert!(improved >= 40, "only {improved}/50 seeds improved");
}

#[test]
fn cstj_never_violates_without_fallback() {
    let cfg = ScenarioConfig {
        n_steps: 25,
        n_particles: 500,
        seed: 4,
        ..Default::default()
    };
    let trials = run_trials(&cfg, 6, 1).unwrap();
    let summary = summarize(&trials, cfg.rf.interference_threshold_db);
    assert!(summary.violations_without_fallback.iter().all(|v| *v == 0));
    for t in &trials {
        for s in &t.steps {
            if !s.any_fallback() {
                for a in &s.agents {
                    assert!(a.interference_db.is_none_or(|db| db < -50.0));
                }
            }
        }
    }
}

#[test]
fn trial_streams_are_independent_of_batching() {
    let cfg = ScenarioConfig {
        mode: Mode::Ct,
        n_steps: 4,
        n_particles: 300,
        seed: 77,
        ..Default::default()
    };
    let batch = run_trials(&cfg, 3, 1).unwrap();
    assert_eq!(batch[0].steps, run_trial(&cfg).unwrap());
    assert_ne!(batch[0].steps, batch[1].steps);
}
