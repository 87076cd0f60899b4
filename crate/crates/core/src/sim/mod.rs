//! Closed-loop scenario runner.
//!
//! One step of a trial, in order: every agent predicts its particle set and
//! reads off the predicted target; the team decides moves and transmit
//! levels; agents move and aim; the true target advances; every agent scans,
//! updates its filter and extracts its local estimate; local estimates are
//! fused in ascending id order; metrics are computed against the truth.

mod config;
mod summary;

use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::control::{ct_decide, received_interference, sequential_decide, AgentContext, DecisionRecord};
use crate::dynamics::TargetState;
use crate::estimation::{ci_fuse, Estimate, EstimationError, ParticleSet};
use crate::geometry_rf::{aggregate_power_db, AntennaParams, RfParams};
use crate::seed::{self, Stream};

pub use config::{ConfigError, Mode, ScenarioConfig};
pub use summary::{summarize, StepSummary, TrialSummary};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("estimation failed: {0}")]
    Estimation(#[from] EstimationError),
}

/// What one agent did and saw during one step.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentStepLog {
    pub decision: DecisionRecord,
    pub local: Estimate,
    pub n_measurements: usize,
    /// The filter update carried no information (every particle had zero
    /// likelihood) and the prior weights were kept.
    pub uninformative_update: bool,
    /// Aggregate power received from teammates, dB; `None` if nobody reaches it.
    pub interference_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepLog {
    /// 1-based step index.
    pub step: usize,
    pub truth: TargetState,
    pub agents: Vec<AgentStepLog>,
    pub fused: Estimate,
    pub tracking_error_m: f64,
    /// Aggregate jamming power at the true target, dB.
    pub target_power_db: Option<f64>,
    /// Largest per-agent aggregate interference, dB.
    pub max_interference_db: Option<f64>,
}

impl StepLog {
    pub fn any_fallback(&self) -> bool {
        self.agents.iter().any(|a| a.decision.fallback_used.is_fallback())
    }

    /// Some agent received aggregate interference at or above `threshold_db`.
    pub fn violates(&self, threshold_db: f64) -> bool {
        self.max_interference_db.is_some_and(|v| v >= threshold_db)
    }
}

/// Logs of one trial with its index.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog {
    pub trial: u64,
    pub steps: Vec<StepLog>,
}

/// Jamming metrics of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepMetrics {
    pub tracking_error_m: f64,
    pub target_power_db: Option<f64>,
    pub interference_db: Vec<Option<f64>>,
    pub max_interference_db: Option<f64>,
}

/// Metrics for executed decisions against the true target.
pub fn compute_metrics(
    truth: &TargetState,
    fused: &Estimate,
    decisions: &[DecisionRecord],
    ant: &AntennaParams,
    rf: &RfParams,
) -> StepMetrics {
    let tracking_error_m = (fused.mean.position - truth.position).norm();
    let target_power_db = aggregate_power_db(
        decisions
            .iter()
            .filter_map(|d| d.transmitter(rf).power_at(&truth.position, ant, rf)),
    );
    let interference_db = received_interference(decisions, ant, rf);
    let max_interference_db = interference_db.iter().flatten().copied().reduce(f64::max);
    StepMetrics {
        tracking_error_m,
        target_power_db,
        interference_db,
        max_interference_db,
    }
}

fn uniform_in_box<R: Rng + ?Sized>(lo: &Vector3<f64>, hi: &Vector3<f64>, rng: &mut R) -> Vector3<f64> {
    Vector3::from_fn(|i, _| rng.random_range(lo[i]..hi[i]))
}

fn uniform_in_ball<R: Rng + ?Sized>(center: &Vector3<f64>, radius: f64, rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        if v.norm_squared() <= 1.0 {
            return center + v * radius;
        }
    }
}

struct Agent {
    id: usize,
    position: Vector3<f64>,
    filter: ParticleSet,
    sensor_rng: ChaCha8Rng,
    filter_rng: ChaCha8Rng,
}

/// Runs trial 0 of the scenario.
pub fn run_trial(cfg: &ScenarioConfig) -> Result<Vec<StepLog>, SimError> {
    run_trial_indexed(cfg, 0)
}

/// Runs one trial; the trial index selects its random streams.
pub fn run_trial_indexed(cfg: &ScenarioConfig, trial: u64) -> Result<Vec<StepLog>, SimError> {
    cfg.validate()?;
    let ct_index = cfg.ct_power_index()?;
    let mut scenario_rng = seed::rng(cfg.seed, trial, 0, Stream::Scenario);
    let mut target_rng = seed::rng(cfg.seed, trial, 0, Stream::Target);

    let position = match cfg.target_position {
        Some(p) => p,
        None => uniform_in_box(&cfg.arena_min, &cfg.arena_max, &mut scenario_rng),
    };
    let velocity = match cfg.target_velocity {
        Some(v) => v,
        None => {
            let s = cfg.random_speed_mps;
            uniform_in_box(&Vector3::repeat(-s), &Vector3::repeat(s), &mut scenario_rng)
        }
    };
    let mut truth = TargetState::new(position, velocity);

    let prior_cov = cfg.prior_covariance();
    let perturb = nalgebra::Vector6::from_fn(|i, _| {
        let z: f64 = StandardNormal.sample(&mut scenario_rng);
        z * prior_cov[(i, i)].sqrt()
    });
    let prior_mean = TargetState::from_vector(&(truth.to_vector() + perturb));

    let mut agents = Vec::with_capacity(cfg.n_agents);
    for id in 1..=cfg.n_agents {
        let position = uniform_in_ball(&truth.position, cfg.spawn_radius_m, &mut scenario_rng);
        let mut filter_rng = seed::rng(cfg.seed, trial, id as u64, Stream::Filter);
        let filter = ParticleSet::from_prior(&prior_mean, &prior_cov, cfg.n_particles, &mut filter_rng)?;
        agents.push(Agent {
            id,
            position,
            filter,
            sensor_rng: seed::rng(cfg.seed, trial, id as u64, Stream::Sensor),
            filter_rng,
        });
    }

    let mut logs = Vec::with_capacity(cfg.n_steps);
    for step in 1..=cfg.n_steps {
        let contexts: Vec<AgentContext> = agents
            .iter_mut()
            .map(|a| {
                a.filter.predict(&cfg.motion, &mut a.filter_rng);
                AgentContext {
                    id: a.id,
                    predicted: a.filter.weighted_mean(),
                    actions: cfg.actions.enumerate(&a.position),
                }
            })
            .collect();

        let decisions = match cfg.mode {
            Mode::Cstj => sequential_decide(&contexts, &cfg.antenna, &cfg.rf, &cfg.sensing, cfg.tracking_threshold),
            Mode::Ct => ct_decide(&contexts, &cfg.sensing, ct_index),
        };
        for (a, d) in agents.iter_mut().zip(&decisions) {
            a.position = d.chosen_position;
        }

        truth = cfg.motion.step(&truth, &mut target_rng);

        let mut locals = Vec::with_capacity(agents.len());
        let mut scans = Vec::with_capacity(agents.len());
        for a in agents.iter_mut() {
            let scan = cfg.sensing.collect(&truth.position, &a.position, &mut a.sensor_rng);
            let outcome = a.filter.update(&scan, &a.position, &cfg.sensing, &mut a.filter_rng);
            locals.push(a.filter.estimate());
            scans.push((scan.len(), !outcome.informative));
        }
        let fused = ci_fuse(&locals)?;
        let metrics = compute_metrics(&truth, &fused, &decisions, &cfg.antenna, &cfg.rf);

        let agent_logs = decisions
            .into_iter()
            .zip(locals)
            .zip(scans)
            .zip(&metrics.interference_db)
            .map(
                |(((decision, local), (n_measurements, uninformative_update)), interference_db)| AgentStepLog {
                    decision,
                    local,
                    n_measurements,
                    uninformative_update,
                    interference_db: *interference_db,
                },
            )
            .collect();
        logs.push(StepLog {
            step,
            truth,
            agents: agent_logs,
            fused,
            tracking_error_m: metrics.tracking_error_m,
            target_power_db: metrics.target_power_db,
            max_interference_db: metrics.max_interference_db,
        });
    }
    Ok(logs)
}

/// Runs trials `0..n_trials` on up to `jobs` threads. Output does not depend
/// on `jobs`.
pub fn run_trials(cfg: &ScenarioConfig, n_trials: usize, jobs: usize) -> Result<Vec<TrialLog>, SimError> {
    cfg.validate()?;
    let one = |trial: u64| run_trial_indexed(cfg, trial).map(|steps| TrialLog { trial, steps });
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool construction");
        return pool.install(|| (0..n_trials as u64).into_par_iter().map(one).collect());
    }
    let _ = jobs;
    (0..n_trials as u64).map(one).collect()
}

/// Runs `n_trials` trials and aggregates them.
pub fn run_monte_carlo(cfg: &ScenarioConfig, n_trials: usize) -> Result<TrialSummary, SimError> {
    if n_trials < 1 {
        return Err(ConfigError::Invalid("number of trials must be >= 1".into()).into());
    }
    let trials = run_trials(cfg, n_trials, 1)?;
    Ok(summarize(&trials, cfg.rf.interference_threshold_db))
}
