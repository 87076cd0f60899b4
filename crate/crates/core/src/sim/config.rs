use nalgebra::{Matrix6, Vector3};
use thiserror::Error;

use crate::dynamics::{ActionGrid, DynamicsError, MotionModel};
use crate::geometry_rf::{AntennaParams, GeometryError, RfParams};
use crate::sensing::{SensingError, SensingParams};

/// Which controller drives the team.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Cooperative simultaneous tracking and jamming.
    Cstj,
    /// Tracking-only baseline at constant transmit power.
    Ct,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Cstj => "cstj",
            Mode::Ct => "ct",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cstj" => Ok(Mode::Cstj),
            "ct" => Ok(Mode::Ct),
            other => Err(ConfigError::Invalid(format!(
                "mode must be \"cstj\" or \"ct\", got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Sensing(#[from] SensingError),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

/// Everything needed to run one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub seed: u64,
    pub n_agents: usize,
    pub n_steps: usize,
    pub n_trials: usize,
    /// Surveillance area corners, meters.
    pub arena_min: Vector3<f64>,
    pub arena_max: Vector3<f64>,
    /// Initial target position; drawn uniformly in the arena when `None`.
    pub target_position: Option<Vector3<f64>>,
    /// Initial target velocity; drawn uniformly in `[-v, v]^3` when `None`.
    pub target_velocity: Option<Vector3<f64>>,
    pub random_speed_mps: f64,
    /// Agents spawn uniformly in a ball of this radius around the target.
    pub spawn_radius_m: f64,
    pub prior_position_std_m: f64,
    pub prior_velocity_std_mps: f64,
    pub motion: MotionModel,
    pub actions: ActionGrid,
    pub sensing: SensingParams,
    pub antenna: AntennaParams,
    pub rf: RfParams,
    /// Minimum detection probability an action needs to be jamming-eligible.
    pub tracking_threshold: f64,
    pub n_particles: usize,
    /// Constant transmit level of the tracking-only baseline, dB.
    pub ct_power_db: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Cstj,
            seed: 0,
            n_agents: 4,
            n_steps: 50,
            n_trials: 1,
            arena_min: Vector3::zeros(),
            arena_max: Vector3::repeat(100.0),
            target_position: None,
            target_velocity: None,
            random_speed_mps: 2.0,
            spawn_radius_m: 5.0,
            prior_position_std_m: 5.0,
            prior_velocity_std_mps: 1.0,
            motion: MotionModel::default(),
            actions: ActionGrid::default(),
            sensing: SensingParams::default(),
            antenna: AntennaParams::default(),
            rf: RfParams::default(),
            tracking_threshold: 0.8,
            n_particles: 2000,
            ct_power_db: 7.0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_agents < 1 {
            return Err(invalid("scenario.agents must be >= 1"));
        }
        if self.n_trials < 1 {
            return Err(invalid("scenario.trials must be >= 1"));
        }
        if !(self.arena_min.iter().all(|v| v.is_finite())
            && self.arena_max.iter().all(|v| v.is_finite())
            && self.arena_min.iter().zip(self.arena_max.iter()).all(|(lo, hi)| lo < hi))
        {
            return Err(invalid(
                "scenario.arena_min must be below scenario.arena_max on every axis",
            ));
        }
        for v in [self.target_position, self.target_velocity].into_iter().flatten() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(invalid("target.position and target.velocity must be finite"));
            }
        }
        if !(self.random_speed_mps >= 0.0 && self.random_speed_mps.is_finite()) {
            return Err(invalid("target.random_speed_mps must be >= 0"));
        }
        if !(self.spawn_radius_m > 0.0 && self.spawn_radius_m.is_finite()) {
            return Err(invalid("scenario.spawn_radius_m must be > 0"));
        }
        if !(self.prior_position_std_m >= 0.0
            && self.prior_velocity_std_mps >= 0.0
            && self.prior_position_std_m.is_finite()
            && self.prior_velocity_std_mps.is_finite())
        {
            return Err(invalid("prior standard deviations must be >= 0"));
        }
        self.actions.validate()?;
        self.sensing.validate()?;
        self.antenna.validate()?;
        self.rf.validate()?;
        if !(0.0..=1.0).contains(&self.tracking_threshold) {
            return Err(invalid("control.tracking_threshold must lie in [0, 1]"));
        }
        if self.n_particles < 1 {
            return Err(invalid("filter.particles must be >= 1"));
        }
        self.ct_power_index()?;
        Ok(())
    }

    /// Power index of the baseline's constant level.
    pub fn ct_power_index(&self) -> Result<usize, ConfigError> {
        self.rf
            .power_levels
            .index_of_db(self.ct_power_db)
            .ok_or_else(|| invalid("control.ct_power_db must be one of rf.power_levels_db"))
    }

    pub fn prior_covariance(&self) -> Matrix6<f64> {
        let p = self.prior_position_std_m.powi(2);
        let v = self.prior_velocity_std_mps.powi(2);
        Matrix6::from_diagonal(&nalgebra::Vector6::new(p, p, p, v, v, v))
    }
}
