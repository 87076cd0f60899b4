//! Ground-truth target motion and the discrete agent action set.
//!
//! The target follows a nearly-constant-velocity model driven by white
//! acceleration noise: `x_t = Phi x_{t-1} + Gamma nu_t`, `nu_t ~ N(0, Sigma_v)`.

use nalgebra::{Matrix3, Matrix6, Matrix6x3, Vector3, Vector6};
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::psd_factor;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("sampling period must be positive and finite")]
    InvalidPeriod,
    #[error("acceleration noise covariance must be symmetric positive semidefinite")]
    NotPsd,
    #[error("degenerate noise covariance")]
    DegenerateNoise,
    #[error("invalid action grid: {0}")]
    InvalidGrid(&'static str),
}

/// Position and velocity of the rogue drone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetState {
    pub position: Vector3<f64>,
    pub velocity: Vector3<f64>,
}

impl TargetState {
    pub fn new(position: Vector3<f64>, velocity: Vector3<f64>) -> Self {
        Self { position, velocity }
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        Self {
            position: v.fixed_rows::<3>(0).into_owned(),
            velocity: v.fixed_rows::<3>(3).into_owned(),
        }
    }

    pub fn to_vector(&self) -> Vector6<f64> {
        Vector6::new(
            self.position.x,
            self.position.y,
            self.position.z,
            self.velocity.x,
            self.velocity.y,
            self.velocity.z,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().chain(self.velocity.iter()).all(|v| v.is_finite())
    }
}

/// Sampling period and acceleration noise of the target model.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionModel {
    dt: f64,
    accel_noise_cov: Matrix3<f64>,
    noise_factor: Matrix3<f64>,
}

impl MotionModel {
    pub fn new(dt: f64, accel_noise_cov: Matrix3<f64>) -> Result<Self, DynamicsError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(DynamicsError::InvalidPeriod);
        }
        let noise_factor = psd_factor(&accel_noise_cov).ok_or(DynamicsError::NotPsd)?;
        Ok(Self {
            dt,
            accel_noise_cov,
            noise_factor,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn accel_noise_cov(&self) -> &Matrix3<f64> {
        &self.accel_noise_cov
    }

    /// `Phi`.
    pub fn transition_matrix(&self) -> Matrix6<f64> {
        transition_matrix(self.dt)
    }

    /// `Gamma`.
    pub fn noise_gain(&self) -> Matrix6x3<f64> {
        let mut g = Matrix6x3::zeros();
        for i in 0..3 {
            g[(i, i)] = 0.5 * self.dt * self.dt;
            g[(i + 3, i)] = self.dt;
        }
        g
    }

    /// `Gamma Sigma_v Gamma^T` (rank at most 3).
    pub fn process_covariance(&self) -> Matrix6<f64> {
        let g = self.noise_gain();
        g * self.accel_noise_cov * g.transpose()
    }

    /// Deterministic propagation under a given acceleration.
    pub fn propagate(&self, state: &TargetState, accel: &Vector3<f64>) -> TargetState {
        let dt = self.dt;
        TargetState {
            position: state.position + state.velocity * dt + accel * (0.5 * dt * dt),
            velocity: state.velocity + accel * dt,
        }
    }

    pub fn sample_accel<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector3<f64> {
        let z = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        self.noise_factor * z
    }

    /// One draw of the target transition.
    pub fn step<R: Rng + ?Sized>(&self, state: &TargetState, rng: &mut R) -> TargetState {
        let accel = self.sample_accel(rng);
        self.propagate(state, &accel)
    }

    /// Log transition density evaluated on the acceleration subspace: the
    /// acceleration is recovered from the velocity residual and the position
    /// residual must agree with it. Returns `-inf` when it does not.
    pub fn transition_logpdf(&self, next: &TargetState, prev: &TargetState) -> Result<f64, DynamicsError> {
        let chol = self.accel_noise_cov.cholesky().ok_or(DynamicsError::DegenerateNoise)?;
        let accel = (next.velocity - prev.velocity) / self.dt;
        let expected = self.propagate(prev, &accel);
        let scale = next.position.norm().max(prev.position.norm()).max(1.0);
        if (next.position - expected.position).norm() > 1e-6 * scale {
            return Ok(f64::NEG_INFINITY);
        }
        let white = chol
            .l()
            .solve_lower_triangular(&accel)
            .ok_or(DynamicsError::DegenerateNoise)?;
        let log_det: f64 = chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
        let k = 3.0;
        Ok(-0.5 * (white.norm_squared() + log_det + k * (2.0 * std::f64::consts::PI).ln()))
    }
}

impl Default for MotionModel {
    fn default() -> Self {
        Self::new(1.0, Matrix3::from_diagonal_element(2.0)).expect("default motion model")
    }
}

pub fn transition_matrix(dt: f64) -> Matrix6<f64> {
    let mut phi = Matrix6::identity();
    for i in 0..3 {
        phi[(i, i + 3)] = dt;
    }
    phi
}

pub fn step_target<R: Rng + ?Sized>(state: &TargetState, model: &MotionModel, rng: &mut R) -> TargetState {
    model.step(state, rng)
}

/// A controllable UAV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub id: usize,
    pub position: Vector3<f64>,
}

/// Radial step sizes and angular resolution of the agent mobility actions.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionGrid {
    pub radial_steps_m: Vec<f64>,
    pub n_phi: u32,
    pub n_theta: u32,
}

impl ActionGrid {
    pub fn new(radial_steps_m: Vec<f64>, n_phi: u32, n_theta: u32) -> Result<Self, DynamicsError> {
        let grid = Self {
            radial_steps_m,
            n_phi,
            n_theta,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if self.radial_steps_m.is_empty() {
            return Err(DynamicsError::InvalidGrid("radial_steps_m must be nonempty"));
        }
        if self.radial_steps_m.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(DynamicsError::InvalidGrid("radial steps must be > 0"));
        }
        if self.n_phi == 0 || self.n_theta == 0 {
            return Err(DynamicsError::InvalidGrid("n_phi and n_theta must be >= 1"));
        }
        Ok(())
    }

    /// Candidate next positions from `origin`, in `(l1, l2, l3)` order with
    /// coincident offsets (the poles) kept once.
    pub fn enumerate(&self, origin: &Vector3<f64>) -> Vec<Vector3<f64>> {
        let d_phi = std::f64::consts::PI / self.n_phi as f64;
        let d_theta = 2.0 * std::f64::consts::PI / self.n_theta as f64;
        let mut offsets: Vec<Vector3<f64>> = Vec::new();
        for &radius in &self.radial_steps_m {
            for l2 in 0..=self.n_phi {
                let phi = l2 as f64 * d_phi;
                for l3 in 1..=self.n_theta {
                    let theta = l3 as f64 * d_theta;
                    let off = Vector3::new(
                        radius * phi.sin() * theta.cos(),
                        radius * phi.sin() * theta.sin(),
                        radius * phi.cos(),
                    );
                    if !offsets.iter().any(|o| (o - off).norm() <= 1e-9) {
                        offsets.push(off);
                    }
                }
            }
        }
        offsets.into_iter().map(|o| origin + o).collect()
    }
}

impl Default for ActionGrid {
    fn default() -> Self {
        Self {
            radial_steps_m: vec![1.0, 3.0, 5.0],
            n_phi: 2,
            n_theta: 4,
        }
    }
}

pub fn enumerate_actions(agent: &AgentState, grid: &ActionGrid) -> Vec<Vector3<f64>> {
    grid.enumerate(&agent.position)
}
