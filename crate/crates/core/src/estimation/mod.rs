//! Per-agent SIR particle filtering and covariance-intersection fusion.

mod fusion;
mod likelihood;
mod particles;

use nalgebra::Matrix6;
use thiserror::Error;

use crate::dynamics::TargetState;

pub use fusion::{ci_fuse, ci_fuse_pair, CiFusion};
pub use likelihood::{likelihood, log_likelihood, ScanLikelihood};
pub use particles::{ParticleSet, UpdateOutcome};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimationError {
    #[error("particle count must be at least 1")]
    NoParticles,
    #[error("prior covariance is not symmetric positive semidefinite")]
    NotPsd,
    #[error("particle weights must be finite, non-negative and not all zero")]
    InvalidWeights,
    #[error("nothing to fuse")]
    NothingToFuse,
    #[error("covariance is singular even after regularization")]
    SingularCovariance,
}

/// Mean state and covariance of a filtering density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: TargetState,
    pub covariance: Matrix6<f64>,
}
