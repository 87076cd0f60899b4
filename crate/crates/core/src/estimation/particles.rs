use nalgebra::{Matrix6, Vector3, Vector6};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Estimate, EstimationError, ScanLikelihood};
use crate::dynamics::{MotionModel, TargetState};
use crate::linalg::psd_factor;
use crate::sensing::{Measurement, SensingParams};

/// Weighted particle approximation of one agent's filtering density.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    states: Vec<TargetState>,
    weights: Vec<f64>,
}

/// What happened during a measurement update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateOutcome {
    /// False when every particle had zero likelihood and the prior weights
    /// were kept.
    pub informative: bool,
    pub resampled: bool,
    /// Effective sample size after reweighting, before any resampling.
    pub ess: f64,
}

impl ParticleSet {
    /// `n` i.i.d. draws from `N(mean, cov)` with uniform weights.
    pub fn from_prior<R: Rng + ?Sized>(
        mean: &TargetState,
        cov: &Matrix6<f64>,
        n: usize,
        rng: &mut R,
    ) -> Result<Self, EstimationError> {
        if n == 0 {
            return Err(EstimationError::NoParticles);
        }
        let factor = psd_factor(cov).ok_or(EstimationError::NotPsd)?;
        let mu = mean.to_vector();
        let states = (0..n)
            .map(|_| {
                let z = Vector6::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
                TargetState::from_vector(&(mu + factor * z))
            })
            .collect();
        Ok(Self {
            states,
            weights: vec![1.0 / n as f64; n],
        })
    }

    /// Builds a set from explicit particles; weights are normalized.
    pub fn from_weighted(states: Vec<TargetState>, weights: Vec<f64>) -> Result<Self, EstimationError> {
        if states.is_empty() {
            return Err(EstimationError::NoParticles);
        }
        if states.len() != weights.len() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(EstimationError::InvalidWeights);
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(EstimationError::InvalidWeights);
        }
        Ok(Self {
            states,
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[TargetState] {
        &self.states
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `1 / sum w_i^2`.
    pub fn ess(&self) -> f64 {
        1.0 / self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    /// Propagates every particle through the motion model; weights untouched.
    pub fn predict<R: Rng + ?Sized>(&mut self, model: &MotionModel, rng: &mut R) {
        for s in &mut self.states {
            *s = model.step(s, rng);
        }
    }

    /// Weighted mean state.
    pub fn weighted_mean(&self) -> TargetState {
        let mean = self
            .states
            .iter()
            .zip(&self.weights)
            .fold(Vector6::zeros(), |acc, (s, w)| acc + s.to_vector() * *w);
        TargetState::from_vector(&mean)
    }

    /// Multiplies the weights by the scan likelihood and renormalizes.
    /// Returns false (weights untouched) if all products vanish.
    pub fn reweight(&mut self, scan: &[Measurement], sensor: &Vector3<f64>, params: &SensingParams) -> bool {
        let lik = ScanLikelihood::new(scan, *sensor, params);
        let log_w: Vec<f64> = self
            .states
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| w.ln() + lik.log_eval(&s.position))
            .collect();
        let hi = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !hi.is_finite() {
            return false;
        }
        let raw: Vec<f64> = log_w.iter().map(|l| (l - hi).exp()).collect();
        let total: f64 = raw.iter().sum();
        self.weights = raw.into_iter().map(|w| w / total).collect();
        true
    }

    /// Systematic resampling onto uniform weights.
    pub fn resample_systematic<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n = self.len();
        let step = 1.0 / n as f64;
        let mut u = rng.random::<f64>() * step;
        let mut cumulative = self.weights[0];
        let mut i = 0;
        let mut picked = Vec::with_capacity(n);
        for _ in 0..n {
            while u > cumulative && i + 1 < n {
                i += 1;
                cumulative += self.weights[i];
            }
            picked.push(self.states[i]);
            u += step;
        }
        self.states = picked;
        self.weights = vec![step; n];
    }

    /// Bayes update with the clutter-aware likelihood, then systematic
    /// resampling if the effective sample size drops below `N/2`.
    pub fn update<R: Rng + ?Sized>(
        &mut self,
        scan: &[Measurement],
        sensor: &Vector3<f64>,
        params: &SensingParams,
        rng: &mut R,
    ) -> UpdateOutcome {
        let informative = self.reweight(scan, sensor, params);
        let ess = self.ess();
        let resampled = ess < 0.5 * self.len() as f64;
        if resampled {
            self.resample_systematic(rng);
        }
        UpdateOutcome {
            informative,
            resampled,
            ess,
        }
    }

    /// Expected a-posteriori state and its covariance.
    pub fn estimate(&self) -> Estimate {
        let mean = self.weighted_mean().to_vector();
        let covariance = self
            .states
            .iter()
            .zip(&self.weights)
            .fold(Matrix6::zeros(), |acc, (s, w)| {
                let d = s.to_vector() - mean;
                acc + d * d.transpose() * *w
            });
        Estimate {
            mean: TargetState::from_vector(&mean),
            covariance: (covariance + covariance.transpose()) * 0.5,
        }
    }
}
