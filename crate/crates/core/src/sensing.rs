//! Range-dependent detection, noisy spherical measurements and Poisson
//! clutter.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensingError {
    #[error("target and sensor positions coincide")]
    CoincidentPositions,
    #[error("invalid sensing parameters: {0}")]
    InvalidParams(&'static str),
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a % (2.0 * PI);
    if w <= -PI {
        w += 2.0 * PI;
    } else if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Reflect an inclination back into `[0, pi]`.
fn reflect_inclination(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w = 2.0 * PI - w;
    }
    w
}

/// Range, azimuth and inclination of a target seen from a sensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub range_m: f64,
    pub azimuth_rad: f64,
    pub inclination_rad: f64,
}

impl Measurement {
    /// Builds a measurement, clamping the range at zero and wrapping the
    /// angles into their canonical intervals.
    pub fn new(range_m: f64, azimuth_rad: f64, inclination_rad: f64) -> Self {
        Self {
            range_m: range_m.max(0.0),
            azimuth_rad: wrap_angle(azimuth_rad),
            inclination_rad: reflect_inclination(inclination_rad),
        }
    }

    /// Offset from the sensor in Cartesian coordinates.
    pub fn to_cartesian(&self) -> Vector3<f64> {
        let (si, ci) = self.inclination_rad.sin_cos();
        let (sa, ca) = self.azimuth_rad.sin_cos();
        self.range_m * Vector3::new(si * ca, si * sa, ci)
    }
}

/// Noise-free `h(x, s)` as raw components; undefined angles at zero range
/// come out as 0.
pub(crate) fn spherical(target: &Vector3<f64>, sensor: &Vector3<f64>) -> [f64; 3] {
    let d = target - sensor;
    let horizontal = d.x.hypot(d.y);
    [d.norm(), d.y.atan2(d.x), horizontal.atan2(d.z)]
}

pub fn measurement_fn(target: &Vector3<f64>, sensor: &Vector3<f64>) -> Result<Measurement, SensingError> {
    if target == sensor {
        return Err(SensingError::CoincidentPositions);
    }
    let [r, az, inc] = spherical(target, sensor);
    Ok(Measurement {
        range_m: r,
        azimuth_rad: wrap_angle(az),
        inclination_rad: inc,
    })
}

/// Sensor model of one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingParams {
    pub p_d_max: f64,
    /// Detection fall-off `eta` (1/m).
    pub eta_per_m: f64,
    /// Radius `R_0` of full detection probability (m).
    pub r0_m: f64,
    pub sigma_theta_rad: f64,
    pub sigma_phi_rad: f64,
    pub sigma_rho0_m: f64,
    /// Range noise growth `beta_rho` (m/m).
    pub beta_rho: f64,
    /// Mean clutter count per scan.
    pub clutter_rate: f64,
    /// Upper range bound of the measurement space (m).
    pub range_max_m: f64,
}

impl Default for SensingParams {
    fn default() -> Self {
        Self {
            p_d_max: 0.99,
            eta_per_m: 0.02,
            r0_m: 2.0,
            sigma_theta_rad: PI / 50.0,
            sigma_phi_rad: PI / 50.0,
            sigma_rho0_m: 2.0,
            beta_rho: 0.05,
            clutter_rate: 15.0,
            range_max_m: 3f64.sqrt() * 100.0,
        }
    }
}

impl SensingParams {
    pub fn validate(&self) -> Result<(), SensingError> {
        use SensingError::InvalidParams;
        if !(0.0..=1.0).contains(&self.p_d_max) {
            return Err(InvalidParams("p_d_max must lie in [0, 1]"));
        }
        if !(self.eta_per_m >= 0.0 && self.eta_per_m.is_finite()) {
            return Err(InvalidParams("eta_per_m must be >= 0"));
        }
        if !(self.r0_m >= 0.0 && self.r0_m.is_finite()) {
            return Err(InvalidParams("r0_m must be >= 0"));
        }
        if !(self.sigma_theta_rad > 0.0 && self.sigma_phi_rad > 0.0 && self.sigma_rho0_m > 0.0) {
            return Err(InvalidParams("measurement noise deviations must be > 0"));
        }
        if !(self.beta_rho >= 0.0 && self.beta_rho.is_finite()) {
            return Err(InvalidParams("beta_rho must be >= 0"));
        }
        if !(self.clutter_rate >= 0.0 && self.clutter_rate.is_finite()) {
            return Err(InvalidParams("clutter_rate must be >= 0"));
        }
        if !(self.range_max_m > 0.0 && self.range_max_m.is_finite()) {
            return Err(InvalidParams("measurement space volume must be > 0"));
        }
        Ok(())
    }

    /// Volume of `[0, rho_max] x (-pi, pi] x [0, pi]`.
    pub fn measurement_volume(&self) -> f64 {
        self.range_max_m * 2.0 * PI * PI
    }

    /// Uniform clutter density `p_c`.
    pub fn clutter_density(&self) -> f64 {
        1.0 / self.measurement_volume()
    }

    pub fn range_sigma(&self, range_m: f64) -> f64 {
        self.sigma_rho0_m + self.beta_rho * range_m
    }

    pub fn detection_prob(&self, target: &Vector3<f64>, sensor: &Vector3<f64>) -> f64 {
        detection_prob_at(self, (target - sensor).norm())
    }

    pub fn sample_measurement<R: Rng + ?Sized>(
        &self,
        target: &Vector3<f64>,
        sensor: &Vector3<f64>,
        rng: &mut R,
    ) -> Measurement {
        let [r, az, inc] = spherical(target, sensor);
        let mut noisy = |mean: f64, sd: f64| {
            if sd > 0.0 {
                mean + sd * rng.sample::<f64, _>(rand_distr::StandardNormal)
            } else {
                mean
            }
        };
        let range = noisy(r, self.range_sigma(r));
        let azimuth = noisy(az, self.sigma_theta_rad);
        let inclination = noisy(inc, self.sigma_phi_rad);
        Measurement::new(range.min(self.range_max_m), azimuth, inclination)
    }

    pub fn sample_clutter<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Measurement> {
        if self.clutter_rate <= 0.0 {
            return Vec::new();
        }
        let count = Poisson::new(self.clutter_rate)
            .expect("positive clutter rate")
            .sample(rng) as usize;
        (0..count)
            .map(|_| {
                // (-pi, pi]: flip the half-open interval of the uniform draw
                let az = PI - rng.random::<f64>() * 2.0 * PI;
                Measurement {
                    range_m: rng.random::<f64>() * self.range_max_m,
                    azimuth_rad: az,
                    inclination_rad: rng.random::<f64>() * PI,
                }
            })
            .collect()
    }

    /// The measurement set received in one scan: possibly the target
    /// return, plus clutter, in random order.
    pub fn collect<R: Rng + ?Sized>(
        &self,
        target: &Vector3<f64>,
        sensor: &Vector3<f64>,
        rng: &mut R,
    ) -> Vec<Measurement> {
        let mut out = Vec::new();
        if rng.random::<f64>() < self.detection_prob(target, sensor) {
            out.push(self.sample_measurement(target, sensor, rng));
        }
        out.extend(self.sample_clutter(rng));
        out.shuffle(rng);
        out
    }
}

pub(crate) fn detection_prob_at(p: &SensingParams, distance: f64) -> f64 {
    if distance < p.r0_m {
        p.p_d_max
    } else {
        (p.p_d_max - p.eta_per_m * (distance - p.r0_m)).max(0.0)
    }
}
