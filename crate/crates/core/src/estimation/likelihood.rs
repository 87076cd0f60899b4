//! Measurement-set likelihood with missed detections and Poisson clutter.
//!
//! For a scan `Y` with `n` elements:
//!
//! ```text
//! p(Y | x, s) = (1 - pD) e^{-lc} prod_Y (lc pc)
//!             + e^{-lc} pD sum_{l in Y} g(l | x, s) prod_{e != l} (lc pc)
//! ```
//!
//! Evaluated in the log domain since both products underflow quickly.

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::sensing::{detection_prob_at, spherical, wrap_angle, Measurement, SensingParams};

/// `n * log_term` with `0 * -inf` taken as 0 (empty product).
fn scaled(n: usize, log_term: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * log_term
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// Pre-digested scan for repeated evaluation over many candidate states.
#[derive(Debug, Clone)]
pub struct ScanLikelihood<'a> {
    scan: &'a [Measurement],
    sensor: Vector3<f64>,
    params: &'a SensingParams,
    log_clutter: f64,
    log_angle_norm: f64,
}

impl<'a> ScanLikelihood<'a> {
    pub fn new(scan: &'a [Measurement], sensor: Vector3<f64>, params: &'a SensingParams) -> Self {
        let log_clutter = (params.clutter_rate * params.clutter_density()).ln();
        let log_angle_norm = -(params.sigma_theta_rad * params.sigma_phi_rad).ln() - 1.5 * (2.0 * PI).ln();
        Self {
            scan,
            sensor,
            params,
            log_clutter,
            log_angle_norm,
        }
    }

    /// `ln p(Y | x, s)`.
    pub fn log_eval(&self, target: &Vector3<f64>) -> f64 {
        let p = self.params;
        let n = self.scan.len();
        let [range, azimuth, inclination] = spherical(target, &self.sensor);
        let pd = detection_prob_at(p, range);

        let missed = (1.0 - pd).ln() + scaled(n, self.log_clutter);
        let detected = if n == 0 || pd == 0.0 {
            f64::NEG_INFINITY
        } else {
            let sr = p.range_sigma(range);
            let log_norm = self.log_angle_norm - sr.ln();
            // streaming log-sum-exp over the per-element Gaussian terms
            let mut hi = f64::NEG_INFINITY;
            let mut acc = 0.0;
            for m in self.scan {
                let dr = (m.range_m - range) / sr;
                let da = wrap_angle(m.azimuth_rad - azimuth) / p.sigma_theta_rad;
                let di = (m.inclination_rad - inclination) / p.sigma_phi_rad;
                let lg = log_norm - 0.5 * (dr * dr + da * da + di * di);
                if lg > hi {
                    acc = acc * (hi - lg).exp() + 1.0;
                    hi = lg;
                } else {
                    acc += (lg - hi).exp();
                }
            }
            let lse = if hi == f64::NEG_INFINITY { hi } else { hi + acc.ln() };
            pd.ln() + scaled(n - 1, self.log_clutter) + lse
        };
        -p.clutter_rate + log_add_exp(missed, detected)
    }
}

pub fn log_likelihood(
    scan: &[Measurement],
    target: &Vector3<f64>,
    sensor: &Vector3<f64>,
    params: &SensingParams,
) -> f64 {
    ScanLikelihood::new(scan, *sensor, params).log_eval(target)
}

pub fn likelihood(scan: &[Measurement], target: &Vector3<f64>, sensor: &Vector3<f64>, params: &SensingParams) -> f64 {
    log_likelihood(scan, target, sensor, params).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Sum over association hypotheses (target missed, or target produced
    /// element `l`), evaluated directly in the linear domain.
    fn hypothesis_oracle(scan: &[Measurement], x: &Vector3<f64>, s: &Vector3<f64>, p: &SensingParams) -> f64 {
        let d = x - s;
        let r = d.norm();
        let az = d.y.atan2(d.x);
        let inc = (d.z / r).acos();
        let pd = if r < p.r0_m {
            p.p_d_max
        } else {
            (p.p_d_max - p.eta_per_m * (r - p.r0_m)).max(0.0)
        };
        let sr = p.sigma_rho0_m + p.beta_rho * r;
        let gauss = |m: &Measurement| {
            let mut da = m.azimuth_rad - az;
            while da > PI {
                da -= 2.0 * PI;
            }
            while da <= -PI {
                da += 2.0 * PI;
            }
            let q = ((m.range_m - r) / sr).powi(2)
                + (da / p.sigma_theta_rad).powi(2)
                + ((m.inclination_rad - inc) / p.sigma_phi_rad).powi(2);
            (-0.5 * q).exp() / ((2.0 * PI).powf(1.5) * sr * p.sigma_theta_rad * p.sigma_phi_rad)
        };
        let pc = 1.0 / (p.range_max_m * 2.0 * PI * PI);
        let c = p.clutter_rate * pc;
        let e = (-p.clutter_rate).exp();
        let mut total = (1.0 - pd) * e * c.powi(scan.len() as i32);
        for (i, m) in scan.iter().enumerate() {
            let mut term = e * pd * gauss(m);
            for (j, _) in scan.iter().enumerate() {
                if j != i {
                    term *= c;
                }
            }
            total += term;
        }
        total
    }

    #[test]
    fn empty_scan_is_miss_probability() {
        let p = SensingParams::default();
        let s = Vector3::zeros();
        let x = Vector3::new(10.0, 0.0, 0.0);
        let pd = p.detection_prob(&x, &s);
        let l = likelihood(&[], &x, &s, &p);
        assert!((l - (1.0 - pd) * (-15f64).exp()).abs() < 1e-12 * l);
    }

    #[test]
    fn undetectable_target_gives_clutter_only() {
        let p = SensingParams::default();
        let s = Vector3::zeros();
        let x = Vector3::new(70.0, 0.0, 0.0);
        let scan = [Measurement::new(70.0, 0.0, PI / 2.0), Measurement::new(12.0, 1.0, 1.0)];
        let c = p.clutter_rate * p.clutter_density();
        let expect = (-15f64).exp() * c * c;
        let l = likelihood(&scan, &x, &s, &p);
        assert!((l - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn matches_hypothesis_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for case in 0..200 {
            let p = SensingParams {
                clutter_rate: rng.random_range(0.5..20.0),
                ..SensingParams::default()
            };
            let s = Vector3::new(
                rng.random_range(0.0..100.0),
                rng.random_range(0.0..100.0),
                rng.random_range(0.0..100.0),
            );
            let x = s + Vector3::new(
                rng.random_range(-30.0..30.0),
                rng.random_range(-30.0..30.0),
                rng.random_range(-30.0..30.0),
            );
            let n = case % 5;
            let scan: Vec<Measurement> = (0..n)
                .map(|i| {
                    if i == 0 && rng.random_bool(0.7) {
                        p.sample_measurement(&x, &s, &mut rng)
                    } else {
                        Measurement::new(
                            rng.random_range(0.0..p.range_max_m),
                            rng.random_range(-PI..PI),
                            rng.random_range(0.0..PI),
                        )
                    }
                })
                .collect();
            let fast = likelihood(&scan, &x, &s, &p);
            let slow = hypothesis_oracle(&scan, &x, &s, &p);
            assert!(slow > 0.0);
            assert!((fast - slow).abs() <= 1e-12 * slow, "case {case}: {fast} vs {slow}");
        }
    }

    #[test]
    fn positive_whenever_clutter_present() {
        let p = SensingParams::default();
        let s = Vector3::zeros();
        let scan = [Measurement::new(5.0, 0.2, 1.0)];
        for d in [0.5, 5.0, 40.0, 150.0] {
            let x = Vector3::new(0.0, d, 0.0);
            assert!(log_likelihood(&scan, &x, &s, &p) > f64::NEG_INFINITY);
        }
    }

    #[test]
    fn no_clutter_single_detection() {
        let p = SensingParams {
            clutter_rate: 0.0,
            ..SensingParams::default()
        };
        let s = Vector3::zeros();
        let x = Vector3::new(3.0, 4.0, 0.0);
        let m = crate::sensing::measurement_fn(&x, &s).unwrap();
        let l = likelihood(&[m], &x, &s, &p);
        let oracle = hypothesis_oracle(&[m], &x, &s, &p);
        assert!((l - oracle).abs() < 1e-12 * oracle);
        // two returns cannot both be explained without clutter
        assert_eq!(likelihood(&[m, m], &x, &s, &p), 0.0);
    }
}
