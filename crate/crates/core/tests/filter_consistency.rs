//! Closed-loop sanity of the particle filter against simulated truth with a
//! sensor holding station at a fixed offset from the target.

use cstj_core::dynamics::MotionModel;
use cstj_core::estimation::ParticleSet;
use cstj_core::sensing::SensingParams;
use cstj_core::TargetState;
use nalgebra::{Matrix6, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Position RMSE of the local estimate over steps 20..=50.
fn station_keeping_rmse(seed: u64, sensing: &SensingParams) -> f64 {
    let model = MotionModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut truth = TargetState::new(
        Vector3::new(50.0, 50.0, 50.0),
        Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0)),
    );
    let prior_cov: Matrix6<f64> = Matrix6::from_diagonal(&Vector6::new(25.0, 25.0, 25.0, 1.0, 1.0, 1.0));
    let offset = Vector6::from_fn(|i, _| {
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        z * prior_cov[(i, i)].sqrt()
    });
    let prior_mean = TargetState::from_vector(&(truth.to_vector() + offset));
    let mut filter = ParticleSet::from_prior(&prior_mean, &prior_cov, 2000, &mut rng).unwrap();
    let station = Vector3::new(10.0, 0.0, 0.0);

    let mut sq = 0.0;
    let mut count = 0;
    for step in 1..=50 {
        filter.predict(&model, &mut rng);
        truth = model.step(&truth, &mut rng);
        let sensor = truth.position + station;
        let scan = sensing.collect(&truth.position, &sensor, &mut rng);
        filter.update(&scan, &sensor, sensing, &mut rng);
        if step >= 20 {
            sq += (filter.estimate().mean.position - truth.position).norm_squared();
            count += 1;
        }
    }
    (sq / count as f64).sqrt()
}

#[test]
fn station_keeping_without_clutter_tracks_within_two_sigma() {
    let sensing = SensingParams {
        clutter_rate: 0.0,
        p_d_max: 1.0,
        eta_per_m: 0.0,
        ..SensingParams::default()
    };
    let good = (0..50).filter(|s| station_keeping_rmse(*s, &sensing) < 4.0).count();
    assert!(good >= 45, "only {good}/50 trials within 4 m");
}
