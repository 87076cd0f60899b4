//! Sequential covariance intersection.
//!
//! Each pairwise step picks the weight `w` in `[0, 1]` minimizing the trace
//! of `(w A^-1 + (1 - w) B^-1)^-1` with a golden-section search.

use nalgebra::{Matrix6, Vector6};

use super::{Estimate, EstimationError};
use crate::dynamics::TargetState;

const OMEGA_TOL: f64 = 1e-6;
const REGULARIZATION: f64 = 1e-9;

/// Result of fusing two estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiFusion {
    pub estimate: Estimate,
    /// Weight on the first estimate's information.
    pub omega: f64,
}

fn information(cov: &Matrix6<f64>) -> Result<Matrix6<f64>, EstimationError> {
    if let Some(ch) = cov.cholesky() {
        return Ok(ch.inverse());
    }
    (cov + Matrix6::identity() * REGULARIZATION)
        .cholesky()
        .map(|ch| ch.inverse())
        .ok_or(EstimationError::SingularCovariance)
}

fn fused_covariance(info_a: &Matrix6<f64>, info_b: &Matrix6<f64>, omega: f64) -> Option<Matrix6<f64>> {
    (info_a * omega + info_b * (1.0 - omega))
        .cholesky()
        .map(|ch| ch.inverse())
}

pub fn ci_fuse_pair(a: &Estimate, b: &Estimate) -> Result<CiFusion, EstimationError> {
    let info_a = information(&a.covariance)?;
    let info_b = information(&b.covariance)?;
    let trace = |w: f64| fused_covariance(&info_a, &info_b, w).map_or(f64::INFINITY, |k| k.trace());

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (trace(x1), trace(x2));
    while hi - lo > OMEGA_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = trace(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = trace(x2);
        }
    }
    let interior = 0.5 * (lo + hi);
    // the optimum may sit on a boundary, where the search only gets within tolerance
    let omega = [interior, 0.0, 1.0]
        .into_iter()
        .map(|w| (w, trace(w)))
        .fold(
            (interior, f64::INFINITY),
            |best, cand| if cand.1 < best.1 { cand } else { best },
        )
        .0;

    let covariance = fused_covariance(&info_a, &info_b, omega).ok_or(EstimationError::SingularCovariance)?;
    let mean: Vector6<f64> =
        covariance * (info_a * a.mean.to_vector() * omega + info_b * b.mean.to_vector() * (1.0 - omega));
    Ok(CiFusion {
        estimate: Estimate {
            mean: TargetState::from_vector(&mean),
            covariance: (covariance + covariance.transpose()) * 0.5,
        },
        omega,
    })
}

/// Folds pairwise covariance intersection over the estimates in order.
pub fn ci_fuse(estimates: &[Estimate]) -> Result<Estimate, EstimationError> {
    let (first, rest) = estimates.split_first().ok_or(EstimationError::NothingToFuse)?;
    rest.iter()
        .try_fold(*first, |acc, next| ci_fuse_pair(&acc, next).map(|f| f.estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_eigenvalue;
    use nalgebra::Vector3;
    use proptest::prelude::*;

    fn random_spd(seed: &[f64; 36], scale: f64) -> Matrix6<f64> {
        let m = Matrix6::from_column_slice(seed);
        m * m.transpose() * scale + Matrix6::identity() * 0.05
    }

    fn est(mean: [f64; 6], cov: Matrix6<f64>) -> Estimate {
        Estimate {
            mean: TargetState::from_vector(&Vector6::from(mean)),
            covariance: cov,
        }
    }

    #[test]
    fn single_estimate_passes_through() {
        let e = est([1.0, 2.0, 3.0, 0.0, 0.0, 1.0], Matrix6::identity() * 2.0);
        assert_eq!(ci_fuse(&[e]).unwrap(), e);
        assert_eq!(ci_fuse(&[]), Err(EstimationError::NothingToFuse));
    }

    #[test]
    fn identical_estimates_are_a_fixed_point() {
        let cov = random_spd(&std::array::from_fn(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0), 1.0);
        let e = est([4.0, -1.0, 2.0, 0.3, 0.2, -0.1], cov);
        let fused = ci_fuse_pair(&e, &e).unwrap();
        assert!((fused.estimate.covariance - cov).amax() < 1e-9 * cov.amax());
        assert!((fused.estimate.mean.to_vector() - e.mean.to_vector()).amax() < 1e-9);
        // and for any fixed weight
        let ia = information(&cov).unwrap();
        for w in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let k = fused_covariance(&ia, &ia, w).unwrap();
            assert!((k - cov).amax() < 1e-9 * cov.amax());
        }
    }

    #[test]
    fn singular_input_is_regularized() {
        let a = est([0.0; 6], Matrix6::zeros());
        let b = est([1.0; 6], Matrix6::identity());
        let f = ci_fuse(&[a, b]).unwrap();
        assert!(f.covariance.trace() <= 6.0 + 1e-9);
    }

    #[test]
    fn picks_the_tighter_estimate_when_nested() {
        let a = est([0.0; 6], Matrix6::identity());
        let b = est([5.0; 6], Matrix6::identity() * 4.0);
        let f = ci_fuse_pair(&a, &b).unwrap();
        assert!((f.omega - 1.0).abs() < 1e-12);
        assert!((f.estimate.mean.position - Vector3::zeros()).amax() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn trace_never_worse_than_inputs(
            sa in proptest::array::uniform32(-1.0..1.0f64),
            sb in proptest::array::uniform32(-1.0..1.0f64),
            tail in proptest::array::uniform8(-1.0..1.0f64),
            scale_a in 0.1..10.0f64, scale_b in 0.1..10.0f64,
        ) {
            let mut ra = [0.0; 36];
            let mut rb = [0.0; 36];
            ra[..32].copy_from_slice(&sa);
            ra[32..].copy_from_slice(&tail[..4]);
            rb[..32].copy_from_slice(&sb);
            rb[32..].copy_from_slice(&tail[4..]);
            let a = est([0.0, 1.0, 2.0, 0.0, 0.0, 0.0], random_spd(&ra, scale_a));
            let b = est([1.0, 0.0, 2.5, 0.1, 0.0, 0.0], random_spd(&rb, scale_b));
            let f = ci_fuse_pair(&a, &b).unwrap();
            let tr = f.estimate.covariance.trace();
            prop_assert!(tr <= a.covariance.trace().min(b.covariance.trace()) + 1e-9);

            // dense grid oracle over the weight
            let ia = a.covariance.try_inverse().unwrap();
            let ib = b.covariance.try_inverse().unwrap();
            let grid_best = (0..=2000)
                .map(|i| i as f64 / 2000.0)
                .map(|w| (ia * w + ib * (1.0 - w)).try_inverse().unwrap().trace())
                .fold(f64::INFINITY, f64::min);
            prop_assert!(tr <= grid_best + 1e-6 * grid_best);

            // CI bound: K_f <= A / w and K_f <= B / (1 - w)
            let k = f.estimate.covariance;
            if f.omega > 1e-12 {
                prop_assert!(min_eigenvalue(&(a.covariance / f.omega - k)) >= -1e-8 * k.amax());
            }
            if f.omega < 1.0 - 1e-12 {
                prop_assert!(min_eigenvalue(&(b.covariance / (1.0 - f.omega) - k)) >= -1e-8 * k.amax());
            }
            prop_assert!(min_eigenvalue(&k) >= -1e-9);
            prop_assert!((k - k.transpose()).amax() <= 1e-9);
        }
    }
}
