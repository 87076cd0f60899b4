use nalgebra::{DMatrix, SMatrix};

/// Factor `F` with `F F^T = m` for a symmetric positive semidefinite `m`.
/// Returns `None` if `m` is asymmetric or has a clearly negative eigenvalue.
pub(crate) fn psd_factor<const N: usize>(m: &SMatrix<f64, N, N>) -> Option<SMatrix<f64, N, N>> {
    if m.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let scale = m.amax().max(1.0);
    if (m - m.transpose()).amax() > 1e-9 * scale {
        return None;
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = DMatrix::from_column_slice(N, N, sym.as_slice()).symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l < -1e-9 * scale) {
        return None;
    }
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let factor = &eig.eigenvectors * DMatrix::from_diagonal(&roots);
    Some(SMatrix::from_column_slice(factor.as_slice()))
}

/// Smallest eigenvalue of a symmetric matrix.
#[cfg(test)]
pub(crate) fn min_eigenvalue<const N: usize>(m: &SMatrix<f64, N, N>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    DMatrix::from_column_slice(N, N, sym.as_slice())
        .symmetric_eigenvalues()
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix3;

    #[test]
    fn factor_reconstructs() {
        let m = Matrix3::new(4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0);
        let f = psd_factor(&m).unwrap();
        assert!((f * f.transpose() - m).amax() < 1e-12);
    }

    #[test]
    fn factor_handles_singular_and_rejects_indefinite() {
        assert_eq!(psd_factor(&Matrix3::<f64>::zeros()).unwrap(), Matrix3::zeros());
        let indefinite = Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, -1.0, 1.0));
        assert!(psd_factor(&indefinite).is_none());
        let asym = Matrix3::new(1.0, 0.5, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(psd_factor(&asym).is_none());
    }
}
