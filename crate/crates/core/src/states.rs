//! Gaussian states and their two-mode entanglement.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symplectic::{self, CovarianceMatrix};

/// A Gaussian state: quadrature means plus covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    sigma: CovarianceMatrix,
}

impl GaussianState {
    /// Validates that `mean` matches the covariance dimension and that the
    /// covariance satisfies the uncertainty relation.
    pub fn new(mean: DVector<f64>, sigma: CovarianceMatrix) -> Result<Self> {
        if mean.len() != sigma.dim() {
            return Err(Error::DimensionMismatch {
                expected: sigma.dim(),
                actual: mean.len(),
            });
        }
        if !symplectic::check_physicality(&sigma)? {
            return Err(Error::Unphysical);
        }
        Ok(Self { mean, sigma })
    }

    /// Zero-mean state.
    pub fn centered(sigma: CovarianceMatrix) -> Result<Self> {
        Self::new(DVector::zeros(sigma.dim()), sigma)
    }

    /// Skips the physicality check. Channel outputs use this: the maps are
    /// physical by construction and tests verify the property separately.
    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, sigma: CovarianceMatrix) -> Self {
        debug_assert_eq!(mean.len(), sigma.dim());
        Self { mean, sigma }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * n_modes),
            sigma: CovarianceMatrix::vacuum(n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.sigma.n_modes()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &CovarianceMatrix {
        &self.sigma
    }

    /// Returns a copy with the quadrature means replaced.
    pub fn with_mean(&self, mean: DVector<f64>) -> Result<Self> {
        if mean.len() != self.sigma.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.sigma.dim(),
                actual: mean.len(),
            });
        }
        Ok(Self {
            mean,
            sigma: self.sigma.clone(),
        })
    }

    /// Uncorrelated joint state `self ⊗ other`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (d1, d2) = (self.sigma.dim(), other.sigma.dim());
        let mut sigma = DMatrix::zeros(d1 + d2, d1 + d2);
        sigma
            .view_mut((0, 0), (d1, d1))
            .copy_from(self.sigma.matrix());
        sigma
            .view_mut((d1, d1), (d2, d2))
            .copy_from(other.sigma.matrix());
        let mean =
            DVector::from_iterator(d1 + d2, self.mean.iter().chain(other.mean.iter()).copied());
        GaussianState {
            mean,
            sigma: CovarianceMatrix::new(sigma).expect("block sum of even dimensions"),
        }
    }
}

/// Two-mode squeeze `z = r·e^{iθ}`, used both for squeezed-vacuum inputs
/// and for the phase-sensitive amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSpec {
    r: f64,
    theta: f64,
}

impl SqueezeSpec {
    /// `theta` is reduced into `[0, 2π)`.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::NegativeSqueeze(r));
        }
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        Ok(Self { r, theta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Partial-transpose summary of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Smaller symplectic eigenvalue of the partially transposed covariance.
    pub nu_minus: f64,
    /// `max(0, -ln(2·nu_minus))`, in nats.
    pub log_negativity: f64,
    /// `nu_minus < 1/2`.
    pub entangled: bool,
}

impl EntanglementReport {
    pub fn from_nu_minus(nu_minus: f64) -> Self {
        Self {
            nu_minus,
            log_negativity: log_negativity_from_nu(nu_minus),
            entangled: nu_minus < 0.5,
        }
    }
}

/// `max(0, -ln 2ν)`.
pub fn log_negativity_from_nu(nu_minus: f64) -> f64 {
    (-(2.0 * nu_minus).ln()).max(0.0)
}

/// Two-mode squeezed vacuum `S(z)|0,0⟩`.
pub fn tmsv(spec: SqueezeSpec) -> GaussianState {
    let diag = (2.0 * spec.r).cosh() / 2.0;
    let off = (2.0 * spec.r).sinh() / 2.0;
    GaussianState {
        mean: DVector::zeros(4),
        sigma: CovarianceMatrix::special_form(
            diag,
            diag,
            off * spec.theta.cos(),
            off * spec.theta.sin(),
        ),
    }
}

/// Product of thermal modes with the given mean occupations.
pub fn thermal_state(nbar_per_mode: &[f64]) -> Result<GaussianState> {
    if nbar_per_mode.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: 0,
        });
    }
    let mut diagonal = Vec::with_capacity(2 * nbar_per_mode.len());
    for &nbar in nbar_per_mode {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(Error::NegativeOccupation(nbar));
        }
        diagonal.extend([nbar + 0.5, nbar + 0.5]);
    }
    let sigma = CovarianceMatrix::from_diagonal(&diagonal)?;
    Ok(GaussianState {
        mean: DVector::zeros(sigma.dim()),
        sigma,
    })
}

/// PPT test and logarithmic negativity of a two-mode state.
pub fn entanglement_report(state: &GaussianState) -> Result<EntanglementReport> {
    if state.n_modes() != 2 {
        return Err(Error::WrongModeCount {
            expected: 2,
            actual: state.n_modes(),
        });
    }
    let transposed = symplectic::partial_transpose(&state.sigma, 1)?;
    let spectrum = symplectic::symplectic_eigenvalues(&transposed)?;
    Ok(EntanglementReport::from_nu_minus(spectrum.min()))
}

/// Wigner function of the state at a phase-space point.
pub fn wigner_density(state: &GaussianState, point: &[f64]) -> Result<f64> {
    let dim = state.sigma.dim();
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: point.len(),
        });
    }
    let sigma = state.sigma.matrix();
    let cholesky = sigma.clone().cholesky().ok_or(Error::NotPositiveDefinite {
        min_eigenvalue: f64::NAN,
    })?;
    let delta = DVector::from_row_slice(point) - &state.mean;
    let quadratic = delta.dot(&cholesky.solve(&delta));
    let det = cholesky.determinant();
    let norm = (2.0 * PI).powi(state.n_modes() as i32) * det.sqrt();
    Ok((-0.5 * quadratic).exp() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tmsv_zero_is_vacuum() {
        let state = tmsv(SqueezeSpec::new(0.0, 1.3).unwrap());
        assert_eq!(state, GaussianState::vacuum(2));
    }

    #[test]
    fn tmsv_entries_at_r1() {
        let sigma = tmsv(SqueezeSpec::new(1.0, 0.0).unwrap()).sigma;
        assert!((sigma.get(0, 0) - 1.881_097_845_541_815_7).abs() < 1e-12);
        assert!((sigma.get(2, 2) - 1.881_097_845_541_815_7).abs() < 1e-12);
        assert!((sigma.get(0, 2) - 1.813_430_203_923_509_4).abs() < 1e-12);
        assert_eq!(sigma.get(0, 3), 0.0);
    }

    #[test]
    fn tmsv_report_at_r1() {
        for theta in [0.0, 0.4, 2.0, 5.5] {
            let report = entanglement_report(&tmsv(SqueezeSpec::new(1.0, theta).unwrap())).unwrap();
            assert!((report.nu_minus - 0.067_667_641_618_306_35).abs() < 1e-10);
            assert!((report.log_negativity - 2.0).abs() < 1e-9);
            assert!(report.entangled);
        }
    }

    #[test]
    fn vacuum_report() {
        let report = entanglement_report(&GaussianState::vacuum(2)).unwrap();
        assert!((report.nu_minus - 0.5).abs() < 1e-14);
        assert_eq!(report.log_negativity, 0.0);
        assert!(!report.entangled);
    }

    #[test]
    fn thermal_product_report() {
        let report = entanglement_report(&thermal_state(&[0.5, 0.5]).unwrap()).unwrap();
        assert!((report.nu_minus - 1.0).abs() < 1e-12);
        assert!(!report.entangled);
    }

    #[test]
    fn report_needs_two_modes() {
        let err = entanglement_report(&thermal_state(&[1.0]).unwrap()).unwrap_err();
        assert_eq!(
            err,
            Error::WrongModeCount {
                expected: 2,
                actual: 1
            }
        );
    }

    #[test]
    fn thermal_examples() {
        assert_eq!(
            thermal_state(&[0.0, 0.0]).unwrap(),
            GaussianState::vacuum(2)
        );
        let single = thermal_state(&[1.0]).unwrap();
        assert_eq!(
            single.sigma.matrix(),
            &DMatrix::from_diagonal_element(2, 2, 1.5)
        );
        let spectrum =
            symplectic::symplectic_eigenvalues(&thermal_state(&[1.0, 2.0]).unwrap().sigma).unwrap();
        assert!((spectrum.values()[0] - 2.5).abs() < 1e-12);
        assert!((spectrum.values()[1] - 1.5).abs() < 1e-12);
        assert_eq!(thermal_state(&[-0.1]), Err(Error::NegativeOccupation(-0.1)));
    }

    #[test]
    fn wigner_examples() {
        let inv_pi_sq = 0.101_321_183_642_337_77;
        let vac = GaussianState::vacuum(2);
        assert!((wigner_density(&vac, &[0.0; 4]).unwrap() - inv_pi_sq).abs() < 1e-14);
        let sq = tmsv(SqueezeSpec::new(1.0, 0.0).unwrap());
        assert!((wigner_density(&sq, &[0.0; 4]).unwrap() - inv_pi_sq).abs() < 1e-12);

        let point = [0.3, -0.2, 0.1, 0.5];
        let off_peak = wigner_density(&sq, &point).unwrap();
        assert!(off_peak > 0.0 && off_peak < inv_pi_sq);

        assert_eq!(
            wigner_density(&vac, &[0.0; 3]),
            Err(Error::DimensionMismatch {
                expected: 4,
                actual: 3
            })
        );
    }

    #[test]
    fn wigner_peaks_at_displaced_mean() {
        let state = thermal_state(&[0.7])
            .unwrap()
            .with_mean(DVector::from_row_slice(&[1.0, -2.0]))
            .unwrap();
        let peak = wigner_density(&state, &[1.0, -2.0]).unwrap();
        let expected = 1.0 / (2.0 * PI * 1.2);
        assert!((peak - expected).abs() < 1e-14);
        let nearby = wigner_density(&state, &[1.5, -2.0]).unwrap();
        assert!((nearby - peak * (-0.5 * 0.25 / 1.2f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn squeeze_spec_validation() {
        assert_eq!(
            SqueezeSpec::new(-0.1, 0.0),
            Err(Error::NegativeSqueeze(-0.1))
        );
        let spec = SqueezeSpec::new(0.2, -0.5).unwrap();
        assert!((spec.theta() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn new_rejects_unphysical() {
        let sigma = CovarianceMatrix::from_diagonal(&[0.4, 0.4]).unwrap();
        assert_eq!(GaussianState::centered(sigma), Err(Error::Unphysical));
    }

    #[test]
    fn tensor_is_block_diagonal() {
        let joint = thermal_state(&[1.0])
            .unwrap()
            .tensor(&GaussianState::vacuum(1));
        assert_eq!(joint, thermal_state(&[1.0, 0.0]).unwrap());
    }
}
