//! Amplifier channels acting on Gaussian states.
//!
//! A phase-insensitive amplifier maps `a → G a + c†` with noise moments
//! `⟨cc†⟩ = (1+η)(g−1)` and `⟨c†c⟩ = η(g−1)`, `g = |G|²`. On the covariance
//! matrix this scales every quadrature of an amplified mode by `√g` and adds
//! `(1+2η)(g−1)/2` to its diagonal. Cross-covariances pick up one `√g`
//! factor per amplified mode, so amplifying both modes of a pair scales
//! their correlations by `g` and amplifying one of them by `√g`.
//!
//! The phase-sensitive amplifier is a second two-mode squeezer and acts
//! through its symplectic matrix.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::states::{GaussianState, SqueezeSpec};
use crate::symplectic::CovarianceMatrix;

/// Intensity gain `g = |G|² ≥ 1` and population parameter
/// `η = N₂/(N₁ − N₂) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierSpec {
    gain: f64,
    eta: f64,
}

impl AmplifierSpec {
    pub fn new(gain: f64, eta: f64) -> Result<Self> {
        if !(gain >= 1.0 && gain.is_finite()) {
            return Err(Error::GainBelowUnity(gain));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::NegativeEta(eta));
        }
        Ok(Self { gain, eta })
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Variance added to each amplified quadrature.
    pub fn added_noise(&self) -> f64 {
        (1.0 + 2.0 * self.eta) * (self.gain - 1.0) / 2.0
    }
}

/// The set of modes an amplifier acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSelection(BTreeSet<usize>);

impl ModeSelection {
    pub fn new(modes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let modes: BTreeSet<usize> = modes.into_iter().collect();
        if modes.is_empty() {
            return Err(Error::BadSelection("no modes selected".into()));
        }
        Ok(Self(modes))
    }

    /// Both modes of a pair.
    pub fn symmetric() -> Self {
        Self(BTreeSet::from([0, 1]))
    }

    /// Only mode `a` (index 0) of a pair.
    pub fn asymmetric() -> Self {
        Self(BTreeSet::from([0]))
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.0.contains(&mode)
    }

    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn validate_for(&self, n_modes: usize) -> Result<()> {
        match self.0.iter().find(|&&m| m >= n_modes) {
            Some(m) => Err(Error::BadSelection(format!(
                "mode {m} out of range for a {n_modes}-mode state"
            ))),
            None => Ok(()),
        }
    }
}

/// Phase-insensitive amplification of the selected modes.
pub fn apply_phase_insensitive(
    state: &GaussianState,
    spec: AmplifierSpec,
    selection: &ModeSelection,
) -> Result<GaussianState> {
    let n_modes = state.n_modes();
    selection.validate_for(n_modes)?;

    let amplitude = spec.gain().sqrt();
    let noise = spec.added_noise();
    let scale: Vec<f64> = (0..2 * n_modes)
        .map(|k| {
            if selection.contains(k / 2) {
                amplitude
            } else {
                1.0
            }
        })
        .collect();

    let mut sigma = state.covariance().matrix().clone();
    for i in 0..sigma.nrows() {
        for j in 0..sigma.ncols() {
            sigma[(i, j)] *= scale[i] * scale[j];
        }
        if selection.contains(i / 2) {
            sigma[(i, i)] += noise;
        }
    }
    let mean = state.mean().component_mul(&DVector::from_vec(scale));
    Ok(GaussianState::from_parts_unchecked(
        mean,
        CovarianceMatrix::new(sigma)?,
    ))
}

/// Symplectic matrix of the two-mode squeezer `S(r e^{iθ})` in
/// `(x₁, p₁, x₂, p₂)` ordering:
/// `[[cosh r·I, sinh r·R(θ)], [sinh r·R(θ), cosh r·I]]`,
/// `R(θ) = [[cos θ, sin θ], [sin θ, −cos θ]]`.
pub fn two_mode_squeeze_symplectic(spec: SqueezeSpec) -> DMatrix<f64> {
    let (ch, sh) = (spec.r().cosh(), spec.r().sinh());
    let (cos, sin) = (spec.theta().cos(), spec.theta().sin());
    #[rustfmt::skip]
    let entries = [
        ch,        0.0,       sh * cos,  sh * sin,
        0.0,       ch,        sh * sin,  -sh * cos,
        sh * cos,  sh * sin,  ch,        0.0,
        sh * sin,  -sh * cos, 0.0,       ch,
    ];
    DMatrix::from_row_slice(4, 4, &entries)
}

/// Phase-sensitive amplification by a second two-mode squeezer:
/// `σ → SσSᵀ`, mean `→ S·mean`.
pub fn apply_phase_sensitive(state: &GaussianState, spec: SqueezeSpec) -> Result<GaussianState> {
    if state.n_modes() != 2 {
        return Err(Error::WrongModeCount {
            expected: 2,
            actual: state.n_modes(),
        });
    }
    let s = two_mode_squeeze_symplectic(spec);
    let mut sigma = &s * state.covariance().matrix() * s.transpose();
    // Re-symmetrize so roundoff never trips the symmetry check downstream.
    sigma = (&sigma + sigma.transpose()) * 0.5;
    let mean = &s * state.mean();
    Ok(GaussianState::from_parts_unchecked(
        mean,
        CovarianceMatrix::new(sigma)?,
    ))
}

/// Squeeze magnitude `r″` of `S(r′e^{iθ′}) S(r e^{iθ})`, where
/// `cosh 2r″ = cosh 2r cosh 2r′ + sinh 2r sinh 2r′ cos α` and
/// `α = |θ − θ′|`.
///
/// Evaluated through the equivalent form
/// `sinh² r″ = sinh²(r − r′) + sinh 2r sinh 2r′ cos²(α/2)`, whose terms are
/// both non-negative, so the anti-aligned cancellation near `α = π` stays
/// accurate.
pub fn composed_squeeze_magnitude(r: f64, r_prime: f64, alpha: f64) -> f64 {
    let half_cos = (alpha / 2.0).cos();
    let sinh_sq = (r - r_prime).sinh().powi(2)
        + (2.0 * r).sinh() * (2.0 * r_prime).sinh() * half_cos * half_cos;
    sinh_sq.max(0.0).sqrt().asinh()
}
