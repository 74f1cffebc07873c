//! Independent checks of the Gaussian channel maps, both driven directly by
//! the inverted-atom master equation
//!
//! ```text
//! dρ/dt = −κN₁(aa†ρ − 2a†ρa + ρaa†) − κN₂(a†aρ − 2aρa† + ρa†a)
//! ```
//!
//! applied independently to every amplified mode.
//!
//! * [`moments`] integrates the closed linear ODE for the quadrature means
//!   and covariances.
//! * [`fock`] integrates the density matrix itself in a truncated Fock basis
//!   and computes the logarithmic negativity from the spectrum of its
//!   partial transpose, with no Gaussian assumption.

pub mod fock;
pub mod moments;

pub use fock::{fock_evolve_negativity, FockConfig, FockNegativity};
pub use moments::{covariance_ode_evolve, OdeConfig};

use crate::channels::{apply_phase_insensitive, AmplifierSpec, ModeSelection};
use crate::error::{Error, Result};
use crate::states::{entanglement_report, tmsv, SqueezeSpec};

/// Largest covariance-entry gap allowed between channel map and moment ODE.
pub const COVARIANCE_AGREEMENT_TOL: f64 = 1e-8;
/// Largest logarithmic-negativity gap allowed between Gaussian formalism and
/// the Fock-space oracle.
pub const LOG_NEGATIVITY_AGREEMENT_TOL: f64 = 2e-3;

/// Inverted two-level-atom bath: coupling `κ`, excited and ground
/// populations `N₁ > N₂ ≥ 0`, and interaction time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    kappa: f64,
    n_excited: f64,
    n_ground: f64,
    time: f64,
}

impl BathSpec {
    pub fn new(kappa: f64, n_excited: f64, n_ground: f64, time: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidBath(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        if !(n_ground >= 0.0 && n_excited > n_ground && n_excited.is_finite()) {
            return Err(Error::InvalidBath(format!(
                "need N1 > N2 >= 0, got N1 = {n_excited}, N2 = {n_ground}"
            )));
        }
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::InvalidBath(format!(
                "time must be non-negative, got {time}"
            )));
        }
        Ok(Self {
            kappa,
            n_excited,
            n_ground,
            time,
        })
    }

    /// The bath realizing a given amplifier with `N₁ − N₂ = 1`.
    pub fn for_amplifier(spec: AmplifierSpec, kappa: f64) -> Result<Self> {
        let time = spec.gain().ln() / (2.0 * kappa);
        Self::new(kappa, 1.0 + spec.eta(), spec.eta(), time)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n_excited(&self) -> f64 {
        self.n_excited
    }

    pub fn n_ground(&self) -> f64 {
        self.n_ground
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Amplitude growth rate `κ(N₁ − N₂)` of each quadrature.
    pub fn drift(&self) -> f64 {
        self.kappa * (self.n_excited - self.n_ground)
    }

    /// Variance injected per unit time into each quadrature, `κ(N₁ + N₂)`.
    pub fn diffusion(&self) -> f64 {
        self.kappa * (self.n_excited + self.n_ground)
    }

    /// Intensity gain `exp(2κt(N₁ − N₂))`.
    pub fn gain(&self) -> f64 {
        (2.0 * self.drift() * self.time).exp()
    }

    /// `N₂/(N₁ − N₂)`.
    pub fn eta(&self) -> f64 {
        self.n_ground / (self.n_excited - self.n_ground)
    }

    pub fn amplifier(&self) -> Result<AmplifierSpec> {
        AmplifierSpec::new(self.gain(), self.eta())
    }
}

/// One point of the channel / moment-ODE / Fock-space comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalencePoint {
    pub r: f64,
    pub amplifier: AmplifierSpec,
    pub dim_per_mode: usize,
    /// Largest covariance-entry difference, channel map vs moment ODE.
    pub covariance_discrepancy: f64,
    /// Logarithmic negativity of the channel output.
    pub gaussian_log_negativity: f64,
    pub fock: FockNegativity,
}

impl EquivalencePoint {
    pub fn log_negativity_discrepancy(&self) -> f64 {
        (self.gaussian_log_negativity - self.fock.log_negativity).abs()
    }

    pub fn within_tolerance(&self) -> bool {
        self.covariance_discrepancy <= COVARIANCE_AGREEMENT_TOL
            && self.log_negativity_discrepancy() <= LOG_NEGATIVITY_AGREEMENT_TOL
    }
}

/// Runs all three routes for an amplified squeezed vacuum `S(r)|0,0⟩`.
///
/// `dim_per_mode = None` picks [`FockConfig::adequate_dimension`].
pub fn equivalence_point(
    r: f64,
    amplifier: AmplifierSpec,
    selection: &ModeSelection,
    kappa: f64,
    dim_per_mode: Option<usize>,
    fock_dt: f64,
    ode: OdeConfig,
) -> Result<EquivalencePoint> {
    let input = tmsv(SqueezeSpec::new(r, 0.0)?);
    let bath = BathSpec::for_amplifier(amplifier, kappa)?;

    let channel = apply_phase_insensitive(&input, amplifier, selection)?;
    let evolved = covariance_ode_evolve(&input, bath, selection, ode)?;
    let covariance_discrepancy = (channel.covariance().matrix() - evolved.covariance().matrix())
        .abs()
        .max();

    let dim =
        dim_per_mode.unwrap_or_else(|| FockConfig::adequate_dimension(r, amplifier, selection));
    let config = FockConfig {
        dim_per_mode: dim,
        dt: fock_dt,
        ..FockConfig::default()
    };
    let fock = fock_evolve_negativity(r, bath, selection, config)?;

    Ok(EquivalencePoint {
        r,
        amplifier,
        dim_per_mode: dim,
        covariance_discrepancy,
        gaussian_log_negativity: entanglement_report(&channel)?.log_negativity,
        fock,
    })
}

/// Number of equal RK4 steps covering `time` with steps no longer than `dt`.
pub(crate) fn step_count(time: f64, dt: f64) -> usize {
    if time == 0.0 {
        0
    } else {
        (time / dt).ceil().max(1.0) as usize
    }
}
