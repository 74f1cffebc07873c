//! Entanglement of two-mode Gaussian states under linear amplifier noise.
//!
//! The crate models phase-insensitive amplifiers (both modes or one mode of
//! a squeezed pair) and phase-sensitive amplification by a second two-mode
//! squeezer as maps on covariance matrices, and quantifies the surviving
//! entanglement through the partial-transpose symplectic spectrum and the
//! logarithmic negativity. Critical gains and the critical phase mismatch
//! are available in closed form or by bisection, and two independent
//! integrators of the underlying master equation (quadrature moments and a
//! truncated Fock-space density matrix) cross-check the channel maps.
//!
//! Conventions: quadratures `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, ordered
//! `(x₁, p₁, x₂, p₂, …)`; vacuum covariance `I/2`; logarithms natural.

pub mod channels;
pub mod cli;
pub mod error;
pub mod oracles;
pub mod par;
pub mod states;
pub mod sweep;
pub mod symplectic;
pub mod thresholds;

pub use channels::{
    apply_phase_insensitive, apply_phase_sensitive, composed_squeeze_magnitude, AmplifierSpec,
    ModeSelection,
};
pub use error::{Error, Result};
pub use states::{
    entanglement_report, thermal_state, tmsv, wigner_density, EntanglementReport, GaussianState,
    SqueezeSpec,
};
pub use symplectic::{
    check_physicality, partial_transpose, pt_symplectic_eigenvalues_closed_form,
    symplectic_eigenvalues, CovarianceMatrix, SymplecticSpectrum,
};
