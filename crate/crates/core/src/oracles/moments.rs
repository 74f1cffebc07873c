//! First and second quadrature moments under the amplifier master equation.
//!
//! Tracing the master equation against `a` and `a†a` gives
//!
//! ```text
//! d⟨a⟩/dt   = κ(N₁ − N₂)⟨a⟩
//! d⟨a†a⟩/dt = 2κ(N₁ − N₂)⟨a†a⟩ + 2κN₁
//! ```
//!
//! (and `d⟨a²⟩/dt = 2κ(N₁ − N₂)⟨a²⟩`). In quadrature form, with
//! `k = κ(N₁ − N₂)` on every amplified quadrature and zero elsewhere,
//!
//! ```text
//! d mean/dt = K·mean
//! dσ/dt     = Kσ + σK + D,   D = κ(N₁ + N₂) on amplified diagonals
//! ```
//!
//! whose exact solution is the phase-insensitive channel with
//! `g = exp(2κt(N₁ − N₂))`, `η = N₂/(N₁ − N₂)`. Here the ODE is integrated
//! numerically with RK4 so that the comparison is not circular.

use nalgebra::{DMatrix, DVector};

use super::{step_count, BathSpec};
use crate::channels::ModeSelection;
use crate::error::{Error, Result};
use crate::states::GaussianState;
use crate::symplectic::CovarianceMatrix;

/// Largest entry change tolerated between the `dt` and `dt/2` runs.
pub const STEP_HALVING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    /// Maximum RK4 step.
    pub dt: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { dt: 1e-3 }
    }
}

struct Moments {
    mean: DVector<f64>,
    sigma: DMatrix<f64>,
}

struct Generator {
    rates: DVector<f64>,
    diffusion: DVector<f64>,
}

impl Generator {
    fn apply(&self, m: &Moments) -> Moments {
        let mean = self.rates.component_mul(&m.mean);
        let mut sigma = m.sigma.clone();
        for i in 0..sigma.nrows() {
            for j in 0..sigma.ncols() {
                sigma[(i, j)] *= self.rates[i] + self.rates[j];
            }
            sigma[(i, i)] += self.diffusion[i];
        }
        Moments { mean, sigma }
    }
}

fn axpy(base: &Moments, h: f64, slope: &Moments) -> Moments {
    Moments {
        mean: &base.mean + &slope.mean * h,
        sigma: &base.sigma + &slope.sigma * h,
    }
}

fn integrate(start: &Moments, generator: &Generator, time: f64, steps: usize) -> Moments {
    let mut y = Moments {
        mean: start.mean.clone(),
        sigma: start.sigma.clone(),
    };
    if steps == 0 {
        return y;
    }
    let h = time / steps as f64;
    for _ in 0..steps {
        let k1 = generator.apply(&y);
        let k2 = generator.apply(&axpy(&y, h / 2.0, &k1));
        let k3 = generator.apply(&axpy(&y, h / 2.0, &k2));
        let k4 = generator.apply(&axpy(&y, h, &k3));
        y.mean += (k1.mean + k2.mean * 2.0 + k3.mean * 2.0 + k4.mean) * (h / 6.0);
        y.sigma += (k1.sigma + k2.sigma * 2.0 + k3.sigma * 2.0 + k4.sigma) * (h / 6.0);
    }
    y
}

/// Evolves a Gaussian state's moments through the bath on the selected
/// modes.
///
/// Runs once with steps of at most `config.dt` and once with half that; the
/// finer result is returned, or [`Error::StepTooLarge`] if any mean or
/// covariance entry moved by more than [`STEP_HALVING_TOL`].
pub fn covariance_ode_evolve(
    state: &GaussianState,
    bath: BathSpec,
    selection: &ModeSelection,
    config: OdeConfig,
) -> Result<GaussianState> {
    selection.validate_for(state.n_modes())?;
    if !(config.dt > 0.0 && config.dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive, got {}",
            config.dt
        )));
    }
    let dim = 2 * state.n_modes();
    let amplified = |k: usize| selection.contains(k / 2);
    let generator = Generator {
        rates: DVector::from_fn(dim, |k, _| if amplified(k) { bath.drift() } else { 0.0 }),
        diffusion: DVector::from_fn(
            dim,
            |k, _| if amplified(k) { bath.diffusion() } else { 0.0 },
        ),
    };
    let start = Moments {
        mean: state.mean().clone(),
        sigma: state.covariance().matrix().clone(),
    };

    let steps = step_count(bath.time(), config.dt);
    let coarse = integrate(&start, &generator, bath.time(), steps);
    let fine = integrate(&start, &generator, bath.time(), 2 * steps);

    let change = (&coarse.sigma - &fine.sigma)
        .abs()
        .max()
        .max((&coarse.mean - &fine.mean).abs().max());
    if change > STEP_HALVING_TOL {
        return Err(Error::StepTooLarge { change });
    }

    let sigma = (&fine.sigma + fine.sigma.transpose()) * 0.5;
    Ok(GaussianState::from_parts_unchecked(
        fine.mean,
        CovarianceMatrix::new(sigma)?,
    ))
}
