//! Critical gains and the critical phase mismatch for an amplified
//! two-mode squeezed vacuum.

use std::fmt;

use crate::error::{Error, Result};

/// Largest gain probed while bracketing a threshold.
pub const BRACKET_LIMIT: f64 = 1e12;
/// Required `|ν̃₋(g*) − 1/2|` at a bisection root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    ClosedForm,
    Bisection,
}

impl Solver {
    pub fn as_str(&self) -> &'static str {
        match self {
            Solver::ClosedForm => "closed_form",
            Solver::Bisection => "bisection",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A critical gain, or the statement that none exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalGain {
    Finite(f64),
    /// Entanglement survives at every gain.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub critical_gain: CriticalGain,
    pub solver: Solver,
}

impl ThresholdResult {
    pub fn finite(&self) -> bool {
        matches!(self.critical_gain, CriticalGain::Finite(_))
    }

    /// The critical gain, with `f64::INFINITY` standing in for
    /// [`CriticalGain::Infinite`].
    pub fn gain_or_inf(&self) -> f64 {
        match self.critical_gain {
            CriticalGain::Finite(g) => g,
            CriticalGain::Infinite => f64::INFINITY,
        }
    }
}

fn check_nonnegative(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and non-negative, got {value}"
        )))
    }
}

/// `ν̃₋` of a squeezed vacuum with both modes amplified:
/// `[g(e^{−2r} + 1 + 2η) − (1 + 2η)]/2`.
pub fn symmetric_nu_minus(r: f64, gain: f64, eta: f64) -> f64 {
    let m = 1.0 + 2.0 * eta;
    (gain * ((-2.0 * r).exp() + m) - m) / 2.0
}

/// `ν̃₋` of a squeezed vacuum with only mode `a` amplified.
///
/// The textbook expression `¼[P − √Q]` with
/// `P = (g+1)cosh 2r + (1+2η)(g−1)` and
/// `Q = (g−1)²(cosh 2r + 1 + 2η)² + 4g sinh² 2r`
/// loses all precision at large gain. Since `P² − Q = 4[(g−1)(1 + m cosh 2r) + 1]`
/// we evaluate `[(g−1)(1 + m cosh 2r) + 1]/(P + √Q)` instead.
pub fn asymmetric_nu_minus(r: f64, gain: f64, eta: f64) -> f64 {
    let m = 1.0 + 2.0 * eta;
    let (c, s) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let u = gain - 1.0;
    let p = u * (c + m) + 2.0 * c;
    let q = (u * (c + m)).powi(2) + 4.0 * gain * s * s;
    (u * (1.0 + m * c) + 1.0) / (p + q.sqrt())
}

/// Closed-form symmetric threshold `(2 + 2η)/(1 + 2η + e^{−2r})`.
pub fn symmetric_critical_gain(r: f64, eta: f64) -> Result<ThresholdResult> {
    check_nonnegative("r", r)?;
    check_nonnegative("eta", eta)?;
    let g = (2.0 + 2.0 * eta) / (1.0 + 2.0 * eta + (-2.0 * r).exp());
    Ok(ThresholdResult {
        critical_gain: CriticalGain::Finite(g),
        solver: Solver::ClosedForm,
    })
}

/// Asymmetric threshold by bisection. For `η = 0` no threshold exists.
pub fn asymmetric_critical_gain(r: f64, eta: f64) -> Result<ThresholdResult> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "r must be finite and positive, got {r}"
        )));
    }
    check_nonnegative("eta", eta)?;
    if eta == 0.0 {
        return Ok(ThresholdResult {
            critical_gain: CriticalGain::Infinite,
            solver: Solver::Bisection,
        });
    }
    let g = critical_gain_by_bisection(|g| Ok(asymmetric_nu_minus(r, g, eta)))?;
    Ok(ThresholdResult {
        critical_gain: CriticalGain::Finite(g),
        solver: Solver::Bisection,
    })
}

/// Root of `nu_minus(g) = 1/2` for a `nu_minus` increasing in `g`.
///
/// Brackets by doubling from `g = 1` until `nu_minus ≥ 1/2`, giving up at
/// [`BRACKET_LIMIT`], then bisects down to roundoff. Fails with
/// [`Error::BracketFailure`] if no sign change is found.
pub fn critical_gain_by_bisection<F>(nu_minus: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut lo = 1.0;
    if nu_minus(lo)? >= 0.5 {
        return Ok(lo);
    }
    let mut hi = 2.0;
    while nu_minus(hi)? < 0.5 {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_LIMIT {
            return Err(Error::BracketFailure {
                limit: BRACKET_LIMIT,
            });
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if nu_minus(mid)? < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let residual = (nu_minus(root)? - 0.5).abs();
    if residual > ROOT_RESIDUAL_TOL {
        return Err(Error::InvalidParameter(format!(
            "bisection stalled with residual {residual:e}"
        )));
    }
    Ok(root)
}

/// Gain below which single-mode squeezing and sub-Poissonian statistics
/// survive phase-insensitive amplification: `2(1 + η)/(1 + 2η)`.
pub fn hfm_nonclassicality_bound(eta: f64) -> Result<f64> {
    check_nonnegative("eta", eta)?;
    Ok(2.0 * (1.0 + eta) / (1.0 + 2.0 * eta))
}

/// Largest phase mismatch `α₀` for which a phase-sensitive amplifier does
/// not reduce the squeeze below `max(r, r′)`.
pub fn critical_phase_mismatch(r: f64, r_prime: f64) -> Result<f64> {
    if !(r > 0.0 && r_prime > 0.0 && r.is_finite() && r_prime.is_finite()) {
        return Err(Error::NonPositiveSqueeze { r, r_prime });
    }
    let (large, small) = if r >= r_prime {
        (r, r_prime)
    } else {
        (r_prime, r)
    };
    let cos_alpha0 = -small.tanh() / (2.0 * large).tanh();
    Ok(cos_alpha0.acos())
}
