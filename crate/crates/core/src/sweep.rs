//! Parameter sweeps over amplifier gain (or phase mismatch) and their CSV
//! serialization.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Deserialize;

use crate::channels::{
    apply_phase_insensitive, apply_phase_sensitive, AmplifierSpec, ModeSelection,
};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::states::{entanglement_report, tmsv, EntanglementReport, SqueezeSpec};

pub const CSV_HEADER: &str = "scenario,r,theta,eta,gain,nu_minus,log_negativity,entangled";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Phase-insensitive amplification of both modes.
    Symmetric,
    /// Phase-insensitive amplification of mode `a` only.
    Asymmetric,
    /// A second two-mode squeezer with phase mismatch `α`.
    PhaseSensitive,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Symmetric => "symmetric",
            Scenario::Asymmetric => "asymmetric",
            Scenario::PhaseSensitive => "phase_sensitive",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "symmetric" => Ok(Scenario::Symmetric),
            "asymmetric" => Ok(Scenario::Asymmetric),
            "phase_sensitive" | "phase-sensitive" => Ok(Scenario::PhaseSensitive),
            other => Err(format!(
                "unknown scenario `{other}` (expected symmetric, asymmetric or phase_sensitive)"
            )),
        }
    }
}

/// Evenly spaced closed interval `[min, max]` with `steps ≥ 2` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl LinearRange {
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + i as f64 * (self.max - self.min) / (self.steps - 1) as f64
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "{what} steps must be at least 2, got {}",
                self.steps
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.max >= self.min) {
            return Err(Error::InvalidParameter(format!(
                "{what} range [{}, {}] is not a finite increasing interval",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

/// What to sweep.
///
/// Phase-insensitive scenarios cover every `(η, gain)` pair with `η` as the
/// outer loop. The phase-sensitive scenario sweeps the mismatch `α` between
/// the input squeeze phase `theta` and the amplifier's, at squeeze `r_prime`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub r: f64,
    pub theta: f64,
    pub eta_list: Vec<f64>,
    pub gain: LinearRange,
    pub r_prime: f64,
    pub alpha: LinearRange,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        SqueezeSpec::new(self.r, self.theta)?;
        if !self.theta.is_finite() {
            return Err(Error::InvalidParameter("theta must be finite".into()));
        }
        match self.scenario {
            Scenario::Symmetric | Scenario::Asymmetric => {
                self.gain.validate("gain")?;
                if self.gain.min < 1.0 {
                    return Err(Error::GainBelowUnity(self.gain.min));
                }
                if self.eta_list.is_empty() {
                    return Err(Error::InvalidParameter("eta list is empty".into()));
                }
                for &eta in &self.eta_list {
                    AmplifierSpec::new(1.0, eta)?;
                }
            }
            Scenario::PhaseSensitive => {
                self.alpha.validate("alpha")?;
                SqueezeSpec::new(self.r_prime, 0.0)?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match self.scenario {
            Scenario::PhaseSensitive => self.alpha.steps,
            _ => self.eta_list.len() * self.gain.steps,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One CSV row. For the phase-sensitive scenario `theta` holds the mismatch
/// `α`, `eta` is zero and `gain` is the squeezer's intensity gain
/// `cosh² r′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub scenario: Scenario,
    pub r: f64,
    pub theta: f64,
    pub eta: f64,
    pub gain: f64,
    pub report: EntanglementReport,
}

fn evaluate_point(spec: &SweepSpec, index: usize) -> Result<SweepRow> {
    let input = tmsv(SqueezeSpec::new(spec.r, spec.theta)?);
    match spec.scenario {
        Scenario::Symmetric | Scenario::Asymmetric => {
            let eta = spec.eta_list[index / spec.gain.steps];
            let gain = spec.gain.point(index % spec.gain.steps);
            let selection = if spec.scenario == Scenario::Symmetric {
                ModeSelection::symmetric()
            } else {
                ModeSelection::asymmetric()
            };
            let out = apply_phase_insensitive(&input, AmplifierSpec::new(gain, eta)?, &selection)?;
            Ok(SweepRow {
                scenario: spec.scenario,
                r: spec.r,
                theta: spec.theta,
                eta,
                gain,
                report: entanglement_report(&out)?,
            })
        }
        Scenario::PhaseSensitive => {
            let alpha = spec.alpha.point(index);
            let amplifier = SqueezeSpec::new(spec.r_prime, spec.theta + alpha)?;
            let out = apply_phase_sensitive(&input, amplifier)?;
            Ok(SweepRow {
                scenario: spec.scenario,
                r: spec.r,
                theta: alpha,
                eta: 0.0,
                gain: spec.r_prime.cosh().powi(2),
                report: entanglement_report(&out)?,
            })
        }
    }
}

/// Evaluates every grid point; rows come back in grid order whatever the
/// execution mode.
pub fn evaluate_sweep(spec: &SweepSpec, execution: Execution) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    par::map_indexed(spec.len(), execution, |i| evaluate_point(spec, i))
        .into_iter()
        .collect()
}

/// Fixed-width rendering with nine significant digits: plain decimal for
/// exponents in `[-5, 8]`, scientific otherwise; `inf`/`-inf`/`nan`
/// literally.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    let sci = format!("{:.8e}", x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-5..=8).contains(&exponent) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if exponent >= 0 {
        let split = exponent as usize + 1;
        let (int, frac) = digits.split_at(split);
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exponent - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    let mut buffer = String::with_capacity(96 * (rows.len() + 1));
    buffer.push_str(CSV_HEADER);
    buffer.push('\n');
    for row in rows {
        let fields = [
            row.scenario.as_str().to_string(),
            format_sig9(row.r),
            format_sig9(row.theta),
            format_sig9(row.eta),
            format_sig9(row.gain),
            format_sig9(row.report.nu_minus),
            format_sig9(row.report.log_negativity),
            row.report.entangled.to_string(),
        ];
        buffer.push_str(&fields.join(","));
        buffer.push('\n');
    }
    out.write_all(buffer.as_bytes())?;
    out.flush()
}
