//! Command-line front end: `sweep`, `threshold` and `oracle-check`.
//!
//! Exit codes: 0 success, 1 oracle discrepancy or step-size failure,
//! 2 configuration error, 3 I/O error, 4 Fock truncation leakage.

pub mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::channels::{AmplifierSpec, ModeSelection};
use crate::error::Error;
use crate::oracles::{self, OdeConfig, COVARIANCE_AGREEMENT_TOL, LOG_NEGATIVITY_AGREEMENT_TOL};
use crate::par::Execution;
use crate::sweep::{self, format_sig9, LinearRange, Scenario, SweepSpec};
use crate::thresholds::{self, CriticalGain};
use config::{OracleSection, RunConfig, SelectionName, SweepSection};

/// Environment variable naming the directory for sweep output when no
/// explicit path is given.
pub const OUTPUT_DIR_ENV: &str = "AMPNOISE_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_LEAKAGE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ampnoise",
    version,
    about = "Entanglement of two-mode squeezed light under amplifier noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep gain (or phase mismatch) and write a CSV of nu_minus and E_N.
    Sweep(SweepArgs),
    /// Print the critical gain (or critical phase mismatch) for a scenario.
    Threshold(ThresholdArgs),
    /// Cross-check channel maps against the moment ODE and Fock-space oracle.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON run configuration; flags override its `sweep` section.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenario: Option<Scenario>,
    /// Input squeeze magnitude.
    #[arg(long)]
    pub r: Option<f64>,
    /// Input squeeze phase.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Comma-separated population parameters.
    #[arg(long, value_delimiter = ',')]
    pub eta: Option<Vec<f64>>,
    #[arg(long)]
    pub gain_min: Option<f64>,
    #[arg(long)]
    pub gain_max: Option<f64>,
    #[arg(long)]
    pub gain_steps: Option<usize>,
    /// Squeeze magnitude of the phase-sensitive amplifier.
    #[arg(long)]
    pub r_prime: Option<f64>,
    #[arg(long)]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub alpha_steps: Option<usize>,
    /// Output CSV path, or `-` for stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub scenario: Scenario,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    /// Amplifier squeeze, phase_sensitive only.
    #[arg(long)]
    pub r_prime: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// JSON run configuration; flags override its `oracle` section.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub gains: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub etas: Option<Vec<f64>>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Fixed Fock truncation per mode (default: chosen per grid point).
    #[arg(long)]
    pub dim_per_mode: Option<usize>,
    #[arg(long)]
    pub fock_dt: Option<f64>,
    #[arg(long)]
    pub ode_dt: Option<f64>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Threshold(args) => cmd_threshold(args, out),
        Command::OracleCheck(args) => cmd_oracle_check(args, out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn io(context: &str, e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{context}: {e}"),
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    match path {
        Some(path) => RunConfig::load(path).map_err(Failure::config),
        None => Ok(RunConfig::default()),
    }
}

/// Merges flags over the config's `sweep` section, filling defaults.
pub fn resolve_sweep(args: &SweepArgs, section: &SweepSection) -> (SweepSpec, Option<PathBuf>) {
    let spec = SweepSpec {
        scenario: args
            .scenario
            .or(section.scenario)
            .unwrap_or(Scenario::Symmetric),
        r: args.r.or(section.r).unwrap_or(1.0),
        theta: args.theta.or(section.theta).unwrap_or(0.0),
        eta_list: args
            .eta
            .clone()
            .or_else(|| section.eta.clone())
            .unwrap_or_else(|| vec![0.0]),
        gain: LinearRange {
            min: args.gain_min.or(section.gain_min).unwrap_or(1.0),
            max: args.gain_max.or(section.gain_max).unwrap_or(3.0),
            steps: args.gain_steps.or(section.gain_steps).unwrap_or(201),
        },
        r_prime: args.r_prime.or(section.r_prime).unwrap_or(0.5),
        alpha: LinearRange {
            min: args.alpha_min.or(section.alpha_min).unwrap_or(0.0),
            max: args
                .alpha_max
                .or(section.alpha_max)
                .unwrap_or(std::f64::consts::PI),
            steps: args.alpha_steps.or(section.alpha_steps).unwrap_or(181),
        },
    };
    let output = args.output.clone().or_else(|| section.output.clone());
    (spec, output)
}

fn default_output(scenario: Scenario) -> PathBuf {
    let dir = std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    dir.join(format!("sweep_{scenario}.csv"))
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> CmdResult {
    let config = load_config(args.config.as_deref())?;
    let (spec, output) = resolve_sweep(&args, &config.sweep.unwrap_or_default());
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let rows =
        sweep::evaluate_sweep(&spec, execution).map_err(|e| Failure::config(e.to_string()))?;

    let output = output.unwrap_or_else(|| default_output(spec.scenario));
    if output.as_os_str() == "-" {
        sweep::write_csv(&rows, &mut *out).map_err(|e| Failure::io("writing stdout", e))?;
    } else {
        let file = File::create(&output)
            .map_err(|e| Failure::io(&format!("creating {}", output.display()), e))?;
        sweep::write_csv(&rows, BufWriter::new(file))
            .map_err(|e| Failure::io(&format!("writing {}", output.display()), e))?;
        writeln!(out, "wrote {} rows to {}", rows.len(), output.display())
            .map_err(|e| Failure::io("writing stdout", e))?;
    }
    Ok(EXIT_OK)
}

fn cmd_threshold(args: ThresholdArgs, out: &mut dyn Write) -> CmdResult {
    let line = match args.scenario {
        Scenario::PhaseSensitive => {
            let r_prime = args
                .r_prime
                .ok_or_else(|| Failure::config("phase_sensitive threshold needs --r-prime"))?;
            let alpha0 = thresholds::critical_phase_mismatch(args.r, r_prime)
                .map_err(|e| Failure::config(e.to_string()))?;
            format!("alpha0={alpha0:.6}")
        }
        scenario => {
            let result = if scenario == Scenario::Symmetric {
                thresholds::symmetric_critical_gain(args.r, args.eta)
            } else {
                thresholds::asymmetric_critical_gain(args.r, args.eta)
            }
            .map_err(|e| Failure::config(e.to_string()))?;
            let gain = match result.critical_gain {
                CriticalGain::Finite(g) => format!("{g:.6}"),
                CriticalGain::Infinite => "inf".to_string(),
            };
            format!("critical_gain={gain} solver={}", result.solver)
        }
    };
    writeln!(out, "{line}").map_err(|e| Failure::io("writing stdout", e))?;
    Ok(EXIT_OK)
}

/// Oracle grid after merging flags, config and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleGrid {
    pub r: f64,
    pub gains: Vec<f64>,
    pub etas: Vec<f64>,
    pub selections: Vec<SelectionName>,
    pub kappa: f64,
    pub dim_per_mode: Option<usize>,
    pub fock_dt: f64,
    pub ode_dt: f64,
}

pub fn resolve_oracle(args: &OracleArgs, section: &OracleSection) -> OracleGrid {
    OracleGrid {
        r: args.r.or(section.r).unwrap_or(0.3),
        gains: args
            .gains
            .clone()
            .or_else(|| section.gains.clone())
            .unwrap_or_else(|| vec![1.0, 1.3, 1.7]),
        etas: args
            .etas
            .clone()
            .or_else(|| section.etas.clone())
            .unwrap_or_else(|| vec![0.0, 0.5]),
        selections: section
            .selections
            .clone()
            .unwrap_or_else(|| vec![SelectionName::Symmetric, SelectionName::Asymmetric]),
        kappa: args.kappa.or(section.kappa).unwrap_or(1.0),
        dim_per_mode: args.dim_per_mode.or(section.dim_per_mode),
        fock_dt: args.fock_dt.or(section.fock_dt).unwrap_or(1e-3),
        ode_dt: args
            .ode_dt
            .or(section.ode_dt)
            .unwrap_or(OdeConfig::default().dt),
    }
}

fn cmd_oracle_check(args: OracleArgs, out: &mut dyn Write) -> CmdResult {
    let config = load_config(args.config.as_deref())?;
    let grid = resolve_oracle(&args, &config.oracle.unwrap_or_default());
    if grid.gains.is_empty() || grid.etas.is_empty() || grid.selections.is_empty() {
        return Err(Failure::config("oracle grid is empty"));
    }
    let print = |out: &mut dyn Write, line: String| {
        writeln!(out, "{line}").map_err(|e| Failure::io("writing stdout", e))
    };

    let mut max_cov = 0.0f64;
    let mut max_en = 0.0f64;
    for &selection_name in &grid.selections {
        let (label, selection) = match selection_name {
            SelectionName::Symmetric => ("symmetric", ModeSelection::symmetric()),
            SelectionName::Asymmetric => ("asymmetric", ModeSelection::asymmetric()),
        };
        for &eta in &grid.etas {
            for &gain in &grid.gains {
                let amplifier =
                    AmplifierSpec::new(gain, eta).map_err(|e| Failure::config(e.to_string()))?;
                let point = oracles::equivalence_point(
                    grid.r,
                    amplifier,
                    &selection,
                    grid.kappa,
                    grid.dim_per_mode,
                    grid.fock_dt,
                    OdeConfig { dt: grid.ode_dt },
                )
                .map_err(|e| oracle_failure(e, label, gain, eta))?;
                max_cov = max_cov.max(point.covariance_discrepancy);
                max_en = max_en.max(point.log_negativity_discrepancy());
                print(
                    out,
                    format!(
                        "selection={label} r={} eta={} gain={} dim={} cov_discrepancy={:.3e} \
                         en_gaussian={} en_fock={} en_discrepancy={:.3e} leakage={:.3e}",
                        format_sig9(grid.r),
                        format_sig9(eta),
                        format_sig9(gain),
                        point.dim_per_mode,
                        point.covariance_discrepancy,
                        format_sig9(point.gaussian_log_negativity),
                        format_sig9(point.fock.log_negativity),
                        point.log_negativity_discrepancy(),
                        point.fock.leakage,
                    ),
                )?;
            }
        }
    }

    let pass = max_cov <= COVARIANCE_AGREEMENT_TOL && max_en <= LOG_NEGATIVITY_AGREEMENT_TOL;
    print(
        out,
        format!(
            "max_covariance_discrepancy={max_cov:.3e} (tol {COVARIANCE_AGREEMENT_TOL:e}) \
             max_log_negativity_discrepancy={max_en:.3e} (tol {LOG_NEGATIVITY_AGREEMENT_TOL:e})"
        ),
    )?;
    print(out, if pass { "PASS".into() } else { "FAIL".into() })?;
    Ok(if pass { EXIT_OK } else { EXIT_DISCREPANCY })
}

fn oracle_failure(e: Error, label: &str, gain: f64, eta: f64) -> Failure {
    let at = format!("selection={label} gain={gain} eta={eta}");
    let code = match e {
        Error::StepTooLarge { .. } | Error::UnstableStep { .. } => EXIT_DISCREPANCY,
        Error::TruncationLeakage { .. } => EXIT_LEAKAGE,
        Error::NonHermitianDrift { .. } | Error::TraceDrift { .. } => EXIT_DISCREPANCY,
        _ => EXIT_CONFIG,
    };
    let note = match e {
        Error::StepTooLarge { .. } => "StepTooLarge: ",
        Error::UnstableStep { .. } => "StepTooLarge (RK4 stability): ",
        Error::TruncationLeakage { .. } => "TruncationLeakage: ",
        _ => "",
    };
    Failure {
        code,
        message: format!("{note}{e} at {at}"),
    }
}
