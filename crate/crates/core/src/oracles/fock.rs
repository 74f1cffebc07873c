//! Truncated Fock-space integration of the amplifier master equation for
//! two modes, with entanglement read off the partially transposed density
//! matrix.
//!
//! Basis states `|p, q⟩` (mode `a` in `p`, mode `b` in `q`) are indexed
//! `p·d + q` for truncation `d` per mode. Ladder operators are the truncated
//! `d × d` matrices, so every term of the generator is traceless and the
//! trace is conserved exactly; the price is that population reaching the
//! top level piles up there, which the leakage guard detects.

use nalgebra::{Complex, DMatrix};

use super::{step_count, BathSpec};
use crate::channels::{AmplifierSpec, ModeSelection};
use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Top-two-level population above which a run is rejected.
pub const LEAKAGE_LIMIT: f64 = 1e-6;
/// Allowed deviation from hermiticity during integration.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Allowed deviation of the trace from 1 during integration.
pub const TRACE_TOL: f64 = 1e-9;

// RK4 is stable for real negative eigenvalues down to about -2.78.
const RK4_STABILITY: f64 = 2.78;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig {
    pub dim_per_mode: usize,
    pub dt: f64,
    pub method: Integrator,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            dim_per_mode: 12,
            dt: 1e-3,
            method: Integrator::Rk4,
        }
    }
}

impl FockConfig {
    pub fn with_dim(dim_per_mode: usize) -> Self {
        Self {
            dim_per_mode,
            ..Self::default()
        }
    }

    /// Smallest truncation whose predicted top-two-level population stays a
    /// decade under [`LEAKAGE_LIMIT`] after amplifying a squeezed vacuum.
    ///
    /// Every mode of an amplified squeezed vacuum is thermal with mean
    /// occupation `g·sinh²r + (1+η)(g−1)`; the tail of a thermal
    /// distribution from level `n` up is `(n̄/(n̄+1))^n`.
    pub fn adequate_dimension(r: f64, spec: AmplifierSpec, selection: &ModeSelection) -> usize {
        let input = r.sinh().powi(2);
        let amplified = spec.gain() * input + (1.0 + spec.eta()) * (spec.gain() - 1.0);
        let occupation = |mode| {
            if selection.contains(mode) {
                amplified
            } else {
                input
            }
        };
        let tail = |nbar: f64, level: usize| (nbar / (nbar + 1.0)).powi(level as i32);
        (4..)
            .find(|&d| {
                tail(occupation(0), d - 2) + tail(occupation(1), d - 2) <= 0.1 * LEAKAGE_LIMIT
            })
            .expect("geometric tail eventually drops below the limit")
    }

    fn validate(&self) -> Result<()> {
        if self.dim_per_mode < 2 {
            return Err(Error::InvalidFockConfig(format!(
                "dim_per_mode must be at least 2, got {}",
                self.dim_per_mode
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidFockConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }
}

/// Outcome of a Fock-space run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockNegativity {
    /// `ln(1 + 2·negativity)`.
    pub log_negativity: f64,
    /// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_b}`.
    pub negativity: f64,
    /// Population with either mode in one of its top two levels.
    pub leakage: f64,
    /// Largest `|Tr ρ − 1|` seen during integration.
    pub max_trace_deviation: f64,
    /// Largest `|ρ − ρ†|` entry seen during integration.
    pub max_hermiticity_deviation: f64,
}

/// Two-mode density matrix in a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_per_mode: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// `S(r e^{iθ})|0,0⟩ = Σ (e^{iθ} tanh r)ⁿ / cosh r |n,n⟩`, truncated and
    /// renormalized.
    pub fn tmsv(r: f64, theta: f64, dim_per_mode: usize) -> Self {
        let d = dim_per_mode;
        let total = d * d;
        let lambda = C64::from_polar(r.tanh(), theta);
        let mut amplitudes: Vec<C64> = (0..d).map(|n| lambda.powu(n as u32) / r.cosh()).collect();
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|c| *c /= norm);

        let mut data = vec![C64::new(0.0, 0.0); total * total];
        for (n, cn) in amplitudes.iter().enumerate() {
            for (m, cm) in amplitudes.iter().enumerate() {
                data[(n * d + n) * total + (m * d + m)] = cn * cm.conj();
            }
        }
        Self {
            dim_per_mode: d,
            data,
        }
    }

    pub fn dim_per_mode(&self) -> usize {
        self.dim_per_mode
    }

    fn total_dim(&self) -> usize {
        self.dim_per_mode * self.dim_per_mode
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.total_dim() + col]
    }

    pub fn trace(&self) -> C64 {
        let n = self.total_dim();
        (0..n).map(|i| self.data[i * n + i]).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.total_dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    /// Population with either mode in its top two levels.
    pub fn leakage(&self) -> f64 {
        let d = self.dim_per_mode;
        let n = self.total_dim();
        let top = d.saturating_sub(2);
        (0..n)
            .filter(|&i| i / d >= top || i % d >= top)
            .map(|i| self.data[i * n + i].re)
            .sum()
    }

    /// `⟨a†a⟩` for mode 0 or `⟨b†b⟩` for mode 1.
    pub fn mean_photon_number(&self, mode: usize) -> f64 {
        let d = self.dim_per_mode;
        let n = self.total_dim();
        (0..n)
            .map(|i| {
                let level = if mode == 0 { i / d } else { i % d };
                level as f64 * self.data[i * n + i].re
            })
            .sum()
    }

    /// Partial transpose on mode `b`: `⟨p,q|ρ^{T_b}|s,t⟩ = ⟨p,t|ρ|s,q⟩`.
    pub fn partial_transpose(&self) -> DMatrix<C64> {
        let d = self.dim_per_mode;
        let n = self.total_dim();
        DMatrix::from_fn(n, n, |i, j| {
            let (p, q) = (i / d, i % d);
            let (s, t) = (j / d, j % d);
            self.data[(p * d + t) * n + (s * d + q)]
        })
    }

    /// Sum of the magnitudes of the negative eigenvalues of `ρ^{T_b}`.
    pub fn negativity(&self) -> f64 {
        let pt = self.partial_transpose();
        let hermitian = (&pt + pt.adjoint()) * C64::new(0.5, 0.0);
        hermitian
            .symmetric_eigenvalues()
            .iter()
            .filter(|&&v| v < 0.0)
            .map(|v| -v)
            .sum()
    }

    /// Fourth cumulant of the quadrature `Q = c·(x₁, p₁, x₂, p₂)`.
    pub fn quadrature_fourth_cumulant(&self, coefficients: [f64; 4]) -> f64 {
        let [m1, m2, m3, m4] = self.quadrature_moments(coefficients);
        m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 - 6.0 * m1.powi(4)
    }

    /// `⟨Q⟩, ⟨Q²⟩, ⟨Q³⟩, ⟨Q⁴⟩`.
    pub fn quadrature_moments(&self, coefficients: [f64; 4]) -> [f64; 4] {
        let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;
        // Q = Σ α a + α* a†, with α = (c_x − i c_p)/√2 per mode.
        let alphas = [
            C64::new(coefficients[0], -coefficients[1]) * sqrt_half,
            C64::new(coefficients[2], -coefficients[3]) * sqrt_half,
        ];
        let mut moments = [0.0; 4];
        let mut current = self.data.clone();
        let n = self.total_dim();
        for moment in moments.iter_mut() {
            current = self.apply_quadrature_left(&current, alphas);
            *moment = (0..n).map(|i| current[i * n + i].re).sum();
        }
        moments
    }

    fn apply_quadrature_left(&self, m: &[C64], alphas: [C64; 2]) -> Vec<C64> {
        let d = self.dim_per_mode;
        let n = self.total_dim();
        let sqrt: Vec<f64> = (0..=d).map(|k| (k as f64).sqrt()).collect();
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let (p, q) = (i / d, i % d);
            // (a M)[(p,q),·] = √(p+1) M[(p+1,q),·], (a† M)[(p,q),·] = √p M[(p−1,q),·]
            let mut sources: Vec<(usize, C64)> = Vec::with_capacity(4);
            if p + 1 < d {
                sources.push((i + d, alphas[0] * sqrt[p + 1]));
            }
            if p >= 1 {
                sources.push((i - d, alphas[0].conj() * sqrt[p]));
            }
            if q + 1 < d {
                sources.push((i + 1, alphas[1] * sqrt[q + 1]));
            }
            if q >= 1 {
                sources.push((i - 1, alphas[1].conj() * sqrt[q]));
            }
            let row = &mut out[i * n..(i + 1) * n];
            for (src, weight) in sources {
                let src_row = &m[src * n..(src + 1) * n];
                for (o, s) in row.iter_mut().zip(src_row) {
                    *o += weight * s;
                }
            }
        }
        out
    }
}

/// Master-equation generator for independent baths on the selected modes.
struct Generator {
    d: usize,
    /// `Σ_modes κN₁ f(n) + κN₂ n` per basis index, with `f(n)` the diagonal
    /// of the truncated `aa†`.
    decay: Vec<f64>,
    gain_a: f64,
    gain_b: f64,
    loss_a: f64,
    loss_b: f64,
    sqrt: Vec<f64>,
}

impl Generator {
    fn new(bath: &BathSpec, selection: &ModeSelection, d: usize) -> Self {
        let (k1, k2) = (
            bath.kappa() * bath.n_excited(),
            bath.kappa() * bath.n_ground(),
        );
        let per_level = |n: usize| {
            let aa_dag = if n + 1 < d { (n + 1) as f64 } else { 0.0 };
            k1 * aa_dag + k2 * n as f64
        };
        let on = |mode: usize| selection.contains(mode);
        let decay = (0..d * d)
            .map(|i| {
                let mut h = 0.0;
                if on(0) {
                    h += per_level(i / d);
                }
                if on(1) {
                    h += per_level(i % d);
                }
                h
            })
            .collect();
        let rate = |mode: usize, k: f64| if on(mode) { 2.0 * k } else { 0.0 };
        Self {
            d,
            decay,
            gain_a: rate(0, k1),
            gain_b: rate(1, k1),
            loss_a: rate(0, k2),
            loss_b: rate(1, k2),
            sqrt: (0..=d).map(|k| (k as f64).sqrt()).collect(),
        }
    }

    /// Gershgorin-style bound on the generator's spectral radius.
    fn spectral_bound(&self) -> f64 {
        let max_decay = self.decay.iter().copied().fold(0.0, f64::max);
        let top = (self.d - 1) as f64;
        let feed = (self.gain_a + self.gain_b + self.loss_a + self.loss_b) * top;
        2.0 * (2.0 * max_decay + feed)
    }

    /// `out = L(rho)`.
    fn apply(&self, rho: &[C64], out: &mut [C64]) {
        let d = self.d;
        let n = d * d;
        let sq = &self.sqrt;
        for i in 0..n {
            let (p, q) = (i / d, i % d);
            for j in 0..n {
                let (s, t) = (j / d, j % d);
                let mut acc = rho[i * n + j] * -(self.decay[i] + self.decay[j]);
                if self.gain_a != 0.0 && p >= 1 && s >= 1 {
                    acc += rho[(i - d) * n + (j - d)] * (self.gain_a * sq[p] * sq[s]);
                }
                if self.loss_a != 0.0 && p + 1 < d && s + 1 < d {
                    acc += rho[(i + d) * n + (j + d)] * (self.loss_a * sq[p + 1] * sq[s + 1]);
                }
                if self.gain_b != 0.0 && q >= 1 && t >= 1 {
                    acc += rho[(i - 1) * n + (j - 1)] * (self.gain_b * sq[q] * sq[t]);
                }
                if self.loss_b != 0.0 && q + 1 < d && t + 1 < d {
                    acc += rho[(i + 1) * n + (j + 1)] * (self.loss_b * sq[q + 1] * sq[t + 1]);
                }
                out[i * n + j] = acc;
            }
        }
    }
}

struct DriftMonitor {
    trace: f64,
    hermiticity: f64,
}

impl DriftMonitor {
    fn observe(&mut self, rho: &DensityMatrix) -> Result<()> {
        let trace_dev = (rho.trace() - C64::new(1.0, 0.0)).norm();
        let herm_dev = rho.hermiticity_deviation();
        self.trace = self.trace.max(trace_dev);
        self.hermiticity = self.hermiticity.max(herm_dev);
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::NonHermitianDrift {
                deviation: herm_dev,
            });
        }
        if trace_dev > TRACE_TOL {
            return Err(Error::TraceDrift {
                deviation: trace_dev,
            });
        }
        Ok(())
    }
}

/// Integrates the master equation on `rho` in place, checking trace and
/// hermiticity after every step.
fn evolve(
    rho: &mut DensityMatrix,
    bath: &BathSpec,
    selection: &ModeSelection,
    config: &FockConfig,
    monitor: &mut DriftMonitor,
) -> Result<()> {
    let d = rho.dim_per_mode;
    let generator = Generator::new(bath, selection, d);
    let steps = step_count(bath.time(), config.dt);
    if steps == 0 {
        return monitor.observe(rho);
    }
    let h = bath.time() / steps as f64;
    let limit = RK4_STABILITY / generator.spectral_bound();
    if h > limit {
        return Err(Error::UnstableStep { dt: h, limit });
    }

    let len = rho.data.len();
    let zero = C64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![zero; len],
        vec![zero; len],
        vec![zero; len],
        vec![zero; len],
    );
    let mut scratch = vec![zero; len];
    for _ in 0..steps {
        let y = &rho.data;
        generator.apply(y, &mut k1);
        for ((s, y), k) in scratch.iter_mut().zip(y).zip(&k1) {
            *s = y + k * (h / 2.0);
        }
        generator.apply(&scratch, &mut k2);
        for ((s, y), k) in scratch.iter_mut().zip(y).zip(&k2) {
            *s = y + k * (h / 2.0);
        }
        generator.apply(&scratch, &mut k3);
        for ((s, y), k) in scratch.iter_mut().zip(y).zip(&k3) {
            *s = y + k * h;
        }
        generator.apply(&scratch, &mut k4);
        for (idx, y) in rho.data.iter_mut().enumerate() {
            *y += (k1[idx] + (k2[idx] + k3[idx]) * 2.0 + k4[idx]) * (h / 6.0);
        }
        monitor.observe(rho)?;
    }
    Ok(())
}

/// Evolves a Fock-space density matrix in place and reports the drift
/// observed. Exposed for property tests on the evolved state.
pub fn evolve_density(
    rho: &mut DensityMatrix,
    bath: &BathSpec,
    selection: &ModeSelection,
    config: &FockConfig,
) -> Result<(f64, f64)> {
    selection.validate_for(2)?;
    config.validate()?;
    let mut monitor = DriftMonitor {
        trace: 0.0,
        hermiticity: 0.0,
    };
    evolve(rho, bath, selection, config, &mut monitor)?;
    Ok((monitor.trace, monitor.hermiticity))
}

/// Amplifies a squeezed vacuum `S(r)|0,0⟩` in Fock space and returns its
/// logarithmic negativity `ln(1 + 2N)`, `N` being the negativity of the
/// partial transpose.
///
/// Fails with [`Error::TruncationLeakage`] if the evolved state puts
/// [`LEAKAGE_LIMIT`] or more population into the top two levels of either
/// mode.
pub fn fock_evolve_negativity(
    r: f64,
    bath: BathSpec,
    selection: &ModeSelection,
    config: FockConfig,
) -> Result<FockNegativity> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::NegativeSqueeze(r));
    }
    let mut rho = DensityMatrix::tmsv(r, 0.0, config.dim_per_mode);
    let (max_trace_deviation, max_hermiticity_deviation) =
        evolve_density(&mut rho, &bath, selection, &config)?;

    let leakage = rho.leakage();
    if leakage >= LEAKAGE_LIMIT {
        return Err(Error::TruncationLeakage {
            leakage,
            limit: LEAKAGE_LIMIT,
        });
    }
    let negativity = rho.negativity();
    Ok(FockNegativity {
        log_negativity: (1.0 + 2.0 * negativity).ln(),
        negativity,
        leakage,
        max_trace_deviation,
        max_hermiticity_deviation,
    })
}
