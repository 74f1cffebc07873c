//! Dense covariance-matrix backbone: the symplectic form, symplectic
//! eigenvalues, and the partial-transpose map.
//!
//! Quadratures are ordered `(x1, p1, ..., xn, pn)` with
//! `x = (a + a†)/√2`, `p = (a - a†)/(i√2)`, so the vacuum covariance is
//! `I/2` and the uncertainty relation reads `ν ≥ 1/2` for every
//! symplectic eigenvalue `ν`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry check on covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue a covariance matrix may have and still count as
/// positive definite.
pub const POSITIVITY_TOL: f64 = 1e-12;
/// Relative tolerance for grouping `±iν` eigenvalues of `Ωσ` into pairs,
/// measured against the largest magnitude in the spectrum.
pub const PAIRING_TOL: f64 = 1e-9;
/// Slack below 1/2 still accepted by the uncertainty check.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// Real symmetric `2n × 2n` second-moment matrix of the quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    /// Wraps a square matrix of even dimension. Symmetry is checked by the
    /// operations that need it, not here.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows < 2 || rows % 2 != 0 {
            return Err(Error::BadDimension { rows, cols });
        }
        Ok(Self(matrix))
    }

    /// Builds from row-major entries; `entries.len()` must be a square of
    /// an even number.
    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_diagonal(diagonal: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
            diagonal,
        )))
    }

    /// `n` modes of vacuum: `I/2`.
    pub fn vacuum(n_modes: usize) -> Self {
        Self(DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5)
    }

    /// The two-mode matrix with entries
    ///
    /// ```text
    /// [ A  0  B  C ]
    /// [ 0  A  C -B ]
    /// [ B  C  A' 0 ]
    /// [ C -B  0  A']
    /// ```
    ///
    /// which covers squeezed vacua and their phase-insensitive amplification.
    pub fn special_form(a: f64, a_prime: f64, b: f64, c: f64) -> Self {
        #[rustfmt::skip]
        let entries = [
            a,   0.0, b,       c,
            0.0, a,   c,       -b,
            b,   c,   a_prime, 0.0,
            c,   -b,  0.0,     a_prime,
        ];
        Self(DMatrix::from_row_slice(4, 4, &entries))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    /// Fails with [`Error::NonSymmetric`] on the first entry pair whose
    /// asymmetry exceeds `1e-12·max(1, |M[i][j]|)`.
    pub fn check_symmetric(&self) -> Result<()> {
        let m = &self.0;
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let deviation = (m[(i, j)] - m[(j, i)]).abs();
                if deviation > SYMMETRY_TOL * m[(i, j)].abs().max(1.0) {
                    return Err(Error::NonSymmetric {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        Ok(())
    }

    fn min_eigenvalue(&self) -> f64 {
        let sym = (&self.0 + self.0.transpose()) * 0.5;
        SymmetricEigen::new(sym).eigenvalues.min()
    }

    /// Checks symmetry and strict positivity.
    pub fn check_positive_definite(&self) -> Result<()> {
        self.check_symmetric()?;
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue > POSITIVITY_TOL {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite { min_eigenvalue })
        }
    }
}

/// Block-diagonal `Ω = ⊕ [[0, 1], [-1, 0]]` for `n_modes` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// Symplectic eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum(Vec<f64>);

impl SymplecticSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn min(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Symplectic eigenvalues of a positive-definite covariance matrix, from the
/// magnitudes of the eigenvalues of `iΩσ` (which come in `±ν` pairs).
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    sigma.check_positive_definite()?;
    let omega = symplectic_form(sigma.n_modes());
    let product = omega * sigma.matrix();

    let mut magnitudes: Vec<f64> = product
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    magnitudes.sort_by(|a, b| b.total_cmp(a));

    let scale = magnitudes[0];
    let values = magnitudes
        .chunks_exact(2)
        .map(|pair| {
            let (first, second) = (pair[0], pair[1]);
            if (first - second).abs() > PAIRING_TOL * scale {
                Err(Error::PairingFailure { first, second })
            } else {
                Ok(0.5 * (first + second))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymplecticSpectrum(values))
}

/// Partial transpose of one mode: flips the sign of that mode's momentum,
/// `σ → ΛσΛ`.
pub fn partial_transpose(sigma: &CovarianceMatrix, mode_index: usize) -> Result<CovarianceMatrix> {
    let n_modes = sigma.n_modes();
    if mode_index >= n_modes {
        return Err(Error::BadModeIndex {
            index: mode_index,
            n_modes,
        });
    }
    let p = 2 * mode_index + 1;
    let mut out = sigma.matrix().clone();
    for k in 0..out.nrows() {
        if k != p {
            out[(p, k)] = -out[(p, k)];
            out[(k, p)] = -out[(k, p)];
        }
    }
    Ok(CovarianceMatrix(out))
}

/// Symplectic eigenvalues `(ν̃₊, ν̃₋)` of the partial transpose of the
/// [`CovarianceMatrix::special_form`] matrix:
/// `½[(A + A′) ± √((A − A′)² + 4(B² + C²))]`.
pub fn pt_symplectic_eigenvalues_closed_form(
    a: f64,
    a_prime: f64,
    b: f64,
    c: f64,
) -> Result<(f64, f64)> {
    let root = ((a - a_prime).powi(2) + 4.0 * (b * b + c * c)).sqrt();
    let nu_plus = 0.5 * ((a + a_prime) + root);
    let nu_minus = 0.5 * ((a + a_prime) - root);
    if nu_minus < 0.0 || !nu_minus.is_finite() {
        return Err(Error::NegativeEigenvalue { value: nu_minus });
    }
    Ok((nu_plus, nu_minus))
}

/// Uncertainty relation: every symplectic eigenvalue is at least 1/2.
/// Matrices that are not positive definite are reported as unphysical.
pub fn check_physicality(sigma: &CovarianceMatrix) -> Result<bool> {
    sigma.check_symmetric()?;
    match symplectic_eigenvalues(sigma) {
        Ok(spectrum) => Ok(spectrum.min() >= 0.5 - PHYSICALITY_TOL),
        Err(Error::NotPositiveDefinite { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
