//! Covariance-matrix algebra for zero-mean Gaussian states.
//!
//! Quadrature ordering is (x1, p1, x2, p2, ...) and the vacuum has unit
//! variance in every quadrature, so the vacuum covariance is the identity.
//! The symplectic form is Omega = diag(J, J, ...) with J = [[0, 1], [-1, 0]].
//!
//! The two-mode squeezed state, the beam-splitter channel that models the
//! wave-packet deformation, partial traces, symplectic spectra and Renyi-2
//! entropies all live here. The 8x8 transform path (channel applied to the
//! extended four-mode state, then tracing the orthogonal modes) and the
//! closed-form two-mode output are independent routes to the same state and
//! are cross-checked in the tests.

use nalgebra::{DMatrix, Matrix2};
use thiserror::Error;

/// Absolute tolerance for symmetry of covariance entries.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Symplectic eigenvalues must satisfy nu >= 1 - PHYSICALITY_TOLERANCE.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance on S Omega S^T = Omega.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-12;
/// Diagonal-block structure tolerance for standard-form extraction.
pub const STANDARD_FORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GaussianError {
    #[error("matrix must be square with even dimension, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("matrix is not symmetric: |m[{i},{j}] - m[{j},{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("covariance is not physical: smallest symplectic eigenvalue {nu_min}")]
    NonPhysical { nu_min: f64 },
    #[error("matrix is not symplectic: |S O S^T - O| reaches {deviation:e}")]
    NotSymplectic { deviation: f64 },
    #[error("dimension mismatch: state has {state_dim} quadratures, transform {transform_dim}")]
    DimensionMismatch { state_dim: usize, transform_dim: usize },
    #[error("bad mode index set: {0}")]
    BadIndex(String),
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("state is not in standard form: {0}")]
    NotInStandardForm(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Real symmetric 2n x 2n covariance matrix of an n-mode Gaussian state.
///
/// Construction validates symmetry and physicality (every symplectic
/// eigenvalue >= 1 - 1e-9); instances are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    modes: usize,
    mat: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validate and wrap a 2n x 2n matrix.
    pub fn from_matrix(mat: DMatrix<f64>) -> Result<Self, GaussianError> {
        let (rows, cols) = mat.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(GaussianError::BadShape { rows, cols });
        }
        for i in 0..rows {
            for j in (i + 1)..rows {
                let diff = (mat[(i, j)] - mat[(j, i)]).abs();
                if diff > SYMMETRY_TOLERANCE {
                    return Err(GaussianError::NotSymmetric { i, j, diff });
                }
            }
        }
        let state = Self {
            modes: rows / 2,
            mat,
        };
        let nu_min = state
            .symplectic_spectrum_generic()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if !(nu_min >= 1.0 - PHYSICALITY_TOLERANCE) {
            return Err(GaussianError::NonPhysical { nu_min });
        }
        Ok(state)
    }

    /// Vacuum state of n modes (identity covariance).
    pub fn vacuum(modes: usize) -> Self {
        Self {
            modes,
            mat: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// The symplectic form Omega for n modes.
    pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
        let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
        for k in 0..modes {
            omega[(2 * k, 2 * k + 1)] = 1.0;
            omega[(2 * k + 1, 2 * k)] = -1.0;
        }
        omega
    }

    /// All n symplectic eigenvalues from the spectrum of Omega sigma
    /// (a generic eigensolver; the block-determinant route for two modes is
    /// [`symplectic_eigenvalues`], and this path doubles as its oracle).
    pub fn symplectic_spectrum_generic(&self) -> Vec<f64> {
        let omega = Self::symplectic_form(self.modes);
        let prod = &omega * &self.mat;
        let eig = prod.complex_eigenvalues();
        // Eigenvalues come in +/- i nu pairs; keep one of each.
        let mut mags: Vec<f64> = eig.iter().map(|z| z.im.abs()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (0..self.modes)
            .map(|k| 0.5 * (mags[2 * k] + mags[2 * k + 1]))
            .collect()
    }

    /// Principal submatrix on the kept modes (quadrature rows and columns of
    /// each kept mode). Mode indices are 0-based.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self, GaussianError> {
        if keep.is_empty() {
            return Err(GaussianError::BadIndex("kept set is empty".into()));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() {
            return Err(GaussianError::BadIndex("duplicate mode index".into()));
        }
        if let Some(&bad) = sorted.iter().find(|&&m| m >= self.modes) {
            return Err(GaussianError::BadIndex(format!(
                "mode {bad} out of range for {} modes",
                self.modes
            )));
        }
        let rows: Vec<usize> = sorted.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mut out = DMatrix::zeros(rows.len(), rows.len());
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &rj) in rows.iter().enumerate() {
                out[(i, j)] = self.mat[(ri, rj)];
            }
        }
        Ok(Self {
            modes: sorted.len(),
            mat: out,
        })
    }

    /// Renyi-2 entropy S_2 = (1/2) ln det sigma, in nats.
    ///
    /// The log-determinant is accumulated from the Cholesky diagonal, so no
    /// intermediate determinant product can overflow at large squeezing.
    pub fn renyi2_entropy(&self) -> Result<f64, GaussianError> {
        let chol = nalgebra::linalg::Cholesky::new(self.mat.clone()).ok_or(
            GaussianError::NonPhysical {
                nu_min: f64::NAN,
            },
        )?;
        let l = chol.l();
        let mut log_det = 0.0;
        for i in 0..self.mat.nrows() {
            log_det += l[(i, i)].ln();
        }
        // ln det sigma = 2 sum ln L_ii; S_2 = (1/2) ln det.
        Ok(log_det)
    }

    /// Row-major text serialization with 17 significant digits: first line is
    /// the mode count, then one row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.modes);
        for i in 0..self.mat.nrows() {
            let row: Vec<String> = (0..self.mat.ncols())
                .map(|j| format!("{:.16e}", self.mat[(i, j)]))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`to_text`].
    pub fn from_text(text: &str) -> Result<Self, GaussianError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let modes: usize = lines
            .next()
            .ok_or_else(|| GaussianError::Parse("empty input".into()))?
            .trim()
            .parse()
            .map_err(|e| GaussianError::Parse(format!("mode count: {e}")))?;
        let dim = 2 * modes;
        let mut mat = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            let line = lines
                .next()
                .ok_or_else(|| GaussianError::Parse(format!("missing row {i}")))?;
            let vals: Vec<&str> = line.split_whitespace().collect();
            if vals.len() != dim {
                return Err(GaussianError::Parse(format!(
                    "row {i} has {} entries, expected {dim}",
                    vals.len()
                )));
            }
            for (j, v) in vals.iter().enumerate() {
                mat[(i, j)] = v
                    .parse()
                    .map_err(|e| GaussianError::Parse(format!("row {i} col {j}: {e}")))?;
            }
        }
        Self::from_matrix(mat)
    }
}

/// A linear symplectic transform S with S Omega S^T = Omega.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    mat: DMatrix<f64>,
}

impl SymplecticTransform {
    pub fn new(mat: DMatrix<f64>) -> Result<Self, GaussianError> {
        let (rows, cols) = mat.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(GaussianError::BadShape { rows, cols });
        }
        let omega = CovarianceMatrix::symplectic_form(rows / 2);
        let residual = &mat * &omega * mat.transpose() - &omega;
        let deviation = residual.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if deviation > SYMPLECTIC_TOLERANCE {
            return Err(GaussianError::NotSymplectic { deviation });
        }
        Ok(Self { mat })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn modes(&self) -> usize {
        self.mat.nrows() / 2
    }
}

/// Covariance of the two-mode squeezed state with squeezing s:
/// diagonal blocks cosh(2s) I, off-diagonal sinh(2s) sigma_z.
pub fn tmss_covariance(s: f64) -> Result<CovarianceMatrix, GaussianError> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(GaussianError::OutOfRange {
            name: "squeezing",
            value: s,
            range: "[0, inf)",
        });
    }
    let ch = (2.0 * s).cosh();
    let sh = (2.0 * s).sinh();
    let mut m = DMatrix::zeros(4, 4);
    for i in 0..4 {
        m[(i, i)] = ch;
    }
    m[(0, 2)] = sh;
    m[(2, 0)] = sh;
    m[(1, 3)] = -sh;
    m[(3, 1)] = -sh;
    CovarianceMatrix::from_matrix(m)
}

/// Four-mode initial covariance diag(tmss(s), I_4) on (b1, b2, b1p, b2p),
/// the squeezed pair extended by the two orthogonal vacuum modes.
pub fn initial_extended_covariance(s: f64) -> Result<CovarianceMatrix, GaussianError> {
    let tmss = tmss_covariance(s)?;
    let mut m = DMatrix::identity(8, 8);
    m.view_mut((0, 0), (4, 4)).copy_from(tmss.matrix());
    CovarianceMatrix::from_matrix(m)
}

/// Beam-splitter symplectic on (b1, b2, b1p, b2p) implementing
/// b1 -> b1, b2 -> theta2 b2 + sqrt(1 - theta2^2) b2p, with the sign blocks
/// on the traced-out sector exactly as the channel model prescribes.
pub fn channel_symplectic(theta2: f64) -> Result<SymplecticTransform, GaussianError> {
    channel_symplectic_pair(1.0, theta2)
}

/// Two-sided channel: transmissivity theta1 on mode b1 (against b1p) and
/// theta2 on mode b2 (against b2p). theta1 = 1 is the one-sided channel of
/// [`channel_symplectic`]; the general form extends it by symmetry.
pub fn channel_symplectic_pair(
    theta1: f64,
    theta2: f64,
) -> Result<SymplecticTransform, GaussianError> {
    for (name, v) in [("theta1", theta1), ("theta2", theta2)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(GaussianError::OutOfRange {
                name,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    let s1 = (1.0 - theta1 * theta1).max(0.0).sqrt();
    let s2 = (1.0 - theta2 * theta2).max(0.0).sqrt();
    let mut m = DMatrix::zeros(8, 8);
    let set_block = |m: &mut DMatrix<f64>, bi: usize, bj: usize, v: f64| {
        m[(2 * bi, 2 * bj)] = v;
        m[(2 * bi + 1, 2 * bj + 1)] = v;
    };
    set_block(&mut m, 0, 0, theta1);
    set_block(&mut m, 0, 2, s1);
    set_block(&mut m, 1, 1, theta2);
    set_block(&mut m, 1, 3, s2);
    set_block(&mut m, 2, 0, s1);
    set_block(&mut m, 2, 2, -theta1);
    set_block(&mut m, 3, 1, s2);
    set_block(&mut m, 3, 3, -theta2);
    SymplecticTransform::new(m)
}

/// sigma -> S sigma S^T.
pub fn apply_symplectic(
    state: &CovarianceMatrix,
    transform: &SymplecticTransform,
) -> Result<CovarianceMatrix, GaussianError> {
    if state.matrix().nrows() != transform.matrix().nrows() {
        return Err(GaussianError::DimensionMismatch {
            state_dim: state.matrix().nrows(),
            transform_dim: transform.matrix().nrows(),
        });
    }
    let s = transform.matrix();
    let mut out = s * state.matrix() * s.transpose();
    // Products leave ~1e-15-scale asymmetry; restore exact symmetry.
    let sym = (&out + out.transpose()) * 0.5;
    out = sym;
    CovarianceMatrix::from_matrix(out)
}

/// Closed-form covariance of (b1, b2) after the lossy channel:
/// [[(1 + 2 sinh^2 s) I, sinh(2s) theta2 sigma_z],
///  [sinh(2s) theta2 sigma_z, (1 + 2 sinh^2 s theta2^2) I]].
pub fn lossy_state_closed_form(s: f64, theta2: f64) -> Result<CovarianceMatrix, GaussianError> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(GaussianError::OutOfRange {
            name: "squeezing",
            value: s,
            range: "[0, inf)",
        });
    }
    if !(0.0..=1.0).contains(&theta2) {
        return Err(GaussianError::OutOfRange {
            name: "theta2",
            value: theta2,
            range: "[0, 1]",
        });
    }
    let sh2 = s.sinh() * s.sinh();
    let a = 1.0 + 2.0 * sh2;
    let b = 1.0 + 2.0 * sh2 * theta2 * theta2;
    let c = (2.0 * s).sinh() * theta2;
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = a;
    m[(1, 1)] = a;
    m[(2, 2)] = b;
    m[(3, 3)] = b;
    m[(0, 2)] = c;
    m[(2, 0)] = c;
    m[(1, 3)] = -c;
    m[(3, 1)] = -c;
    CovarianceMatrix::from_matrix(m)
}

/// Symplectic eigenvalues (nu_minus, nu_plus) of a two-mode state from the
/// block determinants: 2 nu^2 = Delta -/+ sqrt(Delta^2 - 4 det sigma) with
/// Delta = det A + det B + 2 det C.
pub fn symplectic_eigenvalues(state: &CovarianceMatrix) -> Result<(f64, f64), GaussianError> {
    if state.modes() != 2 {
        return Err(GaussianError::BadShape {
            rows: state.matrix().nrows(),
            cols: state.matrix().ncols(),
        });
    }
    let m = state.matrix();
    let det2 = |r: usize, c: usize| -> f64 {
        m[(r, c)] * m[(r + 1, c + 1)] - m[(r, c + 1)] * m[(r + 1, c)]
    };
    let det_a = det2(0, 0);
    let det_b = det2(2, 2);
    let det_c = det2(0, 2);
    let det_sigma = m.determinant();
    let delta = det_a + det_b + 2.0 * det_c;
    let disc = delta * delta - 4.0 * det_sigma;
    let scale = (delta * delta).max(1.0);
    if disc < -PHYSICALITY_TOLERANCE * scale {
        return Err(GaussianError::NonPhysical {
            nu_min: f64::NAN,
        });
    }
    let root = disc.max(0.0).sqrt();
    let nu_minus = (0.5 * (delta - root)).max(0.0).sqrt();
    let nu_plus = (0.5 * (delta + root)).sqrt();
    Ok((nu_minus, nu_plus))
}

/// Standard-form parameters of a two-mode covariance with A = a I, B = b I
/// and C = diag(c1, c2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
}

impl StandardForm {
    /// Reconstruct the 4x4 covariance (validates physicality).
    pub fn to_covariance(&self) -> Result<CovarianceMatrix, GaussianError> {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = self.a;
        m[(1, 1)] = self.a;
        m[(2, 2)] = self.b;
        m[(3, 3)] = self.b;
        m[(0, 2)] = self.c1;
        m[(2, 0)] = self.c1;
        m[(1, 3)] = self.c2;
        m[(3, 1)] = self.c2;
        CovarianceMatrix::from_matrix(m)
    }

    pub fn det_a(&self) -> f64 {
        self.a * self.a
    }

    pub fn det_b(&self) -> f64 {
        self.b * self.b
    }

    /// det sigma = (ab - c1^2)(ab - c2^2) for the standard form.
    pub fn det_sigma(&self) -> f64 {
        (self.a * self.b - self.c1 * self.c1) * (self.a * self.b - self.c2 * self.c2)
    }
}

/// Extract (a, b, c1, c2) from a two-mode state whose diagonal blocks are
/// proportional to the identity and whose off-diagonal block is diagonal
/// (within 1e-9). General standard-form reduction is out of scope; every
/// state this crate produces already has this structure.
pub fn standard_form_params(state: &CovarianceMatrix) -> Result<StandardForm, GaussianError> {
    if state.modes() != 2 {
        return Err(GaussianError::BadShape {
            rows: state.matrix().nrows(),
            cols: state.matrix().ncols(),
        });
    }
    let m = state.matrix();
    let a = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let b = 0.5 * (m[(2, 2)] + m[(3, 3)]);
    let checks = [
        (m[(0, 0)] - a, "A not proportional to identity"),
        (m[(1, 1)] - a, "A not proportional to identity"),
        (m[(0, 1)], "A has off-diagonal entries"),
        (m[(2, 2)] - b, "B not proportional to identity"),
        (m[(3, 3)] - b, "B not proportional to identity"),
        (m[(2, 3)], "B has off-diagonal entries"),
        (m[(0, 3)], "C is not diagonal"),
        (m[(1, 2)], "C is not diagonal"),
    ];
    for (value, what) in checks {
        if value.abs() > STANDARD_FORM_TOLERANCE {
            return Err(GaussianError::NotInStandardForm(format!(
                "{what} (deviation {value:e})"
            )));
        }
    }
    Ok(StandardForm {
        a,
        b,
        c1: m[(0, 2)],
        c2: m[(1, 3)],
    })
}

/// Pure single-mode measurement covariance R(theta) diag(lambda, 1/lambda)
/// R(theta)^T, shared by the correlations module.
pub(crate) fn rotated_squeezed_covariance(lambda: f64, angle: f64) -> Matrix2<f64> {
    let (sin, cos) = angle.sin_cos();
    let rot = Matrix2::new(cos, -sin, sin, cos);
    let diag = Matrix2::new(lambda, 0.0, 0.0, 1.0 / lambda);
    rot * diag * rot.transpose()
}
