//! Normal equations and error-matrix analysis.
//!
//! The normal matrix `C = AᵀA` is diagonalised as `C = Uᵀ·C_d·U`. Each row
//! of `U` is a combination `y_i` of the density parameters, and its
//! eigenvalue says how strongly the data constrain it: `y_i = b'_i / λ_i`
//! with `b' = U·b`, so a small `λ_i` amplifies noise in `b'_i`. Directions
//! below the threshold are held at a prior instead of being fitted.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{dot, spectral_norm, sym_eigen, ComplexMatrix, RealMatrix};
use crate::model::{params_to_matrix, DensityParams, DesignSystem, NUM_PARAMS};

/// Default eigenvalue threshold below which a direction is ill-determined.
pub const DEFAULT_THRESHOLD: f64 = 0.001;

/// `C·x = b` with `C = AᵀA`, `b = AᵀB`.
#[derive(Debug, Clone)]
pub struct NormalSystem {
    pub c: RealMatrix,
    pub b: Vec<f64>,
}

pub fn normal_system(d: &DesignSystem) -> NormalSystem {
    let a = &d.a;
    let n = a.cols();
    let mut c = RealMatrix::zeros(n, n);
    let mut b = vec![0.0; n];
    for row in 0..a.rows() {
        let r = a.row(row);
        for i in 0..n {
            if r[i] == 0.0 {
                continue;
            }
            b[i] += d.b[row] * r[i];
            for j in 0..n {
                c[(i, j)] += r[i] * r[j];
            }
        }
    }
    NormalSystem { c, b }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Determination {
    Well,
    Ill,
}

impl fmt::Display for Determination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Determination::Well => "well-determined",
            Determination::Ill => "ill-determined",
        })
    }
}

/// Eigen-analysis of a normal matrix.
#[derive(Debug, Clone)]
pub struct ErrorMatrixReport {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Row `i` holds the coefficients of `y_i` over `x₁…x₁₆`.
    pub combinations: RealMatrix,
    /// `U·b`.
    pub b_prime: Vec<f64>,
    pub flags: Vec<Determination>,
    pub threshold: f64,
}

impl ErrorMatrixReport {
    pub fn combination(&self, i: usize) -> &[f64] {
        self.combinations.row(i)
    }

    pub fn ill_determined(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f == Determination::Ill)
            .map(|(i, _)| i)
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue
    /// lies within `tol` of `lambda`.
    pub fn eigenspace_projector(&self, lambda: f64, tol: f64) -> RealMatrix {
        let n = self.eigenvalues.len();
        let members: Vec<usize> = (0..n)
            .filter(|&k| (self.eigenvalues[k] - lambda).abs() <= tol)
            .collect();
        RealMatrix::from_fn(n, n, |i, j| {
            members
                .iter()
                .map(|&k| self.combinations[(k, i)] * self.combinations[(k, j)])
                .sum()
        })
    }
}

pub fn error_matrix_analysis(ns: &NormalSystem, threshold: f64) -> Result<ErrorMatrixReport> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidThreshold(threshold));
    }
    let eig = sym_eigen(&ns.c)?;
    let combinations = eig.vectors.transpose();
    let b_prime = combinations.mul_vec(&ns.b)?;
    let flags = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if l < threshold {
                Determination::Ill
            } else {
                Determination::Well
            }
        })
        .collect();
    Ok(ErrorMatrixReport {
        eigenvalues: eig.eigenvalues,
        combinations,
        b_prime,
        flags,
        threshold,
    })
}

#[derive(Debug, Clone)]
pub struct TruncatedDirection {
    pub eigenvalue: f64,
    pub combination: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub params: DensityParams,
    pub chi2: f64,
    pub truncated_directions: Vec<TruncatedDirection>,
    pub prior_used: DensityParams,
    pub report: ErrorMatrixReport,
}

impl ReconstructionResult {
    pub fn matrix(&self) -> ComplexMatrix {
        params_to_matrix(&self.params)
    }
}

/// Least-squares reconstruction through the error matrix. Directions with
/// eigenvalue below `threshold` keep the value they have in `prior`.
pub fn reconstruct(
    d: &DesignSystem,
    threshold: f64,
    prior: &DensityParams,
) -> Result<ReconstructionResult> {
    let ns = normal_system(d);
    let report = error_matrix_analysis(&ns, threshold)?;
    if report.flags.iter().all(|f| *f == Determination::Ill) {
        return Err(Error::NoDeterminableDirection(threshold));
    }

    let prior_x = prior.as_array();
    let mut x = [0.0; NUM_PARAMS];
    let mut truncated = Vec::new();
    for i in 0..NUM_PARAMS {
        let u = report.combination(i);
        let y = match report.flags[i] {
            Determination::Well => report.b_prime[i] / report.eigenvalues[i],
            Determination::Ill => {
                truncated.push(TruncatedDirection {
                    eigenvalue: report.eigenvalues[i],
                    combination: u.to_vec(),
                });
                dot(u, prior_x)
            }
        };
        for (xj, uj) in x.iter_mut().zip(u) {
            *xj += y * uj;
        }
    }
    let params = DensityParams::new(x);
    Ok(ReconstructionResult {
        chi2: chi2(d, &params),
        params,
        truncated_directions: truncated,
        prior_used: *prior,
        report,
    })
}

/// `Σ_α (Σ_i A_αi x_i − B_α)²`.
pub fn chi2(d: &DesignSystem, x: &DensityParams) -> f64 {
    (0..d.a.rows())
        .map(|row| {
            let r = dot(d.a.row(row), x.as_array()) - d.b[row];
            r * r
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixNorm {
    #[default]
    Spectral,
    Frobenius,
}

impl FromStr for MatrixNorm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spectral" => Ok(MatrixNorm::Spectral),
            "frobenius" => Ok(MatrixNorm::Frobenius),
            _ => Err(format!("unknown norm {s:?}")),
        }
    }
}

impl MatrixNorm {
    pub fn apply(self, m: &ComplexMatrix) -> f64 {
        match self {
            MatrixNorm::Spectral => spectral_norm(m),
            MatrixNorm::Frobenius => m.frobenius_norm(),
        }
    }
}

/// δ = ‖ρ_exp − ρ_th‖₂ / ‖ρ_exp‖₂ under the spectral norm.
pub fn relative_error(rho_exp: &ComplexMatrix, rho_th: &ComplexMatrix) -> Result<f64> {
    relative_error_with(rho_exp, rho_th, MatrixNorm::Spectral)
}

pub fn relative_error_with(
    rho_exp: &ComplexMatrix,
    rho_th: &ComplexMatrix,
    norm: MatrixNorm,
) -> Result<f64> {
    if rho_exp.shape() != (4, 4) || rho_th.shape() != (4, 4) {
        return Err(Error::Shape("relative error needs two 4x4 matrices".into()));
    }
    let denom = norm.apply(rho_exp);
    if denom == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(norm.apply(&rho_exp.sub(rho_th)?) / denom)
}

/// Nearest trace-1 positive semi-definite matrix: negative eigenvalues are
/// clipped to zero and the result rescaled to unit trace.
pub fn project_psd(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    rho.check_hermitian(1e-9)?;
    let n = rho.rows();
    // the real embedding carries every eigenvalue twice with the same
    // invariant subspace, so clipping there clips the complex matrix
    let eig = sym_eigen(&rho.real_embedding())?;
    let m = 2 * n;
    let clipped = RealMatrix::from_fn(m, m, |i, j| {
        (0..m)
            .map(|k| eig.vectors[(i, k)] * eig.eigenvalues[k].max(0.0) * eig.vectors[(j, k)])
            .sum()
    });
    let mut out = ComplexMatrix::from_fn(n, n, |i, j| {
        num_complex::Complex64::new(clipped[(i, j)], clipped[(i + n, j)])
    });
    let tr = out.trace().re;
    if tr > 0.0 {
        out = ComplexMatrix::from_fn(n, n, |i, j| out[(i, j)] / tr);
    }
    Ok(out)
}
