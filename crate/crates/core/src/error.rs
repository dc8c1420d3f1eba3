use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: |S[{row}][{col}] - S[{col}][{row}]| = {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error(
        "matrix is not Hermitian: elements ({row},{col}) and ({col},{row}) differ by {diff:e}"
    )]
    NotHermitian { row: usize, col: usize, diff: f64 },

    #[error("matrix is empty")]
    EmptyMatrix,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("read-out id {0} out of range 1..=18")]
    InvalidReadout(i64),

    #[error("duplicate read-out id {0}")]
    DuplicateReadout(u8),

    #[error("no read-outs requested")]
    NoReadouts,

    #[error("readings do not match the read-out set: {0}")]
    ReadingsMismatch(String),

    #[error("noise sigma must be non-negative, got {0}")]
    NegativeNoise(f64),

    #[error("trace must be 1 within 1e-9, got {0}")]
    TraceNotUnit(f64),

    #[error("threshold must be positive, got {0}")]
    InvalidThreshold(f64),

    #[error("set size {0} out of range 1..=18")]
    InvalidSetSize(usize),

    #[error("reference matrix has zero norm")]
    ZeroNorm,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no direction of the normal matrix has eigenvalue above threshold {0:e}")]
    NoDeterminableDirection(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Internal numerical failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_) | Error::NoDeterminableDirection(_)
        )
    }
}
