use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("invalid norm (p = {p}, k = {k}) for dimension {dim}")]
    InvalidNorm { p: f64, k: usize, dim: usize },
    #[error("matrix is not normal: relative residual {residual:.3e} > {tol:.1e}")]
    NotNormal { residual: f64, tol: f64 },
    #[error("matrix is not unitary: residual {residual:.3e} > {tol:.1e}")]
    NotUnitary { residual: f64, tol: f64 },
    #[error("matrix is not Hermitian: residual {residual:.3e} > {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },
    #[error("not an orthogonal projector: residual {residual:.3e} > {tol:.1e}")]
    NotProjector { residual: f64, tol: f64 },
    #[error("invalid band: {0}")]
    InvalidBand(String),
    #[error("xi = {xi:.6} >= 1: restriction bounds do not apply")]
    XiTooLarge { xi: f64 },
    #[error("band block is singular (smallest singular value {min_singular:.3e})")]
    SingularBlock { min_singular: f64 },
    #[error("{0} did not converge")]
    Convergence(&'static str),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Failures of the numerics themselves, as opposed to bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence(_) | Error::SingularBlock { .. } | Error::BoundViolated(_)
        )
    }

    /// Unreadable or malformed input files.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Parse(_))
    }
}
