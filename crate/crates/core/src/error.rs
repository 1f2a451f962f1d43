use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("Hermitian symmetry violated (relative defect {0:.3e})")]
    HermitianViolation(f64),

    #[error("zero mode must vanish: {0}")]
    NonzeroMean(String),

    #[error("field is not quasi-geostrophic (relative residual {0:.3e})")]
    NotQuasiGeostrophic(f64),

    #[error("eigen decomposition failed at xi = {xi:?}: {reason}")]
    EigenFailure { xi: [f64; 3], reason: String },

    #[error("blow-up at t = {t}: {what}")]
    BlowUp { t: f64, what: String },

    #[error("CFL condition violated at t = {t}: number {cfl:.3} exceeds {limit:.3}")]
    Cfl { t: f64, cfl: f64, limit: f64 },

    #[error("snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("experiment error: {0}")]
    Experiment(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
