use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must satisfy n >= 3 (got n = {0})")]
    Dimension(usize),
    #[error("invalid grid parameter: {0}")]
    GridParameter(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("weight r^{exponent} is not integrable at the origin")]
    NotIntegrable { exponent: f64 },
    #[error("field is under-resolved: {fraction:.3e} of its spectral energy sits above the resolution cutoff")]
    UnderResolved { fraction: f64 },
    #[error("|∇|^{power} rejected: the lowest frequency mode carries {fraction:.3e} of the spectral energy")]
    LowFrequencyMass { power: f64, fraction: f64 },
    #[error("negative power rejected at time slices {slices:?}: {source}")]
    SliceFailure { slices: Vec<usize>, source: Box<Error> },
    #[error("domain truncation breach at t = {time}: boundary mass fraction {fraction:.3e} exceeds {limit:.1e}")]
    BoundaryBreach { time: f64, fraction: f64, limit: f64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("zero field: {0}")]
    ZeroField(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
