use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("irrep {irrep} is not defined for {context}")]
    IncompatibleIrrep { irrep: String, context: String },

    #[error("{0} is not a finite group")]
    InfiniteGroup(String),

    #[error("{sub} is not a subgroup of {group}")]
    NotASubgroup { sub: String, group: String },

    #[error("decomposition into irreps failed (residual {residual:.3e})")]
    DecompositionFailed { residual: f64 },

    #[error("steerability residual {residual:.3e} exceeds {tol:e}")]
    NotSteerable { residual: f64, tol: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("derivative order too high: {0}")]
    OrderTooHigh(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("field of size {height}x{width} is smaller than the {size}x{size} stencil")]
    FieldTooSmall { height: usize, width: usize, size: usize },

    #[error("rotations need a square field, got {height}x{width}")]
    NonSquareField { height: usize, width: usize },

    #[error("expected {expected} polynomials (one per group element), got {got}")]
    WrongFamilySize { expected: usize, got: usize },

    #[error("cannot fit convergence order: {0}")]
    DegenerateFit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
