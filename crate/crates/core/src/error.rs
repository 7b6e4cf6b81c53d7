use thiserror::Error;

/// Errors produced by the uncertainty toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension {0}: at least 2 required")]
    InvalidDimension(usize),

    #[error("state is not normalised (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("distribution has non-real proper values")]
    NonRealValues,

    #[error("cost table is {rows}x{cols} but the distribution has {values} proper values")]
    CostTableShapeMismatch { rows: usize, cols: usize, values: usize },

    #[error("invalid cost table: {0}")]
    InvalidCostTable(String),

    #[error("observable has no spectral decomposition (truncated)")]
    TruncatedObservable,

    #[error("coefficients a and b are both zero")]
    ZeroCoefficients,

    #[error("perpendicular state is not orthogonal to the state (overlap {0:e})")]
    NotOrthogonal(f64),

    #[error("variance too small for the equivalence transform ({0:e})")]
    DegenerateVariance(f64),

    #[error("value {value} outside the range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("measure {measure} is incompatible with the observable")]
    IncompatibleMeasure { measure: &'static str },

    #[error("no closed form available for {0}")]
    NoClosedForm(String),

    #[error("truncation too small: tail amplitude {0:e}")]
    TruncationTooSmall(f64),

    #[error("root not bracketed in [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
