use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, KitError>;

/// Errors raised by grid construction, state constructors, Fock-space
/// operations, and the phase-space quadrature.
///
/// Configuration errors mean the requested computation cannot meet its
/// accuracy contract (undersized grid, truncation, or quadrature); usage
/// errors mean the inputs violate a caller-side precondition.
#[derive(Debug, Error)]
pub enum KitError {
    #[error("grid size {n_points} is invalid: need a power of two with at least 8 points")]
    GridSize { n_points: usize },

    #[error("grid interval [{x_min}, {x_max}] is degenerate or not finite")]
    GridInterval { x_min: f64, x_max: f64 },

    #[error("{name} must be strictly positive and finite, got {value}")]
    BadConstant { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("wave functions live on different grids")]
    GridMismatch,

    #[error("state norm deviates from 1 by {deviation:.3e}; normalize first")]
    NotNormalized { deviation: f64 },

    #[error("cannot normalize a state with vanishing norm")]
    ZeroNorm,

    #[error("Fock dimension {dim} too small, need at least {needed}")]
    FockDim { dim: usize, needed: usize },

    #[error(
        "series truncation {n_max} too small for |alpha|^2 = {alpha_sq:.3}, need at least {needed}"
    )]
    SeriesTruncation {
        n_max: usize,
        needed: usize,
        alpha_sq: f64,
    },

    #[error("number-state index {n} exceeds the resolution guard ({limit}): {detail}")]
    NumberIndex {
        n: usize,
        limit: usize,
        detail: String,
    },

    #[error("state is not contained in the grid: {0}")]
    NotContained(String),

    #[error("polynomial degree {degree} exceeds the quadrature guarantee (max {max})")]
    PolynomialDegree { degree: usize, max: usize },

    #[error("quadrature undersized: {0}")]
    QuadratureSize(String),

    #[error("phase-space lattice is invalid: {0}")]
    LatticeAxis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
