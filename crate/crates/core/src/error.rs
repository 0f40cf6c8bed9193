use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("axis {axis} out of range for fiber dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },
    #[error("operator entries must be finite")]
    NonFinite,
    #[error("unsupported fiber dimension {0}: only n = 1 is implemented here")]
    UnsupportedDimension(usize),
    #[error("invalid boundary grid: {0}")]
    InvalidGrid(String),
    #[error("top-degree part vanishes on the boundary grid (min modulus {min_modulus:e})")]
    DegenerateBoundary { min_modulus: f64 },
    #[error("map is not symplectic (residual {residual:e})")]
    NotSymplectic { residual: f64 },
    #[error("corner matching violated: {0}")]
    CornerMismatch(String),
    #[error("symbol not invertible: {component} ({value:e})")]
    NotInvertible { component: String, value: f64 },
    #[error("invertibility certificate unstable between truncation orders {low} and {high}")]
    UnstableCertificate { low: usize, high: usize },
    #[error("homotopy path degenerates at t = {t}")]
    PathDegenerate { t: f64 },
    #[error("lower half not invertible: {0}")]
    LowerHalfNotInvertible(String),
    #[error("corner function is not null-homotopic through invertibles (min modulus {min_modulus:e})")]
    CornerNotNullhomotopic { min_modulus: f64 },
    #[error("index not stabilized over orders {orders:?}: {indices:?}")]
    NotStabilized { orders: Vec<usize>, indices: Vec<i64> },
    #[error("rank decision ambiguous at order {order}: singular value {value:e} within band of threshold {threshold:e}")]
    RankAmbiguous { order: usize, value: f64, threshold: f64 },
    #[error("function vanishes on the circle (min modulus {min_modulus:e})")]
    ZeroOnCircle { min_modulus: f64 },
    #[error("winding sum {value} is not integral")]
    NonIntegralWinding { value: f64 },
    #[error("truncation cap {cap} exceeded without an invertible family")]
    TruncationCapExceeded { cap: usize },
    #[error("family not invertible on grid (min singular value {min_singular:e})")]
    NotInvertibleOnGrid { min_singular: f64 },
    #[error("index formula value {value} is not integral (residual {residual})")]
    NonIntegral { value: f64, residual: f64 },
    #[error("parameter on the non-invertible locus: {0}")]
    NonInvertibleParameter(String),
    #[error("invalid manifold grid: {0}")]
    InvalidManifold(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
