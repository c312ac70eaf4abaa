use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by curvature assembly, immersion sampling, and searches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("second fundamental form not symmetric at (alpha={alpha}, i={i}, j={j}), deviation {deviation:.3e}")]
    NotSymmetric {
        alpha: usize,
        i: usize,
        j: usize,
        deviation: f64,
    },

    #[error("invalid dimension: {0}")]
    BadDimension(String),

    #[error("ambient curvature must be finite and nonnegative, got {0}")]
    NegativeAmbientCurvature(f64),

    #[error("curvature bounds must satisfy kmin <= kmax, got kmin={kmin}, kmax={kmax}")]
    BadBounds { kmin: f64, kmax: f64 },

    #[error("operation requires a constant-curvature ambient, got curvature bounds")]
    BoundsAmbient,

    #[error("frame is not orthonormal, max Gram deviation {0:.3e}")]
    NotOrthonormal(f64),

    #[error("vector is not unit length, |v| = {0}")]
    NotUnit(f64),

    #[error("curvature tensor violates {symmetry}, deviation {deviation:.3e}")]
    BrokenTensorSymmetry {
        symmetry: &'static str,
        deviation: f64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expression parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },

    #[error("invalid immersion map: {0}")]
    BadMap(String),

    #[error("invalid sampling grid: {0}")]
    BadGrid(String),

    #[error("point {point:?} is closer than 2*step to the domain boundary on axis {axis}")]
    BoundaryTooClose { axis: usize, point: Vec<f64> },

    #[error("map evaluation produced a non-finite value at {point:?}")]
    NonFiniteEvaluation { point: Vec<f64> },

    #[error("immersion is rank-deficient at {point:?} (metric condition {cond:.3e})")]
    RankDeficient { point: Vec<f64>, cond: f64 },

    #[error(
        "spherical-ambient constraint violated at {point:?}: | |f|^2 - 1/c | = {deviation:.3e}"
    )]
    SphereConstraint { point: Vec<f64>, deviation: f64 },

    #[error("failure at sample point {point:?}: {source}")]
    PointFailure {
        point: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid model parameter: {0}")]
    BadModelParameter(String),

    #[error("invalid argument: {0}")]
    BadArgument(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("inconsistent curvature data: {0}")]
    InconsistentInput(String),

    #[error("block size q={q} out of range for dimension n={n}")]
    BlockSizeOutOfRange { q: usize, n: usize },

    #[error("lambda={0} outside the closed interval [-1, 1]")]
    LambdaOutOfRange(f64),

    #[error("invalid trial configuration: {0}")]
    BadTrialConfig(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("manifold file error: {0}")]
    ManifoldFile(String),
}
