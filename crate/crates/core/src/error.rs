use thiserror::Error;

/// Errors raised by the construction and verification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("loop is numerically singular: min sampled |det| = {min_det:.3e}")]
    SingularLoop { min_det: f64 },

    #[error("factorization did not converge: residual {residual:.3e} after {max_size} Toeplitz rows")]
    NoConvergence { residual: f64, max_size: usize },

    #[error("loop determinant drifts from 1 by {drift:.3e}, not in SL2")]
    NotSl2 { drift: f64 },

    #[error("loop lies outside the Birkhoff big cell (condition estimate {cond:.3e})")]
    OutsideBigCell { cond: f64 },

    #[error("invalid parameters for `{family}`: {reason}")]
    BadParams { family: String, reason: String },

    #[error("gauge matrix is not a plus loop: {reason}")]
    NotPlusLoop { reason: String },

    #[error("step size underflow while integrating (step {step:.3e}, path length {path_len:.3e})")]
    StepUnderflow { step: f64, path_len: f64 },

    #[error("determinant drift {drift:.3e} exceeds tolerance while integrating")]
    DetDrift { drift: f64 },

    #[error("unknown closed-form family `{0}`")]
    BadFamily(String),

    #[error("frame is not unitary on the unit circle: residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("(gamma2 - gamma1)/pi must not be an integer, got gamma1 = {gamma1}, gamma2 = {gamma2}")]
    BadGammas { gamma1: f64, gamma2: f64 },

    #[error("Sym parameter q must be nonzero")]
    ZeroQ,

    #[error("stereographic projection pole: x4 = 1")]
    ProjectionPole,

    #[error("no closing parameter exists: r^2 = {r_squared:.6e} < 0")]
    NoClosing { r_squared: f64 },

    #[error("parameters do not satisfy the closing condition (residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("unknown catalog surface `{0}`")]
    UnknownSurface(String),

    #[error("integration path passes within {dist:.3e} of the pole/puncture at {at}")]
    PathThroughPole { at: num_complex::Complex64, dist: f64 },

    #[error("degenerate metric: conformal factor {value:.3e} below threshold")]
    DegenerateMetric { value: f64 },

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("invalid scene: {0}")]
    BadScene(String),

    #[error("mesh contains a non-finite coordinate at vertex {index}")]
    NonFiniteVertex { index: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
