use thiserror::Error;

/// Failures raised by the numeric kernel and the s-space machinery built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("map evaluation failed: {0}")]
    EvaluationFailure(String),

    #[error("pushforward left the target tangent space (residual {residual:.3e})")]
    TangencyViolation { residual: f64 },

    #[error("least-squares residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("group membership violated: {0}")]
    MembershipViolation(String),

    #[error("sampler gave up after {attempts} rejections")]
    SamplerExhausted { attempts: usize },

    #[error("invalid block signature s={s}, r={r}, n={n}")]
    BadSignature { s: usize, r: usize, n: usize },

    #[error("matrix map violates the invariance property (deviation {deviation:.3e})")]
    InvarianceViolation { deviation: f64 },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("iterate {step} does not come from a tensor (deviation {deviation:.3e})")]
    NotATensor { step: usize, deviation: f64 },

    #[error("tangent space does not split as horizontal + vertical (rank defect {rank_defect})")]
    SplittingFailure { rank_defect: usize },

    #[error("s-space `{0}` carries no fiber split")]
    MissingFiberSplit(String),

    #[error("tensor signature {found:?} differs from the requested {expected:?}")]
    SignatureMismatch {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },

    #[error("frame twist destroys rigid base change (deviation {deviation:.3e})")]
    RigidityLost { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
