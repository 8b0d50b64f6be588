use thiserror::Error;

/// Errors raised while building states, elements, schemes and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IfmError {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("pixel {pixel}: transmission {value} is outside [0, 1]")]
    TransmissionOutOfRange { pixel: usize, value: f64 },

    #[error("pattern has {got} pixels but dimension is {expected}")]
    PatternLength { expected: usize, got: usize },

    #[error("operator acts on dimension {op} but state has dimension {state}")]
    DimensionMismatch { op: usize, state: usize },

    #[error("basis index {index} is assigned to more than one detector")]
    DuplicateDetector { index: usize },

    #[error("basis index {index} is outside the state space of size {len}")]
    BasisIndexOutOfRange { index: usize, len: usize },

    #[error("{0} requires an opaque/transparent pattern, got semi-transparent pixels")]
    SemiTransparentUnsupported(&'static str),

    #[error("pixel {pixel}: asymptotic formula has a pole at T = 1 (1 - sqrt(T) = 0)")]
    AsymptoticPole { pixel: usize },

    #[error("{opaque} opaque pixels do not fit in dimension {dim}")]
    InvalidOpaqueCount { opaque: usize, dim: usize },

    #[error("cycle count must be at least 1")]
    ZeroCycles,

    #[error("unknown scheme kind `{0}`")]
    UnknownScheme(String),

    #[error("scheme `{kind}` does not support {what}")]
    Unsupported {
        kind: &'static str,
        what: &'static str,
    },

    #[error("invalid rotation angle {0}")]
    InvalidAngle(f64),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("state norm squared {0} exceeds 1")]
    NotSubNormalized(f64),

    #[error("unknown detector label `{0}`")]
    UnknownDetector(String),
}

pub type Result<T> = std::result::Result<T, IfmError>;
