use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("undefined azimuth: transmit and receive points coincide")]
    UndefinedAzimuth,

    #[error("zero propagation distance between tx {tx} and rx {rx}")]
    ZeroPropagationDistance { tx: usize, rx: usize },

    #[error("equivalent order undefined: mode orders are not an arithmetic progression")]
    EquivalentOrderUndefined,

    #[error("omnidirectional, beamwidth undefined")]
    Omnidirectional,

    #[error("half-power beamwidth requires a consecutive mode group")]
    NotConsecutive,

    #[error("rank-zero channel")]
    RankZero,

    #[error("target CG {target} unreachable")]
    TargetUnreachable { target: f64 },

    #[error("curve does not bracket CG {target} on its decreasing tail")]
    NotBracketed { target: f64 },

    #[error("ZF undefined, singular channel")]
    SingularChannel,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length {len} is not a multiple of {multiple}")]
    BadLength { len: usize, multiple: usize },

    #[error("no vorticity difference, PASR undefined")]
    PasrUndefined,

    #[error("zero expected power in demux setting {setting}")]
    ZeroExpectedPower { setting: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
