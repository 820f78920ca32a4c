use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame parameters: {0}")]
    InvalidParams(String),

    #[error("frame parameters differ: {left} vs {right}")]
    ParamMismatch { left: String, right: String },

    #[error("length {got} does not match frame size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("index ({k}, {l}) outside the {m}x{n} fundamental period")]
    IndexOutOfRange { k: i64, l: i64, m: usize, n: usize },

    #[error("path {index}: {field} = {value} is not on the sampling lattice (cyclic mode needs integer bins, got {bins} bins)")]
    OffGridPath {
        index: usize,
        field: &'static str,
        value: f64,
        bins: f64,
    },

    #[error("path {index}: {reason}")]
    InvalidPath { index: usize, reason: String },

    #[error("channel has no paths")]
    EmptyChannel,

    #[error("duplicate filter tap at ({0}, {1})")]
    DuplicateTap(i64, i64),

    #[error("noise power must be non-negative, got {0}")]
    NegativeNoisePower(f64),

    #[error("power profile is all zero")]
    ZeroProfile,

    #[error("response to the reference pulse is zero")]
    ZeroResponse,

    #[error("{0}")]
    Invalid(String),

    #[error("malformed channel description: {0}")]
    Json(#[from] serde_json::Error),
}
