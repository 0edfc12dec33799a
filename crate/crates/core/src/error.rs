use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("exponent {0} too large for an explicit generator matrix (limit 16)")]
    ExponentTooLarge(u32),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid code configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("non-finite density value at y = {0}")]
    NonFiniteDensity(f64),
    #[error("quadrature did not converge (estimated error {0:e})")]
    QuadratureDiverged(f64),
    #[error("symbol {0} is outside the channel input alphabet")]
    AlphabetMismatch(f64),
    #[error("observation does not match the channel variant")]
    VariantMismatch,
    #[error("LDPC construction failed for seed {seed}: {reason}")]
    LdpcConstruction { seed: u64, reason: String },
    #[error("malformed {format} data: {reason}")]
    Format { format: &'static str, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Wav(#[from] hound::Error),
}
