use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("inverse transform is not real: imaginary residue {residue:e} exceeds {bound:e}")]
    NonRealResult { residue: f64, bound: f64 },
    #[error("band {band} out of range for {count} bands")]
    BandOutOfRange { band: usize, count: usize },
    #[error("singular value decomposition did not converge")]
    SvdFailure,
    #[error("filter length {found} does not match band count {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("threshold must be non-negative, got {0}")]
    NegativeThreshold(f64),
    #[error("invalid filter coefficient {0}")]
    InvalidFilter(f64),
    #[error("invalid solver configuration: {0}")]
    ConfigInvalid(String),
    #[error("ratio {0} outside [0, 1]")]
    RatioOutOfRange(f64),
    #[error("band-2 deviation {0} is not positive")]
    DegenerateDeviation(f64),
    #[error("tubal rank {rank} exceeds min(I1, I2) = {max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("reference tensor is zero")]
    ZeroReference,
    #[error("image {height}x{width} is smaller than the {window}x{window} window")]
    ImageTooSmall {
        width: usize,
        height: usize,
        window: usize,
    },
}

impl Error {
    /// Stable variant name, used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDims(_) => "InvalidDims",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite(_) => "NonFinite",
            Error::NonRealResult { .. } => "NonRealResult",
            Error::BandOutOfRange { .. } => "BandOutOfRange",
            Error::SvdFailure => "SvdFailure",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NegativeThreshold(_) => "NegativeThreshold",
            Error::InvalidFilter(_) => "InvalidFilter",
            Error::ConfigInvalid(_) => "ConfigInvalid",
            Error::RatioOutOfRange(_) => "RatioOutOfRange",
            Error::DegenerateDeviation(_) => "DegenerateDeviation",
            Error::InvalidRank { .. } => "InvalidRank",
            Error::ZeroReference => "ZeroReference",
            Error::ImageTooSmall { .. } => "ImageTooSmall",
        }
    }
}
