use std::io;
use std::path::PathBuf;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad magic bytes {0:?}, expected \"FT3D\"")]
    BadMagic(Vec<u8>),
    #[error("unsupported tensor file version {0}")]
    BadVersion(u8),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("{extra} unexpected bytes after the payload")]
    TrailingData { extra: usize },
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("frame {path} is {found:?}, expected {expected:?}")]
    InconsistentDims {
        path: PathBuf,
        expected: (u32, u32),
        found: (u32, u32),
    },
    #[error("no image frames in {0}")]
    EmptyDirectory(PathBuf),
    #[error("invalid filter spec {0:?}")]
    FilterSpec(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Core(#[from] ftrpca_core::Error),
    #[error("manifest serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::BadMagic(_) => "BadMagic",
            CliError::BadVersion(_) => "BadVersion",
            CliError::TruncatedPayload { .. } => "TruncatedPayload",
            CliError::TrailingData { .. } => "TrailingData",
            CliError::UnsupportedFormat(_) => "UnsupportedFormat",
            CliError::InconsistentDims { .. } => "InconsistentDims",
            CliError::EmptyDirectory(_) => "EmptyDirectory",
            CliError::FilterSpec(_) => "FilterSpec",
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.kind(),
            CliError::Json(_) => "ManifestError",
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}
