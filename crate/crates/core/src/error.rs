use std::path::PathBuf;

/// Errors produced across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("empty corner list: cannot infer the ambient dimension")]
    EmptyCorners,
    #[error("invalid box: lower corner is not below the upper corner")]
    InvalidBox,
    #[error("delta must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("expected a rectangle module (one birth, one death corner)")]
    NotRectangle,
    #[error("grid mismatch between images")]
    GridMismatch,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("filtration violates the face condition at simplex {0}")]
    FaceOrder(usize),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for bad input, 2 for bad configuration, 3 for
    /// internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Config { .. } | Error::InvalidDelta(_) | Error::InvalidGrid(_) => 2,
            Error::Degenerate(_) | Error::GridMismatch | Error::FaceOrder(_) => 3,
            _ => 1,
        }
    }

    /// Short machine-readable tag used on stderr.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::EmptyCorners => "empty_corners",
            Error::InvalidBox => "invalid_box",
            Error::InvalidDelta(_) => "invalid_delta",
            Error::Degenerate(_) => "degenerate",
            Error::NotRectangle => "not_rectangle",
            Error::GridMismatch => "grid_mismatch",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::FaceOrder(_) => "face_order",
            Error::Parse { .. } => "parse",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Config { .. } => "config",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
