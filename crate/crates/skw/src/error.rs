use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Grid construction rejected (odd or too-small `n`, non-positive length).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Field/grid or field/field shape mismatch.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Dealias rule other than 1/2 or 2/3.
    #[error("unsupported dealias rule {0}; expected 1/2 or 2/3")]
    UnsupportedRule(f64),

    /// Physical or solver parameters out of range (delta = 0, dt < 0, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Operation applied to a space-time field of the wrong modulation kind.
    #[error("space kind mismatch: {0}")]
    SpaceMismatch(String),

    /// A fit or ratio was requested on degenerate input (too few points,
    /// zero norms, no amplitude spread).
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Non-finite samples appeared during time integration.
    #[error("solution blew up at t = {t}")]
    Blowup { t: f64 },

    /// Run-configuration text or preset descriptor rejected; `line` is
    /// 1-based, with 0 for errors that have no source line.
    #[error("config error{}: {msg}", line_tag(*.line))]
    Config { line: usize, msg: String },

    /// Snapshot bytes rejected (bad magic, version, or truncation).
    #[error("snapshot format error: {0}")]
    Format(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn config(line: usize, msg: impl Into<String>) -> Self {
        Error::Config { line, msg: msg.into() }
    }
}

fn line_tag(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" at line {line}")
    }
}

pub type Result<T> = std::result::Result<T, Error>;
