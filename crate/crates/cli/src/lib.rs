//! Internals of the `browave` command-line tool: unit parsing at the SI
//! boundary, figure dataset builders, the evolve drivers, and the run
//! manifest, kept in a library so integration tests can exercise them
//! directly.

// Validation uses `!(x > 0.0)` so NaN inputs are rejected along with
// nonpositive ones; `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csvout;
pub mod evolve;
pub mod figures;
pub mod manifest;
pub mod report;
pub mod units;

/// CLI-level failure, split by exit code: usage/validation problems exit 2,
/// anything that fails during the run (solver rejections included) exits 3.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Runtime(String),
}

impl AppError {
    pub fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }

    /// A usage error blaming a specific flag.
    pub fn flag(flag: &str, msg: impl std::fmt::Display) -> Self {
        AppError::Usage(format!("{flag}: {msg}"))
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "{m}"),
            AppError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<browave::Error> for AppError {
    fn from(e: browave::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}
