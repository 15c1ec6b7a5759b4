use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("pairing error: {0}")]
    Pairing(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("statistical error: {0}")]
    Statistical(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) => 2,
            Error::Dimension(_)
            | Error::Pairing(_)
            | Error::Statistical(_)
            | Error::Degenerate(_)
            | Error::Format(_)
            | Error::Io(_) => 3,
            Error::Numeric(_) | Error::Capacity(_) => 4,
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($fmt:tt)+) => {{
        // Bound first so NaN fails the check instead of slipping through.
        let ok: bool = $cond;
        if !ok {
            return Err($crate::error::Error::$variant(format!($($fmt)+)));
        }
    }};
}
pub(crate) use ensure;
