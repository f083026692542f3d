use alloc::string::String;
use core::fmt;

/// Library-wide error type.
///
/// The three variants match the CLI exit-code classes: malformed or
/// inconsistent input data, violated mathematical contracts (divisibility
/// assertions, norm relations, determinant checks), and exhausted working
/// precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inputs are structurally invalid (bad prime, cardinality mismatch,
    /// missing table entries, level cap exceeded, ...).
    Input(String),
    /// A mathematical contract failed; signals corrupted data or a bug.
    Contract(String),
    /// An operation would drop the effective precision to zero or below.
    Precision(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(m) => write!(f, "input error: {m}"),
            Error::Contract(m) => write!(f, "contract violation: {m}"),
            Error::Precision(m) => write!(f, "precision exhausted: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(alloc::format!($($arg)*)) };
}
macro_rules! contract_err {
    ($($arg:tt)*) => { $crate::error::Error::Contract(alloc::format!($($arg)*)) };
}
macro_rules! precision_err {
    ($($arg:tt)*) => { $crate::error::Error::Precision(alloc::format!($($arg)*)) };
}

pub(crate) use {contract_err, input_err, precision_err};
