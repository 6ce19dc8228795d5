use alloc::string::String;
use core::fmt;

/// Errors surfaced by graph construction, kernel shape checks, and
/// configuration validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Inner dimensions of a matrix operation disagree.
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// An edge endpoint or matrix index lies outside its declared bound.
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },
    /// Edge weights must be nonnegative.
    NegativeWeight { u: usize, v: usize, weight: f64 },
    /// A configuration or argument value violates its contract.
    InvalidParam(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { op, left, right } => write!(
                f,
                "{op}: shape mismatch between {}x{} and {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::IndexOutOfRange { what, index, bound } => {
                write!(f, "{what} index {index} out of range (bound {bound})")
            }
            Error::NegativeWeight { u, v, weight } => {
                write!(f, "edge ({u},{v}) has negative weight {weight}")
            }
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
