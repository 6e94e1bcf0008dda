use core::fmt;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// A root could not be bracketed by a sign change on `[lo, hi]`.
    NoBracket { what: &'static str, lo: f64, hi: f64 },
    /// An iteration hit its cap before reaching the requested accuracy.
    NoConvergence { what: &'static str },
    /// The evaluation point sits within the pole-exclusion distance of a
    /// zero of `J_ν`.
    Pole { what: &'static str, at: f64 },
    /// A documented precondition does not hold.
    Precondition { what: &'static str, value: f64 },
    /// The zigzag search ran out of steps without closing the chain.
    Exhausted {
        side: &'static str,
        steps: usize,
        best_margin: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what}: argument {value} out of domain"),
            Error::NoBracket { what, lo, hi } => {
                write!(f, "{what}: no sign change on [{lo}, {hi}]")
            }
            Error::NoConvergence { what } => write!(f, "{what}: iteration did not converge"),
            Error::Pole { what, at } => write!(f, "{what}: evaluation at {at} hits a pole"),
            Error::Precondition { what, value } => {
                write!(f, "{what}: precondition violated (value {value})")
            }
            Error::Exhausted {
                side,
                steps,
                best_margin,
            } => write!(
                f,
                "zigzag search on the {side} side exhausted after {steps} steps \
                 (best margin {best_margin})"
            ),
        }
    }
}

impl core::error::Error for Error {}
