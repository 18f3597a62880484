use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(String),
    /// Pointwise evaluation was requested where the object is only a measure
    /// (the d = 3 wave kernel and everything built from it).
    MeasureValued { dim: usize },
    /// A singular covariance was evaluated at the origin.
    OriginSingularity,
    /// Adaptive quadrature did not reach its tolerance.
    Quadrature { estimate: f64, error: f64 },
    /// The model violates Dalang's condition.
    DalangDivergent,
    /// Combinatorial size guard.
    SizeGuard { n: usize, limit: usize },
    /// The requested combination of options is not implemented.
    Unsupported(String),
    /// A potential returned a non-finite value or exceeded its bound.
    UnboundedPotential { value: f64 },
    /// A path left the spatial window of a discretised field.
    OutOfRange { position: f64 },
    /// An input collection was empty.
    Empty,
    /// Text input could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::MeasureValued { dim } => write!(
                f,
                "the kernel is a measure in d={dim}; use sampling or pairing against test functions"
            ),
            Error::OriginSingularity => write!(f, "covariance is singular at the origin"),
            Error::Quadrature { estimate, error } => write!(
                f,
                "quadrature failed to converge (estimate {estimate:e}, error estimate {error:e})"
            ),
            Error::DalangDivergent => write!(f, "Dalang's condition fails: the integral diverges"),
            Error::SizeGuard { n, limit } => {
                write!(f, "size guard: n={n} exceeds the limit {limit}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::UnboundedPotential { value } => {
                write!(f, "potential is not bounded on the reachable set (value {value})")
            }
            Error::OutOfRange { position } => {
                write!(f, "position {position} lies outside the discretised field")
            }
            Error::Empty => write!(f, "empty input"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidArgument(String::from(msg))
}
