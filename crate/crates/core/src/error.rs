use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A chain weight below 2 (the component would not be a valid
    /// exceptional curve of a minimal resolution).
    InvalidWeight { index: usize, weight: i64 },
    EmptyChain,
    /// `1/q(1,a)` with `q < 2`, `a` out of `(0, q)` or `gcd(a, q) != 1`.
    InvalidType { q: BigInt, a: BigInt },
    Parse { input: String, reason: &'static str },
    TooManySingularities(usize),
    UnknownCase(String),
    Unbounded(&'static str),
    IndexOutOfRange { singularity: usize, component: usize },
    /// Equation (2) of the curve formula needs at most two hit components per point.
    Eq2Inapplicable { singularity: usize },
    SingularMatrix,
    Internal(&'static str),
    NotMinusOneCurve(String),
    UnknownCurve(String),
    DuplicateCurve(String),
    /// A blow-up location whose curves do not pairwise meet.
    ZeroIntersection(String, String),
    NegativeIntersection(String, String),
    /// A state that fails the Q-homology projective plane check.
    NotQhpp(String),
    EmptyLocation,
    FirstWeightNotTwo,
    ChainTooShort,
    BoundExceeded { requested: usize, max: usize },
    CyclicFiber,
    InvalidFiber(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidWeight { index, weight } => {
                write!(f, "chain weight {weight} at position {} is below 2", index + 1)
            }
            Error::EmptyChain => f.write_str("operation requires a nonempty chain"),
            Error::InvalidType { q, a } => write!(f, "1/{q}(1,{a}) is not a cyclic quotient type"),
            Error::Parse { input, reason } => write!(f, "cannot parse {input:?}: {reason}"),
            Error::TooManySingularities(n) => {
                write!(f, "{n} singular points exceed the maximum of 5")
            }
            Error::UnknownCase(id) => write!(f, "unknown scan case {id:?}"),
            Error::Unbounded(what) => write!(f, "enumeration is unbounded: missing {what}"),
            Error::IndexOutOfRange { singularity, component } => write!(
                f,
                "component {component} of singular point {singularity} is out of range"
            ),
            Error::Eq2Inapplicable { singularity } => write!(
                f,
                "eq2_inapplicable: curve meets more than two components of singular point {singularity}"
            ),
            Error::SingularMatrix => f.write_str("intersection matrix is singular"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
            Error::NotMinusOneCurve(label) => write!(f, "curve {label} is not a (-1)-curve"),
            Error::UnknownCurve(label) => write!(f, "no curve labelled {label}"),
            Error::DuplicateCurve(label) => write!(f, "curve label {label} is used twice"),
            Error::ZeroIntersection(a, b) => {
                write!(f, "curves {a} and {b} do not meet, so no common point exists")
            }
            Error::NegativeIntersection(a, b) => {
                write!(f, "distinct curves {a} and {b} cannot meet negatively")
            }
            Error::NotQhpp(why) => write!(f, "not a Q-homology projective plane resolution: {why}"),
            Error::EmptyLocation => f.write_str("blow-up location names no curve"),
            Error::FirstWeightNotTwo => f.write_str("first chain weight must be 2"),
            Error::ChainTooShort => f.write_str("chain must have at least two components"),
            Error::BoundExceeded { requested, max } => {
                write!(f, "component bound {requested} exceeds the supported maximum {max}")
            }
            Error::CyclicFiber => f.write_str("fiber dual graph must be a tree"),
            Error::InvalidFiber(msg) => write!(f, "invalid fiber: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
