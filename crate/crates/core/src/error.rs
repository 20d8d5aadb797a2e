use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::exactnum::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    MalformedRational(String),
    InvalidPiecewise(String),
    Discontinuous {
        at: Box<Rational>,
        left: Box<Rational>,
        right: Box<Rational>,
    },
    UnknownVariable(String),
    TooManyVariables(usize),
    EmptyPolytope {
        constraints: Vec<String>,
    },
    UnboundedPolytope {
        direction: Vec<(String, Rational)>,
        constraints: Vec<String>,
    },
    InvalidQuintuple(String),
    NotFano(i64),
    InvalidSingularity(String),
    SingularityMismatch {
        label: String,
        declared: String,
        expected: String,
    },
    UnknownCurve(String),
    UnknownSingularity(String),
    NotCoordinateCurve(String),
    AdjunctionUndefined(String),
    Underdetermined(String),
    Inconsistent(String),
    InvalidSurface(String),
    NotNef(String),
    NotPseudoeffective(String),
    UnboundedThreshold(String),
    ZariskiDiverged,
    InvalidArgument(String),
    OracleUndefined(String),
    MalformedScript(String),
    MissingCertificate(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::MalformedRational(s) => write!(f, "malformed rational {s:?}"),
            Error::InvalidPiecewise(s) => write!(f, "invalid piecewise polynomial: {s}"),
            Error::Discontinuous { at, left, right } => write!(
                f,
                "piecewise polynomial is discontinuous at {at}: left {left}, right {right}"
            ),
            Error::UnknownVariable(v) => write!(f, "unknown variable {v:?}"),
            Error::TooManyVariables(n) => {
                write!(f, "polytope has {n} variables; at most 3 are supported")
            }
            Error::EmptyPolytope { constraints } => {
                write!(f, "polytope is empty; constraints: [{}]", constraints.join("; "))
            }
            Error::UnboundedPolytope {
                direction,
                constraints,
            } => {
                write!(f, "polytope is unbounded along (")?;
                for (i, (v, c)) in direction.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}={c}")?;
                }
                write!(f, "); constraints: [{}]", constraints.join("; "))
            }
            Error::InvalidQuintuple(s) => write!(f, "invalid quintuple: {s}"),
            Error::NotFano(i) => write!(f, "amplitude {i} is not positive; surface is not del Pezzo"),
            Error::InvalidSingularity(s) => write!(f, "invalid quotient singularity: {s}"),
            Error::SingularityMismatch {
                label,
                declared,
                expected,
            } => write!(
                f,
                "singularity {label}: declared type {declared} does not match {expected} computed from the weights"
            ),
            Error::UnknownCurve(c) => write!(f, "unknown curve {c:?}"),
            Error::UnknownSingularity(s) => write!(f, "unknown singular point {s:?}"),
            Error::NotCoordinateCurve(c) => write!(f, "curve {c:?} is not a coordinate curve"),
            Error::AdjunctionUndefined(s) => write!(f, "adjunction not applicable: {s}"),
            Error::Underdetermined(s) => write!(f, "intersection table under-determined at {s}"),
            Error::Inconsistent(s) => write!(f, "intersection data inconsistent at {s}"),
            Error::InvalidSurface(s) => write!(f, "invalid surface model: {s}"),
            Error::NotNef(s) => write!(f, "divisor is not nef: {s}"),
            Error::NotPseudoeffective(s) => write!(f, "divisor is not pseudoeffective: {s}"),
            Error::UnboundedThreshold(s) => write!(f, "threshold is unbounded: {s}"),
            Error::ZariskiDiverged => f.write_str("Zariski decomposition did not terminate"),
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
            Error::OracleUndefined(s) => write!(f, "oracle undefined: {s}"),
            Error::MalformedScript(s) => write!(f, "malformed certificate script: {s}"),
            Error::MissingCertificate(s) => write!(f, "missing certificate for {s}"),
        }
    }
}

impl core::error::Error for Error {}
