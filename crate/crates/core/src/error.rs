use thiserror::Error;

use crate::complex::Simplex;

/// Errors raised by the library.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[non_exhaustive]
pub enum Error {
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("face {0} is not in the complex")]
    FaceNotInComplex(Simplex),

    #[error("({x}, {y}) is not a free pair")]
    NotFreePair { x: Simplex, y: Simplex },

    #[error("({x}, {y}) is not a covering pair")]
    NotCoveringPair { x: Simplex, y: Simplex },

    #[error("subset is not {0}-pure")]
    NotPure(usize),

    #[error("complex is not a pseudomanifold")]
    NotPseudomanifold,

    #[error("complex is not a normal pseudomanifold")]
    NotNormal,

    #[error("no altitude given for face {0}")]
    MissingAltitude(Simplex),

    #[error("not a stack: F({face}) < F({coface})")]
    StackViolation { face: Simplex, coface: Simplex },

    #[error("not a Morse stack: face {0} is in more than one flat pair")]
    NotMorse(Simplex),

    #[error("invalid gradient path: {0}")]
    InvalidPath(String),

    #[error("gradient is not a matching: face {0} occurs twice")]
    NotAMatching(Simplex),

    #[error("gradient contains a closed V-path through {0}")]
    GradientCycle(Simplex),

    #[error("{what} has {size} elements, limit is {limit}")]
    SizeBound {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("face set is not closed: {0} is present without one of its faces")]
    NotClosed(Simplex),

    #[error("graph is disconnected after contracting the roots")]
    Disconnected,

    #[error("root set is empty")]
    NoRoots,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
