//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by frame construction and the analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a frame needs at least one world")]
    EmptyFrame,

    #[error("at most {max} worlds are supported, got {requested}")]
    TooManyWorlds { requested: usize, max: usize },

    #[error("edge ({from}, {to}) leaves the world range 1..={world_count}")]
    EdgeOutOfRange {
        from: usize,
        to: usize,
        world_count: usize,
    },

    #[error("world {world} is outside 1..={world_count}")]
    WorldOutOfRange { world: usize, world_count: usize },

    #[error("valuation of length {got} does not fit a frame with {expected} worlds")]
    LengthMismatch { expected: usize, got: usize },

    #[error("an induced subframe needs a non-empty world subset")]
    EmptySubset,

    #[error("the meet of an empty family is undefined")]
    EmptyMeet,

    #[error("{operation} expects {expected} operand(s), got {got}")]
    ArityMismatch {
        operation: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{analysis} is capped at {cap} worlds, frame has {world_count}")]
    CapExceeded {
        analysis: &'static str,
        cap: usize,
        world_count: usize,
    },

    #[error("{what} does not fit the supported integer range")]
    Overflow { what: &'static str },

    #[error("a binomial needs two distinct monomials")]
    ZeroBinomial,

    #[error("patterns must force the strict index non-positive as well")]
    StrictIndexNotForced,

    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// Failure to understand a frame file, with position information when known.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Other(String),
}

impl ParseError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Line {
            line,
            message: message.into(),
        }
    }

    pub fn other(message: impl Into<String>) -> Self {
        ParseError::Other(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
