use std::path::PathBuf;

use thiserror::Error;

use crate::grid::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {point} is outside the {width}x{height} image")]
    OutOfBounds { point: Point, width: u32, height: u32 },

    #[error("edges {a} and {b} share no terminal point")]
    NoSharedTerminal { a: usize, b: usize },

    #[error("no edge with id {0}")]
    UnknownEdge(usize),

    #[error("no ambiguity with id {0}")]
    UnknownAmbiguity(usize),

    #[error("fit points are coincident, no direction is defined")]
    DegenerateFit,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("segments do not belong to this image: {0}")]
    Mismatch(String),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed image: {reason}")]
    Malformed { path: PathBuf, reason: String },

    #[error("{path}: unsupported image format ({detail})")]
    UnsupportedFormat { path: PathBuf, detail: String },

    #[error("{path}: invalid trace document: {reason}")]
    Document { path: PathBuf, reason: String },

    #[error("invalid pipeline step `{step}`: {reason}")]
    Pipeline { step: String, reason: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for problems with input data or files, as opposed to misuse of
    /// the API or command line.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Read { .. }
                | Error::Write { .. }
                | Error::Malformed { .. }
                | Error::UnsupportedFormat { .. }
                | Error::Document { .. }
                | Error::Csv(_)
        )
    }
}
