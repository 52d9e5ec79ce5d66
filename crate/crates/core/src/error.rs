use thiserror::Error;

use crate::formula::ParseError;
use crate::structures::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown moment `{0}`")]
    UnknownMoment(String),
    #[error("invalid point `{0}`: {1}")]
    InvalidPoint(String, &'static str),
    #[error("malformed point `{0}`, expected `moment/classRep`")]
    PointSyntax(String),
    #[error("point #{0} is not a point of the model")]
    PointOutOfRange(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("F not in language L")]
    FutureInL,
    #[error("enumeration bound exceeded: {what} needs {needed}, bound is {bound}")]
    Bound {
        what: &'static str,
        needed: usize,
        bound: usize,
    },
    #[error("map is not total: no image for {0}")]
    PartialMap(String),
    #[error("structure invalid:\n{0}")]
    Invalid(#[from] ValidationReport),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
