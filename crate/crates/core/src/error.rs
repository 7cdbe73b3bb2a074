use thiserror::Error;

use crate::mcs::McsReport;
use crate::tolerance::ToleranceReport;

/// Errors produced by lattice construction, validation and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for {size} elements")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("cover relation contains a cycle through element {0}")]
    CycleDetected(usize),

    #[error("pair ({lower}, {upper}) is not a cover: {via} lies strictly between")]
    NotCovers {
        lower: usize,
        upper: usize,
        via: usize,
    },

    #[error("not a lattice: elements {a} and {b} have no {which}")]
    NotALattice {
        a: usize,
        b: usize,
        which: &'static str,
    },

    #[error("not a lattice: {0}")]
    EmptyLattice(&'static str),

    #[error("relation has dimension {found}, lattice has {expected} elements")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("elements {0} and {1} are not comparable")]
    NotComparable(usize, usize),

    #[error("relation is not a tolerance ({} violation(s))", .0.violations.len())]
    NotATolerance(ToleranceReport),

    #[error("malformed system: {0}")]
    MalformedSystem(String),

    #[error("system fails the axioms ({} violation(s))", .0.errors().count())]
    InvalidSystem(Box<McsReport>),

    #[error("system is not monotone")]
    NotMonotone,

    #[error("lattice is not modular: a={0} b={1} c={2}")]
    NotModular(usize, usize, usize),

    #[error("internal theorem violation: {0}")]
    InternalTheoremViolation(String),

    #[error("generated lattice has {size} elements, limit is {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("unknown generator kind or bad parameters: {0}")]
    UnknownKind(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
