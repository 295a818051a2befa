//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed groupoid spec: {reason} (witness: {witness})")]
    MalformedSpec { reason: String, witness: String },

    #[error("unknown unit `{0}`")]
    UnknownUnit(String),

    #[error("not a principal groupoid: arrow `{witness}` has equal source and range")]
    NotPrincipal { witness: String },

    #[error("enumeration cap exceeded at degree {degree}: {count} tuples (cap {cap})")]
    EnumerationCapExceeded { degree: usize, count: usize, cap: usize },

    #[error("boundary composition is nonzero: d_{degree} * d_{} has entry {value} at ({row},{col})", degree + 1)]
    NotAComplex { degree: usize, row: usize, col: usize, value: String },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch { context: String, expected: String, got: String },

    #[error("colouring is not {scale}-Lebesgue: no part swallows the fibre window at unit `{witness}`")]
    NotLebesgue { scale: String, witness: String },

    #[error("colouring is not K-bounded: part {part} has arrow `{witness}` outside the scale")]
    NotBounded { part: usize, witness: String },

    #[error("morphism targets have different kinds ({left} vs {right})")]
    TargetKindMismatch { left: String, right: String },

    #[error("no intersection witness for the closeness homotopy at degree {degree}, simplex {simplex}")]
    IntersectionWitnessNotFound { degree: usize, simplex: String },

    #[error("anti-Cech sequence has not stabilised after {steps} steps")]
    NotStabilized { steps: usize },

    #[error("invalid dad witness: {0}")]
    WitnessInvalid(String),

    #[error("boundary of a degree-zero chain is undefined")]
    DegreeZero,

    #[error("not a subgroupoid: {reason} (witness: {witness})")]
    NotSubgroupoid { reason: String, witness: String },

    #[error("invalid metric space: {0}")]
    BadMetric(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
