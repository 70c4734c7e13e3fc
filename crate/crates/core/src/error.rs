//! Error type shared by the whole crate.

use alloc::string::String;

/// Crate result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures raised by constructors, operators and solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two points (or a point and a set) of different dimension met.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Dimension required by the left operand.
        expected: usize,
        /// Dimension of the offending operand.
        found: usize,
    },
    /// A point with zero coordinates was requested.
    #[error("points must have at least one coordinate")]
    EmptyPoint,
    /// A coordinate or scalar was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    /// A convex set or set image descriptor is inconsistent.
    #[error("invalid set descriptor: {0}")]
    InvalidSet(String),
    /// A scalar parameter lies outside its admissible range.
    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        /// Parameter name.
        name: &'static str,
        /// Offending value.
        value: f64,
        /// Admissible range, human readable.
        range: &'static str,
    },
    /// The Hausdorff distance between these two image variants is not computed.
    #[error("unsupported set pairing: {0}")]
    UnsupportedPairing(&'static str),
    /// A fixed-point checker was given a map without declared fixed points.
    #[error("map declares no fixed points")]
    MissingFixedPoints,
    /// A named theoretical condition is violated by the parameters.
    #[error("infeasible parameters: condition {condition} fails ({detail})")]
    Infeasible {
        /// The condition, e.g. `0 < γb < τ`.
        condition: &'static str,
        /// Values that violate it.
        detail: String,
    },
    /// The schedule was asked for an index past its declared horizon.
    #[error("schedule exhausted at n = {0}")]
    ScheduleExhausted(usize),
    /// A probe point offered as a member of Ω failed certification.
    #[error("probe {index} is not a certified common point (residual {residual:e})")]
    UncertifiedProbe {
        /// Index of the probe in the supplied list.
        index: usize,
        /// Largest of its fixed-point and inclusion residuals.
        residual: f64,
    },
    /// An iterate left the finite range.
    #[error("non-finite iterate at n = {0}")]
    NonFiniteIterate(usize),
    /// A problem instance violates one of its structural invariants.
    #[error("invalid problem instance: {0}")]
    InvalidInstance(String),
}
