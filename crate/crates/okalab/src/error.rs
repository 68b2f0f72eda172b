//! Error type shared by all modules.
//!
//! Errors split into two classes: domain/precondition violations (bad
//! inputs, radii too close to a divisor sheet, malformed specs) and
//! numerical rejections (a computation that refuses to certify its own
//! answer). The CLI maps the former to exit code 2 and the latter to 3.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input must be a nonzero finite complex number")]
    ZeroInput,
    #[error("branch value does not invert: |exp(log_value) - point| exceeds 1e-12 relative")]
    BranchMismatch,
    #[error("sample {index} of the path is zero")]
    ZeroSample { index: usize },
    #[error("path must start at the branched point (relative distance {distance:.3e})")]
    PathStartMismatch { distance: f64 },
    #[error("loop path needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },
    #[error(
        "angular separation {separation:.4} rad at step {index} reaches the pi/2 unwrapping limit"
    )]
    AngularSeparation { index: usize, separation: f64 },
    #[error(
        "adaptive refinement exhausted at depth {max_depth} (zero crossing or wild phase jump)"
    )]
    RefinementExhausted { max_depth: u32 },
    #[error("winding rejected: residual {residual:.4} rad is not below pi")]
    WindingRejected { residual: f64 },
    #[error("invalid truncation budget: {reason}")]
    InvalidBudget { reason: String },
    #[error("truncation budget exhausted: {needed} terms needed per product, {max_terms} allowed")]
    BudgetExhausted { needed: u32, max_terms: u32 },
    #[error("sheet index {k} outside the overflow guard |k| <= {max}")]
    SheetIndexOverflow { k: i64, max: i64 },
    #[error(
        "circle of radius {radius} lies within relative distance {margin:.3e} of a divisor sheet"
    )]
    SheetProximity { radius: f64, margin: f64 },
    #[error("evaluation at or near a zero (|value| = {magnitude:.3e} not certified nonzero)")]
    AtOrNearZero { magnitude: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("loop index pair ({a}, {b}) out of range for dimension {n}")]
    LoopIndexOutOfRange { a: usize, b: usize, n: usize },
    #[error("exponent entry {value} exceeds the |entry| <= {max} bound")]
    ExponentOverflow { value: i64, max: i64 },
    #[error("invalid divisor spec: {reason}")]
    InvalidDivisorSpec { reason: String },
    #[error("invalid lattice data: {reason}")]
    InvalidLattice { reason: String },
    #[error("lattice pairing overflowed 64-bit integers")]
    LatticeOverflow,
    #[error("invalid Laurent polynomial: {reason}")]
    InvalidPolynomial { reason: String },
    #[error("tangential (non-transversal) crossing of the torus detected")]
    TangentialCrossing,
    #[error("persistent zeros near the contour |zeta| = {radius} after {attempts} perturbations")]
    PersistentBoundaryZero { radius: f64, attempts: u32 },
    #[error(
        "negative zero count {count}: contour winding inconsistent with a holomorphic function"
    )]
    NegativeCount { count: i64 },
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },
}

impl Error {
    /// True for rejections of a numerical verdict (the computation ran but
    /// refuses to certify), false for domain/precondition violations.
    pub fn is_numerical_rejection(&self) -> bool {
        matches!(
            self,
            Error::RefinementExhausted { .. }
                | Error::WindingRejected { .. }
                | Error::BudgetExhausted { .. }
                | Error::TangentialCrossing
                | Error::PersistentBoundaryZero { .. }
                | Error::NegativeCount { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
