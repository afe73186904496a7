use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested truncation order {requested} exceeds grid capacity {capacity}")]
    TruncationCapacity { requested: usize, capacity: usize },

    #[error("grid size {grid} too small for truncation order {order} (need grid >= 2*order)")]
    AliasingRisk { grid: usize, order: usize },

    #[error("grid size {0} is not a power of two")]
    GridNotPowerOfTwo(usize),

    #[error("symbol leaves the closed unit ball: sup |b| = {sup} on the validation grid")]
    UnitBallViolation { sup: f64 },

    #[error("multiplier at step {index} violates the contraction bound: norm estimate {norm}")]
    ContractionViolation { index: usize, norm: f64 },

    #[error("bandwidth headroom exceeded at step {index}: need {needed} frequencies, grid holds {available}")]
    HeadroomViolation {
        index: usize,
        needed: usize,
        available: usize,
    },

    #[error("strategy exhausted at step {index} with no tail rule")]
    StrategyExhausted { index: usize },

    #[error("remainder is numerically degenerate: best captured energy {best:.3e}")]
    DegenerateRemainder { best: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("deflation incomplete: residual in-disc root at {root} with |g_next(root)| = {value:.3e}")]
    DeflationIncomplete { root: num_complex::Complex64, value: f64 },

    #[error("co-analytic composition defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    CommutationDefect { defect: f64, tolerance: f64 },

    #[error("rearrangement unsupported: input is not certifiably polynomial at this truncation ({0})")]
    RearrangementUnsupported(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range (have {len})")]
    IndexOutOfRange { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, CoreError>;
