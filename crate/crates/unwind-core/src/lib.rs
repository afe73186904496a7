//! Nonlinear unwinding series expansions of analytic functions on the
//! unit disc.
//!
//! The crate realizes, at fixed truncation order M on a power-of-two
//! boundary grid N, the expansion scheme
//!
//! ```text
//! f = Q_{b_1} f  +  b_1 Q_{b_2} T_{conj(b_1)} f  +  b_1 b_2 Q_{b_3} T_{conj(b_1 b_2)} f  +  ...
//! ```
//!
//! driven by a sequence of closed-unit-ball H-infinity multipliers b_n:
//! Taylor series (b_n = z), Blaschke unwinding and adaptive Fourier
//! decompositions (b_n Blaschke factors), outer-multiplier expansions,
//! and a diagonal-weight RKHS generalization with multiplication
//! operators as truncated matrices.

pub mod error;
pub mod expansion;
mod fft;
pub mod hardy;
pub mod multipliers;
pub mod rkhs;
pub mod roots;
pub mod strategies;
pub mod toeplitz;

pub use error::{CoreError, Result};
pub use expansion::{
    expand, expand_with_spec, model_projection, tmw_coefficients, ExpandOptions, ExpansionResult,
    ExpansionTerm, ReconstructionReport, TmwElement, TmwExpansion,
};
pub use hardy::{
    cauchy_kernel, hp_norm, riesz_project, to_boundary, AnalyticCoeffs, BoundarySamples, DiscPoint,
};
pub use multipliers::{
    classify_blaschke_tail, classify_by_probe, BoundarySymbol, Multiplier, MultiplierKind,
    MultiplierProduct, TailClass, TailRule,
};
pub use rkhs::{
    adjoint_apply, expand_rkhs, mult_matrix, operator_norm_estimate, MultOperatorMatrix,
    RkhsExpansion, WeightedSpace,
};
pub use roots::{roots_in_disc, InDiscRoots, RootWithMultiplicity};
pub use strategies::{
    classical_unwinding_step, classify_tail, unwind_series, ProductTail, Strategy, StrategySpec,
    StrategyStep, UnwindSeries, UnwindStep,
};
pub use toeplitz::{ToeplitzContext, TruncatedOutput};
