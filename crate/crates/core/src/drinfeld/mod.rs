//! Drinfeld modules over k[t]: twisted polynomials, exponential and
//! logarithm coefficients, evaluation in completions at infinity, the
//! Carlitz period and windowed exponential preimages.

pub mod analytic;
pub mod module;
pub mod twisted;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use analytic::{carlitz_period, exp_preimage_window, LocalExp, LocalLog, Period, PreimageSolution};
pub use module::{DrinfeldModule, ExpCoeffs, ExpRecord, LogCoeffs};
pub use twisted::TwistedPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrinfeldError {
    #[error("leading coefficient of a Drinfeld module must be nonzero")]
    ZeroLeading,
    #[error("{0} is reducible; cyclotomic minimal polynomials need an irreducible conductor")]
    Reducible(String),
    #[error("series evaluation needs at least {required} coefficients")]
    InsufficientTerms { required: usize },
    #[error("argument of valuation {val} (in t) is outside the convergence region (threshold {threshold})")]
    Divergent { val: String, threshold: String },
    #[error("no (q-1)-th root of -t in this completion")]
    NoAlpha,
    #[error("window mismatch: {0}")]
    WindowMismatch(String),
    #[error("corrupt record: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
