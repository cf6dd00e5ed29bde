//! Exact arithmetic foundation: F_q, k[t], residue fields, rational
//! functions, precision-tracked Laurent series, dense matrices over F_q and
//! normal forms over k[t].

pub mod factor;
pub mod field;
pub mod fq;
pub mod laurent;
pub mod lmatrix;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod polymat;
pub mod ratfunc;
pub mod reducer;
pub mod residue;
pub mod tmodule;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field size {0} exceeds the supported maximum")]
    FieldTooLarge(u32),
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("cannot factor the zero polynomial")]
    FactorZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is zero to precision O(u^{0}); cannot invert")]
    InvertPrecisionZero(i64),
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not irreducible")]
    Reducible(String),
}
