//! Exact arithmetic: Laurent polynomials, gcd, rational functions, determinants.

pub mod det;
pub mod gcd;
pub mod laurent;
mod modgcd;
pub mod ratfun;

pub use det::sym_det;
pub use gcd::{normalize, poly_gcd};
pub use laurent::{grlex_cmp, lp_exact_div, rat, ratio, ExponentVector, LaurentPolynomial, Rat};
pub use ratfun::{rf_make, rf_substitute, rf_substitute_parts, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("arity mismatch: {left} vs {right}")]
    Arity { left: usize, right: usize },
    #[error("no Laurent polynomial quotient exists")]
    NotDivisible,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("substituted denominator vanishes identically")]
    IdenticallyZeroDenominator,
}
