//! Exact arithmetic: Gaussian rationals, polynomials, rational functions and
//! truncated series in the deformation parameter.

pub mod expr;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod series;

pub use expr::parse_expr;
pub use poly::{Monomial, Polynomial, Var, MAX_DIM, NUM_SLOTS};
pub use ratfunc::{RationalFunction, RationalKey, Substitution};
pub use scalar::Scalar;
pub use series::{ExactDivision, Field, Ring, Series};
