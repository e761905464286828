//! Differential operators, exterior forms, vector fields and holomorphic maps.

pub mod chartmap;
pub mod field;
pub mod form;
pub mod operator;

pub use chartmap::ChartMap;
pub use field::VectorField;
pub use form::{basis_11, Basis, Form};
pub use operator::{DerivativeCache, DiffOperator, MultiIndex};
