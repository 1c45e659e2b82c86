//! Exact arithmetic: rationals, sparse multivariate polynomials over a generic
//! field, and determinants of small polynomial matrices.

mod field;
mod matrix;
mod poly;
mod rational;

pub use field::Field;
pub use matrix::PolyMatrix;
pub use num_rational::BigRational;
pub use poly::{var_names, Monomial, MultiPoly};
pub use rational::{
    format_rational, parse_rational, rat, rat_frac, rational_reconstruct, rational_reconstruct_within, to_f64,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not square")]
    NonSquare,
    #[error("{0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}
