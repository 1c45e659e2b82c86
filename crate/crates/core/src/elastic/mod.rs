//! Stiffness tensors, the Christoffel matrix and the forward map to slowness
//! polynomials.

mod forward;
mod positivity;
mod tensor;

pub use forward::{christoffel, coefficient_formulas, forward, p_names, Basis, SlownessPoly};
pub use positivity::{cayley, leading_minors, positivity, CayleyRegion, PositivityReport};
pub use tensor::{voigt_index, StiffnessTensor, SymmetryClass, FULL2D, MONO, ORTHO, TRICLINIC};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ElasticError {
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
