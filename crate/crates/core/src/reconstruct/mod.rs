//! Inverse of the forward map: Gröbner reconstruction in 2D, closed-form
//! companions for orthorhombic and monoclinic media, and 2D admissibility.

mod companions;
mod groebner;
mod solve;
mod two_d;

use serde::Serialize;

use crate::elastic::{positivity, ElasticError, PositivityReport, StiffnessTensor};

pub use companions::{
    companions, companions_monoclinic, companions_orthorhombic, groebner_crosscheck, reconstruct_3d,
    reconstruction_ideal, CrossCheck,
};
pub use groebner::{
    buchberger, lex_leading, GroebnerBasis, MonomialOrder, PolyIdeal, MAX_GENERATOR_DEGREE, MAX_PAIR_REDUCTIONS,
    MAX_UNKNOWNS,
};
pub use solve::{rational_solutions, solution_count};
pub use two_d::{
    admissibility_2d, build_reconstruction_ideal_2d, decomposition_pieces, j_generators, reconstruct_2d,
    uncorrected_j_generators, Admissibility, Piece,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ReconstructError {
    #[error("{0}")]
    Domain(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error(transparent)]
    Elastic(#[from] ElasticError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    Unique,
    FourCompanions,
    TwoCompanions,
    /// Finitely many solutions, more than one, outside the companion cases.
    Multiple,
    Nonfinite,
    Empty,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    pub solutions: Vec<StiffnessTensor>,
    pub multiplicity: Multiplicity,
    pub positivity: Vec<PositivityReport>,
    /// Number of complex solutions with multiplicity, for finite systems.
    pub solution_count: Option<usize>,
    pub groebner: Option<GroebnerBasis>,
}

impl ReconstructionResult {
    pub(crate) fn new(
        solutions: Vec<StiffnessTensor>,
        multiplicity: Multiplicity,
        solution_count: Option<usize>,
        groebner: Option<GroebnerBasis>,
    ) -> Self {
        let positivity = solutions.iter().map(positivity).collect();
        ReconstructionResult { solutions, multiplicity, positivity, solution_count, groebner }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "multiplicity": self.multiplicity,
            "solution_count": self.solution_count,
            "solutions": self.solutions.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            "positivity": self.positivity.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "groebner": self.groebner.as_ref().map(|g| g.to_json()),
        })
    }
}
