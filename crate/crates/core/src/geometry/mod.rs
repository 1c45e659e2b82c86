//! Numerical slowness geometry: eigenvalue branches of the Christoffel
//! matrix, slowness samples, group velocities, the qP support function and
//! exact coefficient recovery from a patch of one branch.
//!
//! Group velocities use v = ∇λ/2, which returns the physical speed for
//! isotropic media.

mod branch;
mod dual;
mod fit;
mod render;

use crate::elastic::{positivity, StiffnessTensor};

pub use branch::{
    aperture_directions, circle_directions, eigen_branches, gradient_analytic_2d, gradient_fd, group_velocity, min_gap,
    sample_branch, BranchSample, Eigen, GroupVelocity,
};
pub use dual::{is_strictly_convex, DualNormTable};
pub use fit::{fit_patch, FIT_MAX_DENOMINATOR, FIT_RESIDUAL_TOL};
pub use render::{samples_csv, svg_curves};

/// Relative eigenvalue gap below which a branch counts as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-8;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{0}")]
    Domain(String),
    #[error("degenerate eigenvalue: {0}")]
    Degenerate(String),
    #[error("needs more samples: {0}")]
    NeedsMoreSamples(String),
    #[error("precision: {0}")]
    Precision(String),
}

/// A positive tensor with its Voigt matrix in floating point.
#[derive(Clone, Debug)]
pub struct Medium {
    tensor: StiffnessTensor,
    voigt: Vec<Vec<f64>>,
}

impl Medium {
    pub fn new(t: &StiffnessTensor) -> Result<Self, GeometryError> {
        let report = positivity(t);
        if !report.is_positive {
            return Err(GeometryError::Domain("stiffness tensor is not positive definite".into()));
        }
        let voigt = t.voigt_matrix().iter().map(|r| r.iter().map(crate::algebra::to_f64).collect()).collect();
        Ok(Medium { tensor: t.clone(), voigt })
    }

    pub fn tensor(&self) -> &StiffnessTensor {
        &self.tensor
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// Γ_il(p) = Σ_jk a_ijkl p_j p_k.
    pub fn christoffel(&self, p: &[f64]) -> [[f64; 3]; 3] {
        let n = self.dim();
        let mut g = [[0.0; 3]; 3];
        for i in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        acc += self.a(i, j, k, l) * p[j] * p[k];
                    }
                }
                g[i][l] = acc;
            }
        }
        g
    }

    /// ∂Γ_il/∂p_m.
    pub fn christoffel_grad(&self, p: &[f64], m: usize) -> [[f64; 3]; 3] {
        let n = self.dim();
        let mut g = [[0.0; 3]; 3];
        for i in 0..n {
            for l in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += (self.a(i, m, k, l) + self.a(i, k, m, l)) * p[k];
                }
                g[i][l] = acc;
            }
        }
        g
    }

    fn a(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim();
        self.voigt[crate::elastic::voigt_index(n, i, j)][crate::elastic::voigt_index(n, k, l)]
    }
}
