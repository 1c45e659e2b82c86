//! Slowness polynomials of anisotropic elastic media.
//!
//! The forward map sends a density-normalized stiffness tensor to the
//! determinant `det(Γ(p) − p0² I)` of its Christoffel matrix. The crate also
//! certifies irreducibility of such polynomials through reduction modulo a
//! prime, inverts the forward map (Gröbner bases in 2D, closed-form companions
//! for orthorhombic and monoclinic 3D media), fits polynomials to sampled
//! slowness branches, and runs a 2D two-layer travel-time recovery pipeline.

pub mod algebra;
pub mod elastic;
pub mod finitefield;
pub mod geometry;
pub mod irreducible;
pub mod reconstruct;
pub mod twolayer;
