//! Finite fields F_{p^d}, univariate factorization over them, and a
//! bivariate irreducibility decision.

mod bivariate;
mod fq;
pub(crate) mod uni;

pub use bivariate::{bi_factor, bi_is_irreducible, BiFactorization, BiPoly, BiVerdict, MAX_BI_DEGREE};
pub use fq::{
    fq_build, fq_build_seeded, fq_cached, is_prime, modulus_is_irreducible, FqContext, FqElement, DEFAULT_FIELD_SEED,
};
pub use uni::{uni_factor, uni_is_irreducible, UniFactorization, UniPoly};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^40")]
    NotPrime(u64),
    #[error("{0}")]
    Domain(String),
}
