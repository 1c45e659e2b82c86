//! Random homogeneous forms for the irreducibility harnesses.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slowness::algebra::{rat, BigRational, Monomial, MultiPoly};

pub fn names(n: usize) -> Arc<[String]> {
    let v: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    v.into()
}

/// Exponent vectors of total degree `deg` in `n` variables.
pub fn monomials(n: usize, deg: u16) -> Vec<Vec<u16>> {
    if n == 1 {
        return vec![vec![deg]];
    }
    (0..=deg)
        .rev()
        .flat_map(|e| {
            monomials(n - 1, deg - e).into_iter().map(move |mut rest| {
                rest.insert(0, e);
                rest
            })
        })
        .collect()
}

/// Random homogeneous form with p0^deg coefficient ±1, coefficients in
/// [−9, 9], and a nonzero p0-free term.
pub fn random_form(rng: &mut ChaCha8Rng, n: usize, deg: u16) -> MultiPoly<BigRational> {
    let ms = monomials(n, deg);
    let free: Vec<usize> = (0..ms.len()).filter(|&i| ms[i][0] == 0).collect();
    let forced = free[rng.gen_range(0..free.len())];
    let terms = ms.iter().enumerate().map(|(i, e)| {
        let c = if e[0] == deg {
            if rng.gen_bool(0.5) {
                1
            } else {
                -1
            }
        } else if i == forced {
            let c = rng.gen_range(1..=9);
            if rng.gen_bool(0.5) {
                c
            } else {
                -c
            }
        } else {
            rng.gen_range(-9..=9)
        };
        (Monomial::from_exps(e), rat(c))
    });
    MultiPoly::from_terms(names(n), terms)
}
