use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::finitefield::{uni, FqContext};

/// Reduced polynomial over F_q as (exponents, code) pairs; variable 0 is p0.
pub(crate) type ModPoly = Vec<(Vec<u16>, u64)>;

/// One specialization of (p1, …, pn) and the factor-degree multiset of the
/// resulting univariate in p0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Specialization {
    pub point: Vec<u64>,
    pub pattern: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SieveOutcome {
    EmptyIntersection(Vec<Specialization>),
    /// Specializations tried and the degrees a (1 ≤ a < d) still admissible
    /// for a factor.
    Surviving(Vec<Specialization>, Vec<usize>),
}

/// Bitmask of the subset sums of a degree multiset.
pub fn subset_sums(pattern: &[usize]) -> u128 {
    let mut sums: u128 = 1;
    for &e in pattern {
        sums |= sums << e;
    }
    sums
}

/// Proper splits a (1 ≤ a ≤ d − 1) compatible with every pattern.
pub fn admissible_splits(d: usize, patterns: &[Vec<usize>]) -> Vec<usize> {
    let mut mask: u128 = ((1u128 << d) - 1) & !1;
    for p in patterns {
        mask &= subset_sums(p);
    }
    (1..d).filter(|a| mask >> a & 1 == 1).collect()
}

fn eval_in_p0(k: &FqContext, f: &ModPoly, point: &[u64], d: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; d + 1];
    for (e, c) in f {
        let mut v = *c;
        for (x, &ei) in point.iter().zip(&e[1..]) {
            v = k.mul(v, k.pow(*x, ei as u64));
        }
        coeffs[e[0] as usize] = k.add(coeffs[e[0] as usize], v);
    }
    coeffs
}

/// Random specializations of (p1, …, pn); a factor of f has p0-degree equal
/// to its total degree (f is monic in p0 up to a unit), so its degree must be
/// a subset sum of every specialized pattern.
pub(crate) fn sieve(k: &FqContext, f: &ModPoly, d: usize, budget: usize, seed: u64) -> SieveOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.first().map(|(e, _)| e.len() - 1).unwrap_or(0);
    let mut specs = Vec::new();
    let mut mask: u128 = ((1u128 << d) - 1) & !1;
    for _ in 0..budget {
        let point: Vec<u64> = (0..n).map(|_| k.random(&mut rng)).collect();
        let u = eval_in_p0(k, f, &point, d);
        debug_assert!(u[d] != 0, "p0-leading coefficient is a unit");
        let pattern = uni::factor_degrees(k, &u);
        let next = mask & subset_sums(&pattern);
        assert_eq!(next & !mask, 0, "split sets only shrink");
        mask = next;
        specs.push(Specialization { point, pattern });
        if mask == 0 {
            return SieveOutcome::EmptyIntersection(specs);
        }
    }
    let splits = (1..d).filter(|a| mask >> a & 1 == 1).collect();
    SieveOutcome::Surviving(specs, splits)
}
