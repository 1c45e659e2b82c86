use num_bigint::BigInt;
use num_traits::One;

use super::residue;
use crate::algebra::{BigRational, Monomial, MultiPoly};
use crate::finitefield::{bi_factor, fq_cached, BiPoly, FqElement};

/// Large prime used to find integer factor candidates by symmetric lifting.
const LIFT_PRIME: u64 = 2_147_483_647;
const MAX_FACTORS: usize = 14;

/// Exact factorization f = g·h over ℚ of a homogeneous three-variable
/// polynomial with p0 first and p0^d coefficient ±1, found by factoring
/// f(1, p1, p2) modulo a large prime and lifting subset products.
/// Finds every factorization whose factors have coefficients below half the
/// prime in absolute value.
pub fn rational_factor_pair(f: &MultiPoly<BigRational>) -> Option<(MultiPoly<BigRational>, MultiPoly<BigRational>)> {
    if f.nvars() != 3 || !f.is_integral() {
        return None;
    }
    let k = fq_cached(LIFT_PRIME, 1).ok()?;
    let plane = f.dehomogenize(0, &BigRational::one());
    let ts: Vec<(usize, usize, u64)> =
        plane.terms().map(|(m, c)| (m.exps()[0] as usize, m.exps()[1] as usize, residue(c, LIFT_PRIME))).collect();
    let bi = BiPoly::from_code_terms(&k, &ts);
    if bi.degree() != f.degree() {
        return None;
    }
    let fact = bi_factor(&bi).ok()??;
    let parts: Vec<&BiPoly> = fact.factors.iter().flat_map(|(g, e)| std::iter::repeat(g).take(*e as usize)).collect();
    let r = parts.len();
    if !(2..=MAX_FACTORS).contains(&r) {
        return None;
    }
    let plane_vars = plane.vars().clone();
    // Subsets without the last part cover each unordered split once.
    for mask in 1u32..(1 << (r - 1)) {
        let mut g = BiPoly::from_code_terms(&k, &[(0, 0, 1)]);
        for (i, part) in parts.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g = g.mul(part);
            }
        }
        let terms = g.terms();
        let c0 = terms.iter().find(|t| t.0 == 0 && t.1 == 0)?.2;
        let g = g.scale(&FqElement::new(&k, k.inv(c0)));
        let lifted = MultiPoly::from_terms(
            plane_vars.clone(),
            g.terms().into_iter().map(|(i, j, v)| {
                let v = if v > LIFT_PRIME / 2 { v as i64 - LIFT_PRIME as i64 } else { v as i64 };
                (Monomial::from_exps(&[i as u16, j as u16]), BigRational::from_integer(BigInt::from(v)))
            }),
        );
        let deg = lifted.degree() as u32;
        let Ok(hom) = lifted.homogenize(&f.vars()[0], deg) else { continue };
        if let Some(h) = f.div_exact(&hom) {
            return Some((hom, h));
        }
    }
    None
}
