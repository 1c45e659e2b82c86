use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::groebner::GroebnerBasis;
use crate::algebra::{rational_reconstruct_within, to_f64, BigRational, Monomial, MultiPoly};

const MAX_STANDARD_MONOMIALS: usize = 1_000_000;

/// Smallest pure power of each variable among the leading monomials, if the
/// ideal is zero-dimensional.
fn pure_powers(gb: &GroebnerBasis) -> Option<Vec<u16>> {
    let lms = gb.leading_monomials();
    let n = gb.vars.len();
    (0..n)
        .map(|i| {
            lms.iter()
                .filter(|m| m.exps().iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|m| m.exps()[i])
                .min()
        })
        .collect()
}

/// Dimension of the quotient ring: the number of complex solutions counted
/// with multiplicity. `None` for positive-dimensional ideals.
pub fn solution_count(gb: &GroebnerBasis) -> Option<usize> {
    if gb.is_unit() {
        return Some(0);
    }
    let bounds = pure_powers(gb)?;
    let total = bounds.iter().try_fold(1usize, |acc, &b| acc.checked_mul(b as usize))?;
    if total > MAX_STANDARD_MONOMIALS {
        return None;
    }
    let lms = gb.leading_monomials();
    let mut exps = vec![0u16; bounds.len()];
    let mut count = 0;
    for _ in 0..total {
        let m = Monomial::from_exps(&exps);
        if !lms.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        for (e, &b) in exps.iter_mut().zip(&bounds) {
            *e += 1;
            if *e < b {
                break;
            }
            *e = 0;
        }
    }
    Some(count)
}

type Uni = Vec<BigRational>;

fn trim(a: &mut Uni) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn uni_rem(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn uni_div(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().unwrap() / &lb;
        let shift = r.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    q
}

fn uni_gcd(mut a: Uni, mut b: Uni) -> Uni {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = std::mem::replace(&mut b, r);
    }
    a
}

fn uni_eval(a: &Uni, x: &BigRational) -> BigRational {
    a.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Rational roots of a nonzero univariate polynomial, found from numeric
/// approximations and confirmed exactly.
fn rational_roots(a: &Uni) -> Vec<BigRational> {
    // Work on the squarefree part so that every root is simple.
    let da: Uni = a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    let g = uni_gcd(a.clone(), da);
    let a = &uni_div(a, &g);
    let deg = a.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![-&a[0] / &a[1]];
    }
    let lead = to_f64(&a[deg]);
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -to_f64(&a[i]) / lead;
    }
    // Denominators of rational roots divide the leading coefficient of the
    // integer-normalized polynomial.
    let den_lcm = a.iter().fold(BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let int_lead = (&a[deg] * BigRational::from_integer(den_lcm)).to_integer().abs();
    let max_den = int_lead.to_u64().unwrap_or(u64::MAX).min(1 << 40);
    let mut out: Vec<BigRational> = Vec::new();
    for z in comp.complex_eigenvalues().iter() {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            continue;
        }
        let tol = 1e-6 * (1.0 + z.re.abs());
        let Ok((r, _)) = rational_reconstruct_within(z.re, tol, max_den) else { continue };
        if uni_eval(a, &r).is_zero() && !out.contains(&r) {
            out.push(r);
        }
    }
    out.sort();
    out
}

/// Rational points of a zero-dimensional lex basis by back-substitution,
/// checked against every basis element. `None` when the ideal is not
/// zero-dimensional.
pub fn rational_solutions(gb: &GroebnerBasis) -> Option<Vec<Vec<BigRational>>> {
    if gb.is_unit() {
        return Some(Vec::new());
    }
    pure_powers(gb)?;
    let n = gb.vars.len();
    let first_var = |f: &MultiPoly<BigRational>| (0..n).find(|&i| f.terms().any(|(m, _)| m.exps()[i] > 0)).unwrap_or(n);
    let by_level: Vec<Vec<&MultiPoly<BigRational>>> =
        (0..n).map(|k| gb.basis.iter().filter(|f| first_var(f) == k).collect()).collect();
    let mut out = Vec::new();
    let mut partial = vec![BigRational::zero(); n];
    extend(&by_level, n, &mut partial, &mut out);
    out.retain(|pt| gb.basis.iter().all(|f| f.eval(pt).map(|v| v.is_zero()).unwrap_or(false)));
    out.sort();
    Some(out)
}

fn extend(
    by_level: &[Vec<&MultiPoly<BigRational>>],
    k: usize,
    partial: &mut Vec<BigRational>,
    out: &mut Vec<Vec<BigRational>>,
) {
    if k == 0 {
        out.push(partial.clone());
        return;
    }
    let level = k - 1;
    let mut g: Uni = Vec::new();
    for f in &by_level[level] {
        let mut u: Uni = Vec::new();
        for (m, c) in f.terms() {
            let e = m.exps();
            let mut v = c.clone();
            for j in level + 1..e.len() {
                for _ in 0..e[j] {
                    v *= &partial[j];
                }
            }
            let d = e[level] as usize;
            if u.len() <= d {
                u.resize(d + 1, BigRational::zero());
            }
            u[d] += v;
        }
        trim(&mut u);
        g = uni_gcd(g, u);
    }
    if g.is_empty() {
        return;
    }
    for r in rational_roots(&g) {
        partial[level] = r;
        extend(by_level, level, partial, out);
    }
}
