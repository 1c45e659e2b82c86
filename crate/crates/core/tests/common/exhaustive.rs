//! Exhaustive irreducibility oracle for bivariates of total degree ≤ 4 over
//! a prime field: every reducible polynomial is a product of two
//! nonconstant polynomials, so marking all such products gives the truth.

use slowness::finitefield::{bi_is_irreducible, fq_build, BiPoly, BiVerdict};

pub const MAX_DEG: usize = 4;

/// Monomials (i, j) with i + j ≤ 4, in a fixed order.
pub fn monomials() -> Vec<(usize, usize)> {
    let mut m = Vec::new();
    for t in 0..=MAX_DEG {
        for i in 0..=t {
            m.push((i, t - i));
        }
    }
    m
}

fn slot(i: usize, j: usize) -> usize {
    let t = i + j;
    t * (t + 1) / 2 + i
}

fn decode(code: u64, q: u64, n: usize) -> Vec<u64> {
    let mut c = vec![0; n];
    let mut v = code;
    for x in c.iter_mut() {
        *x = v % q;
        v /= q;
    }
    c
}

fn degree(c: &[u64], mons: &[(usize, usize)]) -> i64 {
    c.iter().zip(mons).filter(|(v, _)| **v != 0).map(|(_, (i, j))| (i + j) as i64).max().unwrap_or(-1)
}

/// Bitmap of reducible codes; code = Σ c_slot q^slot.
pub fn reducible_table(q: u64) -> Vec<bool> {
    let mons = monomials();
    let n = mons.len();
    let total = q.pow(n as u32) as usize;
    let mut red = vec![false; total];
    // Polynomials of degree ≤ 3 (first 10 slots) are the possible factors.
    let small: Vec<(Vec<u64>, i64)> = (0..q.pow(10))
        .map(|code| {
            let c = decode(code, q, 10);
            let d = degree(&c, &mons[..10]);
            (c, d)
        })
        .filter(|(_, d)| *d >= 1)
        .collect();
    for (g, dg) in small.iter().filter(|(_, d)| *d <= 2) {
        for (h, dh) in &small {
            if dg + dh > MAX_DEG as i64 {
                continue;
            }
            let mut prod = vec![0u64; n];
            for (a, &(i, j)) in g.iter().zip(&mons[..10]) {
                if *a == 0 {
                    continue;
                }
                for (b, &(k, l)) in h.iter().zip(&mons[..10]) {
                    if *b != 0 {
                        let s = slot(i + k, j + l);
                        prod[s] = (prod[s] + a * b) % q;
                    }
                }
            }
            let code = prod.iter().rev().fold(0u64, |acc, &v| acc * q + v);
            red[code as usize] = true;
        }
    }
    red
}

/// Compares the decision procedure with the oracle on every `stride`-th
/// nonconstant polynomial; returns (checked, mismatches, inconclusive).
/// With `monic_only`, only polynomials whose graded-lex leading coefficient
/// is 1 are decided; every polynomial is a unit multiple of exactly one of
/// them.
pub fn compare(q: u64, stride: usize, monic_only: bool) -> (usize, Vec<String>, usize) {
    let k = fq_build(q, 1).unwrap();
    let mons = monomials();
    let red = reducible_table(q);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut inconclusive = 0;
    for (code, &is_red) in red.iter().enumerate().step_by(stride) {
        let c = decode(code as u64, q, mons.len());
        if degree(&c, &mons) < 1 {
            continue;
        }
        if monic_only && c.iter().rev().find(|&&v| v != 0) != Some(&1) {
            continue;
        }
        let ts: Vec<(usize, usize, u64)> =
            c.iter().zip(&mons).filter(|(v, _)| **v != 0).map(|(v, &(i, j))| (i, j, *v)).collect();
        let f = BiPoly::from_code_terms(&k, &ts);
        checked += 1;
        match bi_is_irreducible(&f).unwrap() {
            BiVerdict::Inconclusive => inconclusive += 1,
            BiVerdict::Irreducible if is_red => bad.push(format!("{ts:?} reported irreducible")),
            BiVerdict::Reducible(..) if !is_red => bad.push(format!("{ts:?} reported reducible")),
            _ => {}
        }
    }
    (checked, bad, inconclusive)
}
