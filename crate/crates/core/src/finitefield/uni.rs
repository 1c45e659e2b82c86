//! Univariate polynomials over F_q as dense coefficient vectors (lowest
//! degree first, no trailing zeros) plus factorization.

use super::fq::{FqContext, FqElement};
use super::FieldError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub(crate) type Raw = Vec<u64>;

pub(crate) fn trim(a: &mut Raw) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn deg(a: &[u64]) -> i64 {
    a.len() as i64 - 1
}

pub(crate) fn add(k: &FqContext, a: &[u64], b: &[u64]) -> Raw {
    let n = a.len().max(b.len());
    let mut r: Raw = (0..n).map(|i| k.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))).collect();
    trim(&mut r);
    r
}

pub(crate) fn sub(k: &FqContext, a: &[u64], b: &[u64]) -> Raw {
    let n = a.len().max(b.len());
    let mut r: Raw = (0..n).map(|i| k.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))).collect();
    trim(&mut r);
    r
}

pub(crate) fn scale(k: &FqContext, a: &[u64], c: u64) -> Raw {
    if c == 0 {
        return vec![];
    }
    a.iter().map(|&x| k.mul(x, c)).collect()
}

pub(crate) fn mul(k: &FqContext, a: &[u64], b: &[u64]) -> Raw {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = k.add(r[i + j], k.mul(x, y));
        }
    }
    trim(&mut r);
    r
}

/// Quotient and remainder; `b` nonzero.
pub(crate) fn divrem(k: &FqContext, a: &[u64], b: &[u64]) -> (Raw, Raw) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let db = b.len() - 1;
    let inv = k.inv(b[db]);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = k.mul(r[top], inv);
        q[top - db] = c;
        for i in 0..=db {
            r[top - db + i] = k.sub(r[top - db + i], k.mul(c, b[i]));
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(k: &FqContext, a: &[u64], b: &[u64]) -> Raw {
    divrem(k, a, b).1
}

pub(crate) fn monic(k: &FqContext, a: &[u64]) -> Raw {
    match a.last() {
        None => vec![],
        Some(&lc) => scale(k, a, k.inv(lc)),
    }
}

pub(crate) fn gcd(k: &FqContext, a: &[u64], b: &[u64]) -> Raw {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
    monic(k, &a)
}

/// Returns (g, s) with g = gcd(a, m) monic and s·a ≡ g mod m.
pub(crate) fn gcdex(k: &FqContext, a: &[u64], m: &[u64]) -> (Raw, Raw) {
    let (mut r0, mut r1) = (rem(k, a, m), m.to_vec());
    let (mut s0, mut s1): (Raw, Raw) = (vec![1], vec![]);
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s = sub(k, &s0, &mul(k, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    match r0.last() {
        None => (vec![], vec![]),
        Some(&lc) => {
            let inv = k.inv(lc);
            (scale(k, &r0, inv), rem(k, &scale(k, &s0, inv), m))
        }
    }
}

/// Inverse of `a` modulo `m`, if coprime.
pub(crate) fn inv_mod(k: &FqContext, a: &[u64], m: &[u64]) -> Option<Raw> {
    let (g, s) = gcdex(k, a, m);
    (g == vec![1]).then_some(s)
}

pub(crate) fn derivative(k: &FqContext, a: &[u64]) -> Raw {
    let mut r: Raw = a.iter().enumerate().skip(1).map(|(i, &c)| k.mul(c, k.from_int(i as i64))).collect();
    trim(&mut r);
    r
}

pub(crate) fn eval(k: &FqContext, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
}

pub(crate) fn mulmod(k: &FqContext, a: &[u64], b: &[u64], m: &[u64]) -> Raw {
    rem(k, &mul(k, a, b), m)
}

pub(crate) fn powmod(k: &FqContext, a: &[u64], mut e: u64, m: &[u64]) -> Raw {
    let mut r = rem(k, &[1], m);
    let mut b = rem(k, a, m);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(k, &r, &b, m);
        }
        b = mulmod(k, &b, &b, m);
        e >>= 1;
    }
    r
}

/// Taylor shift a(x + t).
pub(crate) fn shift(k: &FqContext, a: &[u64], t: u64) -> Raw {
    let mut r: Raw = vec![];
    for &c in a.iter().rev() {
        r = add(k, &mul(k, &r, &[t, 1]), &[c]);
    }
    r
}

fn is_one(a: &[u64]) -> bool {
    a.len() == 1 && a[0] == 1
}

/// Rabin irreducibility test for a polynomial of degree ≥ 1.
pub(crate) fn is_irreducible(k: &FqContext, f: &[u64]) -> bool {
    let n = deg(f) as usize;
    if n == 1 {
        return true;
    }
    let f = monic(k, f);
    let q = k.order();
    let x = rem(k, &[0, 1], &f);
    let mut powers = vec![x.clone()];
    for _ in 0..n {
        let next = powmod(k, powers.last().unwrap(), q, &f);
        powers.push(next);
    }
    if powers[n] != x {
        return false;
    }
    for r in super::fq::prime_factors(n as u64) {
        let h = &powers[n / r as usize];
        if !is_one(&gcd(k, &sub(k, h, &[0, 1]), &f)) {
            return false;
        }
    }
    true
}

/// Squarefree decomposition of a monic polynomial: pairs (g_i, i) with g_i
/// squarefree, pairwise coprime and f = Π g_i^i.
pub(crate) fn squarefree(k: &FqContext, f: &[u64]) -> Vec<(Raw, u32)> {
    let p = k.p() as usize;
    let mut out = Vec::new();
    let fp = derivative(k, f);
    if fp.is_empty() {
        let root = pth_root_poly(k, f);
        for (g, e) in squarefree(k, &root) {
            out.push((g, e * p as u32));
        }
        return out;
    }
    let mut c = gcd(k, f, &fp);
    let mut w = divrem(k, f, &c).0;
    let mut i = 1u32;
    while !is_one(&w) {
        let y = gcd(k, &w, &c);
        let z = divrem(k, &w, &y).0;
        if !is_one(&z) {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = divrem(k, &c, &w).0;
    }
    if !is_one(&c) {
        let root = pth_root_poly(k, &c);
        for (g, e) in squarefree(k, &root) {
            out.push((g, e * p as u32));
        }
    }
    out
}

fn pth_root_poly(k: &FqContext, f: &[u64]) -> Raw {
    let p = k.p() as usize;
    f.iter().step_by(p).map(|&c| k.pth_root(c)).collect()
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub(crate) fn distinct_degree(k: &FqContext, f: &[u64]) -> Vec<(Raw, usize)> {
    let q = k.order();
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut h = rem(k, &[0, 1], &rest);
    let mut i = 1usize;
    while deg(&rest) >= 2 * i as i64 {
        h = powmod(k, &h, q, &rest);
        let g = gcd(k, &sub(k, &h, &[0, 1]), &rest);
        if !is_one(&g) {
            rest = divrem(k, &rest, &g).0;
            h = rem(k, &h, &rest);
            out.push((g, i));
        }
        i += 1;
    }
    if deg(&rest) > 0 {
        let d = deg(&rest) as usize;
        out.push((rest, d));
    }
    out
}

/// Splits a monic squarefree product of degree-`i` irreducibles (Cantor–Zassenhaus).
pub(crate) fn equal_degree(k: &FqContext, f: &[u64], i: usize, rng: &mut ChaCha8Rng) -> Vec<Raw> {
    let n = deg(f) as usize;
    if n == i {
        return vec![f.to_vec()];
    }
    let q = k.order();
    loop {
        let a: Raw = {
            let mut a: Raw = (0..n).map(|_| k.random(rng)).collect();
            trim(&mut a);
            a
        };
        if deg(&a) < 1 {
            continue;
        }
        let b = if k.p() == 2 {
            // Trace of a over F_2 from F_{q^i}: Σ a^(2^j), j < d·i.
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..k.d() * i {
                t = mulmod(k, &t, &t, f);
                acc = add(k, &acc, &t);
            }
            acc
        } else {
            // a^((q^i − 1)/2) = (a · a^q ··· a^(q^(i−1)))^((q−1)/2)
            let mut t = a.clone();
            let mut prod = a.clone();
            for _ in 1..i {
                t = powmod(k, &t, q, f);
                prod = mulmod(k, &prod, &t, f);
            }
            sub(k, &powmod(k, &prod, (q - 1) / 2, f), &[1])
        };
        let g = gcd(k, &b, f);
        if deg(&g) > 0 && deg(&g) < n as i64 {
            let h = divrem(k, f, &g).0;
            let mut out = equal_degree(k, &g, i, rng);
            out.extend(equal_degree(k, &monic(k, &h), i, rng));
            return out;
        }
    }
}

fn cmp_raw(a: &Raw, b: &Raw) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree then coefficients. Returns (unit, factors).
pub(crate) fn factor(k: &FqContext, f: &[u64], seed: u64) -> (u64, Vec<(Raw, u32)>) {
    let lc = *f.last().expect("nonzero polynomial");
    let f = monic(k, f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if deg(&f) > 0 {
        for (g, e) in squarefree(k, &f) {
            for (h, i) in distinct_degree(k, &g) {
                for r in equal_degree(k, &h, i, &mut rng) {
                    out.push((r, e));
                }
            }
        }
    }
    out.sort_by(|a, b| cmp_raw(&a.0, &b.0).then(a.1.cmp(&b.1)));
    (lc, out)
}

/// Degrees of the irreducible factors, with multiplicity, ascending.
/// Distinct-degree splitting already fixes the pattern.
pub(crate) fn factor_degrees(k: &FqContext, f: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    let f = monic(k, f);
    for (g, e) in squarefree(k, &f) {
        for (h, i) in distinct_degree(k, &g) {
            let cnt = deg(&h) as usize / i;
            for _ in 0..cnt * e as usize {
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Univariate polynomial over F_q.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    ctx: Arc<FqContext>,
    coeffs: Raw,
}

impl UniPoly {
    /// From coefficient codes, lowest degree first.
    pub fn new(ctx: &Arc<FqContext>, coeffs: Vec<u64>) -> Self {
        let mut coeffs = coeffs;
        trim(&mut coeffs);
        UniPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn from_ints(ctx: &Arc<FqContext>, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    pub fn ctx(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqElement {
        FqElement::new(&self.ctx, self.coeffs.get(i).copied().unwrap_or(0))
    }

    /// Degree; −1 for zero.
    pub fn degree(&self) -> i64 {
        deg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        UniPoly { ctx: self.ctx.clone(), coeffs: mul(&self.ctx, &self.coeffs, &o.coeffs) }
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        UniPoly { ctx: self.ctx.clone(), coeffs: add(&self.ctx, &self.coeffs, &o.coeffs) }
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        UniPoly { ctx: self.ctx.clone(), coeffs: sub(&self.ctx, &self.coeffs, &o.coeffs) }
    }

    pub fn divrem(&self, o: &UniPoly) -> (UniPoly, UniPoly) {
        let (q, r) = divrem(&self.ctx, &self.coeffs, &o.coeffs);
        (UniPoly { ctx: self.ctx.clone(), coeffs: q }, UniPoly { ctx: self.ctx.clone(), coeffs: r })
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        UniPoly { ctx: self.ctx.clone(), coeffs: gcd(&self.ctx, &self.coeffs, &o.coeffs) }
    }

    pub fn eval(&self, x: &FqElement) -> FqElement {
        FqElement::new(&self.ctx, eval(&self.ctx, &self.coeffs, x.code()))
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut r = UniPoly::new(&self.ctx, vec![1]);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// x^e mod self.
    pub fn x_pow_mod(&self, e: u64) -> UniPoly {
        UniPoly { ctx: self.ctx.clone(), coeffs: powmod(&self.ctx, &[0, 1], e, &self.coeffs) }
    }
}

/// Factorization `unit · Π factor^multiplicity` with monic irreducible factors.
#[derive(Clone, Debug, PartialEq)]
pub struct UniFactorization {
    pub unit: FqElement,
    pub factors: Vec<(UniPoly, u32)>,
}

impl UniFactorization {
    pub fn expand(&self) -> UniPoly {
        let ctx = self.unit.ctx();
        let mut acc = UniPoly::new(ctx, vec![self.unit.code()]);
        for (g, e) in &self.factors {
            acc = acc.mul(&g.pow(*e));
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> =
            self.factors.iter().flat_map(|(g, e)| std::iter::repeat(g.degree() as usize).take(*e as usize)).collect();
        v.sort_unstable();
        v
    }
}

/// Complete factorization: squarefree decomposition, distinct-degree
/// splitting, then seeded equal-degree splitting.
pub fn uni_factor(f: &UniPoly, seed: u64) -> Result<UniFactorization, FieldError> {
    if f.is_zero() {
        return Err(FieldError::Domain("cannot factor the zero polynomial".into()));
    }
    let (unit, fs) = factor(&f.ctx, &f.coeffs, seed);
    Ok(UniFactorization {
        unit: FqElement::new(&f.ctx, unit),
        factors: fs.into_iter().map(|(g, e)| (UniPoly { ctx: f.ctx.clone(), coeffs: g }, e)).collect(),
    })
}

/// Irreducibility via x^(q^n) ≡ x mod f and the gcd conditions.
pub fn uni_is_irreducible(f: &UniPoly) -> Result<bool, FieldError> {
    if f.degree() < 1 {
        return Err(FieldError::Domain("irreducibility needs degree at least 1".into()));
    }
    Ok(is_irreducible(&f.ctx, &f.coeffs))
}
