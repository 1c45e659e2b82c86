use super::FieldError;
use crate::algebra::Field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Default seed for modulus search.
pub const DEFAULT_FIELD_SEED: u64 = 0x5eed_f1e1d;

/// Largest field order that gets log/Zech tables.
const TABLE_LIMIT: u64 = 1 << 21;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    if p < (1 << 32) {
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

// Dense polynomials over F_p (ascending coefficients); used only to find and
// verify the modulus and to run the slow arithmetic path.
mod fp_poly {
    use super::{mulmod, powmod};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv = powmod(m[dm], p - 2, p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = mulmod(r[k], inv, p);
            for i in 0..=dm {
                let t = mulmod(c, m[i], p);
                r[k - dm + i] = (r[k - dm + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(&mut r);
        r
    }

    pub fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn pow_mod_poly(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod_poly(&r, &b, m, p);
            }
            b = mulmod_poly(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut r);
        r
    }

    /// x^(p^k) mod m by k successive p-th powers.
    pub fn x_pow_p_k(k: usize, m: &[u64], p: u64) -> Vec<u64> {
        let mut h = rem(&[0, 1], m, p);
        for _ in 0..k {
            h = pow_mod_poly(&h, p, m, p);
        }
        h
    }
}

/// Rabin's test: m (monic, degree d) is irreducible over F_p iff
/// x^(p^d) ≡ x mod m and gcd(x^(p^(d/k)) − x, m) = 1 for every prime k | d.
pub fn modulus_is_irreducible(m: &[u64], p: u64) -> bool {
    let d = m.len() - 1;
    if d == 1 {
        return true;
    }
    let x = fp_poly::rem(&[0, 1], m, p);
    if fp_poly::x_pow_p_k(d, m, p) != x {
        return false;
    }
    for k in prime_factors(d as u64) {
        let h = fp_poly::x_pow_p_k(d / k as usize, m, p);
        let g = fp_poly::gcd(&fp_poly::sub(&h, &[0, 1], p), m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one_log: u32,
}

const NONE: u32 = u32::MAX;

/// The finite field F_{p^d}. Elements are encoded as integers
/// `Σ c_i p^i < p^d` where `Σ c_i t^i` is the representative modulo the
/// field modulus.
pub struct FqContext {
    p: u64,
    d: usize,
    q: u64,
    modulus: Vec<u64>,
    seed: u64,
    tables: Option<Tables>,
}

impl fmt::Debug for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.d, self.modulus)
    }
}

impl PartialEq for FqContext {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.modulus == o.modulus
    }
}

/// Builds F_{p^d} with the default seed.
pub fn fq_build(p: u64, d: usize) -> Result<Arc<FqContext>, FieldError> {
    fq_build_seeded(p, d, DEFAULT_FIELD_SEED)
}

/// Builds F_{p^d}; the modulus is the first irreducible found by a seeded
/// random search over monic degree-d polynomials.
pub fn fq_build_seeded(p: u64, d: usize, seed: u64) -> Result<Arc<FqContext>, FieldError> {
    if p >= (1u64 << 40) || !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if d == 0 {
        return Err(FieldError::Domain("extension degree must be at least 1".into()));
    }
    let q = (p as u128)
        .checked_pow(d as u32)
        .filter(|&q| q < (1u128 << 62))
        .ok_or_else(|| FieldError::Domain(format!("field of order {p}^{d} exceeds the supported size 2^62")))?
        as u64;
    let modulus = if d == 1 {
        vec![0, 1]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ d as u64);
        loop {
            let mut m: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
            m.push(1);
            if m[0] != 0 && modulus_is_irreducible(&m, p) {
                break m;
            }
        }
    };
    Ok(Arc::new(FqContext::with_modulus(p, d, q, modulus, seed)))
}

/// Process-wide cache of fields built with the default seed; extension
/// searches reuse the same contexts across calls.
pub fn fq_cached(p: u64, d: usize) -> Result<Arc<FqContext>, FieldError> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FqContext>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&(p, d)) {
        return Ok(c.clone());
    }
    let c = fq_build(p, d)?;
    cache.lock().unwrap().insert((p, d), c.clone());
    Ok(c)
}

impl FqContext {
    /// Context for a caller-supplied modulus (must be monic and irreducible).
    pub fn from_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<FqContext>, FieldError> {
        if !is_prime(p) || p >= (1u64 << 40) {
            return Err(FieldError::NotPrime(p));
        }
        let d = modulus.len().saturating_sub(1);
        if d == 0 || modulus[d] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::Domain("modulus must be monic with reduced coefficients".into()));
        }
        if !modulus_is_irreducible(&modulus, p) {
            return Err(FieldError::Domain("modulus is reducible".into()));
        }
        let q = (p as u128)
            .checked_pow(d as u32)
            .filter(|&q| q < (1u128 << 62))
            .ok_or_else(|| FieldError::Domain(format!("field of order {p}^{d} exceeds the supported size 2^62")))?
            as u64;
        Ok(Arc::new(FqContext::with_modulus(p, d, q, modulus, 0)))
    }

    fn with_modulus(p: u64, d: usize, q: u64, modulus: Vec<u64>, seed: u64) -> Self {
        let mut ctx = FqContext { p, d, q, modulus, seed, tables: None };
        if d > 1 && q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    fn build_tables(&self) -> Tables {
        let n = self.q - 1;
        let ps = prime_factors(n);
        let g = (2..self.q)
            .find(|&g| ps.iter().all(|&r| self.slow_pow(g, n / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![NONE; self.q as usize];
        let mut x = 1u64;
        for i in 0..n {
            exp.push(x as u32);
            log[x as usize] = i as u32;
            x = self.slow_mul(x, g);
        }
        let zech = (0..n)
            .map(|i| {
                let s = self.digit_add(exp[i as usize] as u64, 1);
                if s == 0 {
                    NONE
                } else {
                    log[s as usize]
                }
            })
            .collect();
        let neg_one = self.digit_neg(1);
        let neg_one_log = log[neg_one as usize];
        Tables { exp, log, zech, neg_one_log }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// F_p coefficients of the representative of `a` (length d).
    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0u64, |acc, &x| acc * self.p + x % self.p)
    }

    fn digit_add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_digits(&s)
    }

    fn digit_neg(&self, a: u64) -> u64 {
        let s: Vec<u64> = self.digits(a).iter().map(|&u| (self.p - u) % self.p).collect();
        self.from_digits(&s)
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        let mut x = self.digits(a);
        let mut y = self.digits(b);
        fp_poly::trim(&mut x);
        fp_poly::trim(&mut y);
        let r = fp_poly::mulmod_poly(&x, &y, &self.modulus, self.p);
        self.from_digits(&r)
    }

    fn slow_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.slow_mul(r, b);
            }
            b = self.slow_mul(b, b);
            e >>= 1;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.d == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if let Some(t) = &self.tables {
            if a == 0 {
                return b;
            }
            if b == 0 {
                return a;
            }
            let n = (self.q - 1) as u32;
            let la = t.log[a as usize];
            let lb = t.log[b as usize];
            let k = if lb >= la { lb - la } else { lb + n - la };
            let z = t.zech[k as usize];
            if z == NONE {
                return 0;
            }
            let e = (la as u64 + z as u64) % n as u64;
            return t.exp[e as usize] as u64;
        }
        self.digit_add(a, b)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        if self.d == 1 {
            return self.p - a;
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let e = (t.log[a as usize] as u64 + t.neg_one_log as u64) % n;
            return t.exp[e as usize] as u64;
        }
        self.digit_neg(a)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.d == 1 {
            return mulmod(a, b, self.p);
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
            return t.exp[e as usize] as u64;
        }
        self.slow_mul(a, b)
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        if self.d == 1 {
            return powmod(a, self.p - 2, self.p);
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let e = (n - t.log[a as usize] as u64) % n;
            return t.exp[e as usize] as u64;
        }
        self.pow(a, self.q - 2)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if let Some(t) = &self.tables {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let n = self.q - 1;
            let k = (t.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return t.exp[k] as u64;
        }
        let mut r = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Frobenius a ↦ a^p.
    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.p)
    }

    /// Inverse Frobenius a ↦ a^(p^(d−1)).
    pub fn pth_root(&self, a: u64) -> u64 {
        let mut r = a;
        for _ in 1..self.d {
            r = self.frobenius(r);
        }
        r
    }

    pub fn random(&self, rng: &mut impl Rng) -> u64 {
        rng.gen_range(0..self.q)
    }

    pub fn random_nonzero(&self, rng: &mut impl Rng) -> u64 {
        rng.gen_range(1..self.q)
    }
}

/// Element of F_{p^d} carrying its field.
#[derive(Clone)]
pub struct FqElement {
    ctx: Arc<FqContext>,
    v: u64,
}

impl FqElement {
    pub fn new(ctx: &Arc<FqContext>, v: u64) -> Self {
        assert!(v < ctx.q, "element code out of range");
        FqElement { ctx: ctx.clone(), v }
    }

    pub fn from_int(ctx: &Arc<FqContext>, n: i64) -> Self {
        FqElement { ctx: ctx.clone(), v: ctx.from_int(n) }
    }

    pub fn ctx(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    /// Integer code `Σ c_i p^i` of the representative.
    pub fn code(&self) -> u64 {
        self.v
    }

    /// Representative as F_p coefficients, lowest degree first.
    pub fn representative(&self) -> Vec<u64> {
        self.ctx.digits(self.v)
    }

    fn wrap(&self, v: u64) -> Self {
        FqElement { ctx: self.ctx.clone(), v }
    }
}

impl PartialEq for FqElement {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v && (Arc::ptr_eq(&self.ctx, &o.ctx) || *self.ctx == *o.ctx)
    }
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.d == 1 {
            write!(f, "{}", self.v)
        } else {
            write!(f, "{:?}", self.representative())
        }
    }
}

impl Field for FqElement {
    fn zero_like(&self) -> Self {
        self.wrap(0)
    }
    fn one_like(&self) -> Self {
        self.wrap(1)
    }
    fn int_like(&self, n: i64) -> Self {
        self.wrap(self.ctx.from_int(n))
    }
    fn is_zero_el(&self) -> bool {
        self.v == 0
    }
    fn is_one_el(&self) -> bool {
        self.v == 1
    }
    fn plus(&self, o: &Self) -> Self {
        self.wrap(self.ctx.add(self.v, o.v))
    }
    fn minus(&self, o: &Self) -> Self {
        self.wrap(self.ctx.sub(self.v, o.v))
    }
    fn times(&self, o: &Self) -> Self {
        self.wrap(self.ctx.mul(self.v, o.v))
    }
    fn negated(&self) -> Self {
        self.wrap(self.ctx.neg(self.v))
    }
    fn inverse(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(self.wrap(self.ctx.inv(self.v)))
        }
    }
}
