//! Irreducibility over ℂ of integer homogeneous polynomials, certified by
//! irreducibility of the reduction modulo p over F_{p^d}, d = deg f.

mod sieve;
mod witness;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{BigRational, Monomial, MultiPoly};
use crate::finitefield::{bi_is_irreducible, fq_build, is_prime, BiPoly, BiVerdict, FieldError, FqContext, FqElement};

pub use sieve::{admissible_splits, subset_sums, SieveOutcome, Specialization};
pub use witness::rational_factor_pair;

pub const DEFAULT_BUDGET: usize = 64;
pub const DEFAULT_PLANE_TRIES: usize = 8;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum IrreducibleError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    CertifiedIrreducible,
    ReducibleWitness,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Every proper split was ruled out by the recorded specializations.
    DegreePatterns,
    /// f(1, p1, p2) is irreducible over F_q and has full degree.
    Bivariate,
    /// Images of (p0, …, pn) as linear forms in three fresh variables, element
    /// codes, for the section that came out irreducible.
    PlaneSection {
        forms: Vec<Vec<u64>>,
        attempt: usize,
    },
    /// f = g·h over ℚ.
    RationalFactors {
        g: serde_json::Value,
        h: serde_json::Value,
    },
    /// Factor pair of f(1, p1, p2) over F_q as (x-exp, y-exp, code) terms; the
    /// test says nothing at this prime.
    ModularFactors {
        g: Vec<(usize, usize, u64)>,
        h: Vec<(usize, usize, u64)>,
    },
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetUsed {
    pub specializations: usize,
    pub plane_tries: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub budget: usize,
    pub plane_tries: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { budget: DEFAULT_BUDGET, plane_tries: DEFAULT_PLANE_TRIES, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub prime: u64,
    /// Extension degree of the field, equal to the total degree of f.
    pub d: usize,
    /// Coefficients of the field modulus over F_p, constant term first.
    pub modulus: Vec<u64>,
    pub seed: u64,
    pub budget: usize,
    pub plane_tries: usize,
    pub specializations: Vec<Specialization>,
    pub surviving_splits: Vec<usize>,
    pub evidence: Evidence,
    pub used: BudgetUsed,
    pub note: Option<String>,
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }

    /// Re-runs the pipeline from the recorded prime, seed and limits.
    pub fn recheck(&self, f: &MultiPoly<BigRational>) -> Result<bool, IrreducibleError> {
        let opts = CertifyOptions { budget: self.budget, plane_tries: self.plane_tries, seed: self.seed };
        Ok(certify(f, self.prime, &opts)? == *self)
    }
}

/// Moves a variable named `p0`, if any, to the front.
fn p0_first(f: &MultiPoly<BigRational>) -> MultiPoly<BigRational> {
    let Some(i) = f.vars().iter().position(|v| v == "p0") else { return f.clone() };
    if i == 0 {
        return f.clone();
    }
    let mut names: Vec<String> = f.vars().to_vec();
    let v = names.remove(i);
    names.insert(0, v);
    let map: Vec<usize> = (0..f.nvars())
        .map(|j| {
            if j == i {
                0
            } else if j < i {
                j + 1
            } else {
                j
            }
        })
        .collect();
    f.remap_vars(names.into(), &map)
}

/// Validates the input and returns its degree.
fn check_input(f: &MultiPoly<BigRational>) -> Result<usize, IrreducibleError> {
    let bad = |m: &str| Err(IrreducibleError::Domain(m.to_string()));
    if f.nvars() < 2 {
        return bad("need at least two variables");
    }
    if f.is_zero() || f.degree() < 1 {
        return bad("need a nonconstant polynomial");
    }
    if !f.is_homogeneous() {
        return bad("polynomial is not homogeneous");
    }
    if !f.is_integral() {
        return bad("coefficients must be integers");
    }
    let d = f.degree() as usize;
    let mut top = Monomial::one(f.nvars());
    top.0[0] = d as u16;
    match f.coeff(&top) {
        Some(c) if c.abs().is_one() => {}
        _ => return bad(&format!("coefficient of {}^{} must be ±1", f.vars()[0], d)),
    }
    if f.terms().all(|(m, _)| m.exps()[0] > 0) {
        return bad(&format!("{} divides the polynomial", f.vars()[0]));
    }
    Ok(d)
}

pub(crate) fn residue(c: &BigRational, p: u64) -> u64 {
    let r = c.to_integer().mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Reduction modulo p, coefficients placed in the prime subfield of `k`.
pub fn reduce(f: &MultiPoly<BigRational>, k: &Arc<FqContext>) -> MultiPoly<FqElement> {
    f.map_coeffs(|c| FqElement::new(k, residue(c, k.p())))
}

fn mod_terms(f: &MultiPoly<FqElement>) -> sieve::ModPoly {
    f.terms().map(|(m, c)| (m.exps().to_vec(), c.code())).collect()
}

/// Degree-pattern sieve on a polynomial whose p0^d coefficient (variable 0)
/// is a unit.
pub fn degree_pattern_sieve(f_bar: &MultiPoly<FqElement>, budget: usize, seed: u64) -> SieveOutcome {
    let d = f_bar.degree() as usize;
    let (_, c) = f_bar.leading().expect("nonzero polynomial");
    let k = c.ctx().clone();
    let mut top = Monomial::one(f_bar.nvars());
    top.0[0] = d as u16;
    assert!(f_bar.coeff(&top).is_some(), "sieve needs a unit p0-leading coefficient");
    if d < 2 {
        return SieveOutcome::EmptyIntersection(Vec::new());
    }
    sieve::sieve(&k, &mod_terms(f_bar), d, budget, seed)
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlaneOutcome {
    Irreducible { forms: Vec<Vec<u64>>, attempt: usize },
    Inconclusive { tries: usize },
}

fn rank(k: &FqContext, rows: &[Vec<u64>]) -> usize {
    let mut a = rows.to_vec();
    let (n, m) = (a.len(), a.first().map_or(0, |r| r.len()));
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).find(|&i| a[i][c] != 0) else { continue };
        a.swap(p, r);
        let inv = k.inv(a[r][c]);
        for i in 0..n {
            if i != r && a[i][c] != 0 {
                let f = k.mul(a[i][c], inv);
                for j in c..m {
                    let t = k.mul(f, a[r][j]);
                    a[i][j] = k.sub(a[i][j], t);
                }
            }
        }
        r += 1;
    }
    r
}

/// One-sided test: a factorization of f restricts to every plane, so a
/// full-degree irreducible section proves f irreducible over F_q.
pub fn plane_section_certify(f_bar: &MultiPoly<FqElement>, tries: usize, seed: u64) -> PlaneOutcome {
    let d = f_bar.degree();
    let (_, c) = f_bar.leading().expect("nonzero polynomial");
    let k = c.ctx().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let yvars: Arc<[String]> = vec!["y0".to_string(), "y1".into(), "y2".into()].into();
    for attempt in 0..tries {
        let forms: Vec<Vec<u64>> = (0..f_bar.nvars()).map(|_| (0..3).map(|_| k.random(&mut rng)).collect()).collect();
        if rank(&k, &forms) < 3 {
            continue;
        }
        let images: Vec<MultiPoly<FqElement>> = forms
            .iter()
            .map(|row| {
                MultiPoly::from_terms(
                    yvars.clone(),
                    row.iter().enumerate().map(|(j, &a)| (Monomial::var(3, j), FqElement::new(&k, a))),
                )
            })
            .collect();
        let section = f_bar.substitute(&images).expect("images share variables");
        let plane = section.dehomogenize(0, &FqElement::new(&k, 1));
        if section.degree() != d || plane.degree() != d {
            continue;
        }
        let bi = BiPoly::from_multipoly(&k, &plane).expect("two variables");
        if let Ok(BiVerdict::Irreducible) = bi_is_irreducible(&bi) {
            return PlaneOutcome::Irreducible { forms, attempt };
        }
    }
    PlaneOutcome::Inconclusive { tries }
}

/// Runs trivial checks, the degree-pattern sieve, then the bivariate decision
/// (three variables) or plane sections (four or more) over F_{p^d}.
pub fn certify(f: &MultiPoly<BigRational>, p: u64, opts: &CertifyOptions) -> Result<Certificate, IrreducibleError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p).into());
    }
    let f = p0_first(f);
    let d = check_input(&f)?;
    let k = fq_build(p, d)?;
    let f_bar = reduce(&f, &k);
    if f_bar.degree() != d as i64 {
        return Err(IrreducibleError::Domain(format!("reduction modulo {p} drops the degree")));
    }
    let mut cert = Certificate {
        verdict: Verdict::Inconclusive,
        prime: p,
        d,
        modulus: k.modulus().to_vec(),
        seed: opts.seed,
        budget: opts.budget,
        plane_tries: opts.plane_tries,
        specializations: Vec::new(),
        surviving_splits: Vec::new(),
        evidence: Evidence::None,
        used: BudgetUsed { specializations: 0, plane_tries: 0 },
        note: None,
    };
    match degree_pattern_sieve(&f_bar, opts.budget, opts.seed) {
        SieveOutcome::EmptyIntersection(specs) => {
            cert.used.specializations = specs.len();
            cert.specializations = specs;
            cert.verdict = Verdict::CertifiedIrreducible;
            cert.evidence = Evidence::DegreePatterns;
            return Ok(cert);
        }
        SieveOutcome::Surviving(specs, splits) => {
            cert.used.specializations = specs.len();
            cert.specializations = specs;
            cert.surviving_splits = splits;
        }
    }
    match f.nvars() {
        2 => cert.note = Some("binary forms of degree ≥ 2 always split over F_{p^d}".into()),
        3 => bivariate_stage(&f, &f_bar, &k, &mut cert),
        _ => match plane_section_certify(&f_bar, opts.plane_tries, opts.seed) {
            PlaneOutcome::Irreducible { forms, attempt } => {
                cert.used.plane_tries = attempt + 1;
                cert.verdict = Verdict::CertifiedIrreducible;
                cert.evidence = Evidence::PlaneSection { forms, attempt };
            }
            PlaneOutcome::Inconclusive { tries } => {
                cert.used.plane_tries = tries;
                cert.note = Some(format!("no irreducible plane section in {tries} tries"));
            }
        },
    }
    Ok(cert)
}

fn bivariate_stage(
    f: &MultiPoly<BigRational>,
    f_bar: &MultiPoly<FqElement>,
    k: &Arc<FqContext>,
    cert: &mut Certificate,
) {
    let plane = f_bar.dehomogenize(0, &FqElement::new(k, 1));
    if plane.degree() != cert.d as i64 {
        cert.note = Some(format!("{} divides the reduction modulo {}", f.vars()[0], cert.prime));
        return;
    }
    let bi = BiPoly::from_multipoly(k, &plane).expect("two variables");
    match bi_is_irreducible(&bi) {
        Ok(BiVerdict::Irreducible) => {
            cert.verdict = Verdict::CertifiedIrreducible;
            cert.evidence = Evidence::Bivariate;
        }
        Ok(BiVerdict::Reducible(g, h)) => {
            if let Some((g, h)) = rational_factor_pair(f) {
                cert.verdict = Verdict::ReducibleWitness;
                cert.evidence = Evidence::RationalFactors { g: g.to_json(), h: h.to_json() };
            } else {
                cert.evidence = Evidence::ModularFactors { g: g.terms(), h: h.terms() };
                cert.note = Some(format!("reducible over F_{}^{}; inconclusive at this prime", cert.prime, cert.d));
            }
        }
        Ok(BiVerdict::Inconclusive) | Err(_) => {
            cert.note = Some("bivariate decision found no usable specialization".into());
        }
    }
}

/// Primes in increasing order, starting at 2.
pub fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&n| is_prime(n)).take(count).collect()
}

/// Tries the first `count` primes and returns the first conclusive
/// certificate, else the last inconclusive one.
pub fn certify_scan(
    f: &MultiPoly<BigRational>,
    count: usize,
    opts: &CertifyOptions,
) -> Result<Certificate, IrreducibleError> {
    let mut last = Err(IrreducibleError::Domain("no prime tried".into()));
    for p in first_primes(count) {
        match certify(f, p, opts) {
            Ok(c) if c.verdict != Verdict::Inconclusive => return Ok(c),
            Ok(c) => last = Ok(c),
            Err(IrreducibleError::Field(e)) => {
                if last.is_err() {
                    last = Err(e.into());
                }
            }
            Err(e) => return Err(e),
        }
    }
    last
}
