use super::poly::{Monomial, MultiPoly};
use super::AlgebraError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Always `num/den`, also for integers.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn exact_from_f64(x: f64) -> Result<BigRational, AlgebraError> {
    if !x.is_finite() {
        return Err(AlgebraError::Domain(format!("non-finite input {x}")));
    }
    BigRational::from_f64(x).ok_or_else(|| AlgebraError::Domain(format!("cannot convert {x}")))
}

fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0).div_floor(&q1);
    let b1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = BigRational::new(p1, q1);
    if (&b2 - x).abs() <= (&b1 - x).abs() {
        b2
    } else {
        b1
    }
}

/// Continued-fraction best approximation of `x` with denominator at most
/// `max_den`, together with the residual `|x − p/q|`.
pub fn rational_reconstruct(x: f64, max_den: u64) -> Result<(BigRational, f64), AlgebraError> {
    let exact = exact_from_f64(x)?;
    let r = limit_denominator(&exact, &BigInt::from(max_den.max(1)));
    let resid = (x - to_f64(&r)).abs();
    Ok((r, resid))
}

fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    if lo.is_positive() {
        let fl = lo.floor();
        if &fl == lo {
            return fl;
        }
        let up = &fl + BigRational::one();
        if &up <= hi {
            return up;
        }
        let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
        fl + inner.recip()
    } else if hi.is_negative() {
        -simplest_between(&-hi, &-lo)
    } else {
        BigRational::zero()
    }
}

/// Simplest rational (smallest denominator) within `tol` of `x`; falls back to
/// [`rational_reconstruct`] when that rational needs a denominator above `max_den`.
pub fn rational_reconstruct_within(x: f64, tol: f64, max_den: u64) -> Result<(BigRational, f64), AlgebraError> {
    let exact = exact_from_f64(x)?;
    let t = exact_from_f64(tol.abs())?;
    let r = simplest_between(&(&exact - &t), &(&exact + &t));
    if r.denom() <= &BigInt::from(max_den) {
        let resid = (x - to_f64(&r)).abs();
        return Ok((r, resid));
    }
    rational_reconstruct(x, max_den)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    exp: Vec<u16>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl MultiPoly<BigRational> {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = PolyJson {
            vars: self.vars().to_vec(),
            terms: self
                .terms()
                .rev()
                .map(|(m, c)| TermJson { exp: m.exps().to_vec(), coef: format_rational(c) })
                .collect(),
        };
        serde_json::to_value(doc).expect("polynomial serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, AlgebraError> {
        let doc: PolyJson = serde_json::from_value(v.clone()).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        let n = doc.vars.len();
        let vars: Arc<[String]> = doc.vars.into();
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            if t.exp.len() != n {
                return Err(AlgebraError::Parse(format!(
                    "exponent vector of length {} for {} variables",
                    t.exp.len(),
                    n
                )));
            }
            terms.push((Monomial::from_exps(&t.exp), parse_rational(&t.coef)?));
        }
        Ok(MultiPoly::from_terms(vars, terms))
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms().all(|(_, c)| c.is_integer())
    }
}
