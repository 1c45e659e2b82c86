use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::ReconstructError;
use crate::algebra::{BigRational, Monomial, MultiPoly};

pub const MAX_UNKNOWNS: usize = 16;
pub const MAX_GENERATOR_DEGREE: i64 = 4;
/// Pair reductions allowed before giving up.
pub const MAX_PAIR_REDUCTIONS: usize = 50_000;

/// Ideal generated by rational polynomials; the monomial order is lex with
/// the variable list giving precedence (first variable largest).
#[derive(Clone, Debug, PartialEq)]
pub struct PolyIdeal {
    vars: Arc<[String]>,
    generators: Vec<MultiPoly<BigRational>>,
}

impl PolyIdeal {
    pub fn new(vars: Arc<[String]>, generators: Vec<MultiPoly<BigRational>>) -> Result<Self, ReconstructError> {
        for g in &generators {
            if g.vars() != &vars {
                return Err(ReconstructError::Domain(format!("generator over {:?}, ideal over {:?}", g.vars(), vars)));
            }
            if g.is_zero() {
                return Err(ReconstructError::Domain("zero generator".into()));
            }
        }
        Ok(PolyIdeal { vars, generators })
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn generators(&self) -> &[MultiPoly<BigRational>] {
        &self.generators
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MonomialOrder {
    Lex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    pub vars: Arc<[String]>,
    /// Sorted by leading monomial, largest first.
    pub basis: Vec<MultiPoly<BigRational>>,
    pub order: MonomialOrder,
    pub reduced: bool,
}

impl GroebnerBasis {
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].degree() == 0
    }

    /// Lex-leading monomial of each element.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|f| lex_leading(f).0).collect()
    }

    /// Remainder of `f` on division by the basis.
    pub fn normal_form(&self, f: &MultiPoly<BigRational>) -> MultiPoly<BigRational> {
        let basis: Vec<Lp> = self.basis.iter().map(Lp::from_poly).collect();
        normal_form(&Lp::from_poly(f), &basis).to_poly(&self.vars)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vars": self.vars.to_vec(),
            "order": self.order,
            "reduced": self.reduced,
            "basis": self.basis.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Lex-leading term of a nonzero polynomial.
pub fn lex_leading(f: &MultiPoly<BigRational>) -> (Monomial, BigRational) {
    f.terms().max_by(|a, b| a.0.lex_cmp(b.0)).map(|(m, c)| (m.clone(), c.clone())).expect("nonzero polynomial")
}

/// Polynomial as terms sorted by descending lex order.
#[derive(Clone, Debug, PartialEq)]
struct Lp(Vec<(Monomial, BigRational)>);

impl Lp {
    fn from_poly(f: &MultiPoly<BigRational>) -> Lp {
        let mut t: Vec<(Monomial, BigRational)> = f.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        t.sort_by(|a, b| b.0.lex_cmp(&a.0));
        Lp(t)
    }

    fn to_poly(&self, vars: &Arc<[String]>) -> MultiPoly<BigRational> {
        MultiPoly::from_terms(vars.clone(), self.0.iter().cloned())
    }

    fn lm(&self) -> &Monomial {
        &self.0[0].0
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn monic(mut self) -> Lp {
        if let Some((_, c)) = self.0.first() {
            let inv = c.recip();
            for t in &mut self.0 {
                t.1 = &t.1 * &inv;
            }
        }
        self
    }

    /// self − c·m·g.
    fn sub_scaled(&self, c: &BigRational, m: &Monomial, g: &Lp) -> Lp {
        let mut out = Vec::with_capacity(self.0.len() + g.0.len());
        let mut a = self.0.iter().peekable();
        let mut b = g.0.iter().map(|(gm, gc)| (gm.mul(m), gc * c)).peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => x.0.lex_cmp(&y.0),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap().clone()),
                Ordering::Less => {
                    let (m, c) = b.next().unwrap();
                    out.push((m, -c));
                }
                Ordering::Equal => {
                    let (m, c1) = a.next().unwrap().clone();
                    let (_, c2) = b.next().unwrap();
                    let c = c1 - c2;
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            }
        }
        Lp(out)
    }
}

/// Full reduction of every term of `f` modulo `basis`.
fn normal_form(f: &Lp, basis: &[Lp]) -> Lp {
    let mut rest = f.clone();
    let mut rem: Vec<(Monomial, BigRational)> = Vec::new();
    while !rest.is_zero() {
        let (m, c) = rest.0[0].clone();
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m);
                let coef = &c / &g.0[0].1;
                rest = rest.sub_scaled(&coef, &q, g);
            }
            None => {
                rem.push((m, c));
                rest.0.remove(0);
            }
        }
    }
    Lp(rem)
}

fn spoly(f: &Lp, g: &Lp) -> Lp {
    // (l/lm f)·f/lc f − (l/lm g)·g/lc g
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l);
    let mg = g.lm().quotient_of(&l);
    let scaled_f = Lp(Vec::new()).sub_scaled(&-f.0[0].1.recip(), &mf, f);
    scaled_f.sub_scaled(&g.0[0].1.recip(), &mg, g)
}

fn check_envelope(ideal: &PolyIdeal) -> Result<(), ReconstructError> {
    if ideal.vars.len() > MAX_UNKNOWNS {
        return Err(ReconstructError::Resource(format!(
            "{} unknowns exceed the limit of {MAX_UNKNOWNS}",
            ideal.vars.len()
        )));
    }
    if let Some(g) = ideal.generators.iter().find(|g| g.degree() > MAX_GENERATOR_DEGREE) {
        return Err(ReconstructError::Resource(format!(
            "generator of degree {} exceeds the limit of {MAX_GENERATOR_DEGREE}",
            g.degree()
        )));
    }
    Ok(())
}

/// Reduced lex Gröbner basis. Pairs are taken by the normal strategy
/// (smallest lcm first, ties by pair index), with the product and chain
/// criteria.
pub fn buchberger(ideal: &PolyIdeal) -> Result<GroebnerBasis, ReconstructError> {
    check_envelope(ideal)?;
    let vars = ideal.vars.clone();
    let mut g: Vec<Lp> = Vec::new();
    // Start from interreduced, monic generators in a canonical order so the
    // result does not depend on the input order.
    let mut gens: Vec<Lp> = ideal.generators.iter().map(|f| Lp::from_poly(f).monic()).collect();
    gens.sort_by(|a, b| cmp_lp(a, b));
    gens.dedup();
    for f in gens {
        let r = normal_form(&f, &g);
        if !r.is_zero() {
            g.push(r.monic());
        }
    }
    if g.iter().any(|f| f.lm().degree() == 0) {
        return Ok(unit_basis(vars));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done = 0usize;
    while let Some(pos) = select_pair(&g, &pairs) {
        let (i, j) = pairs.swap_remove(pos);
        if g[i].lm().is_coprime(g[j].lm()) || chain_criterion(&g, &pairs, i, j) {
            continue;
        }
        done += 1;
        if done > MAX_PAIR_REDUCTIONS {
            return Err(ReconstructError::Resource(format!("more than {MAX_PAIR_REDUCTIONS} pair reductions")));
        }
        let s = spoly(&g[i], &g[j]);
        let r = normal_form(&s, &g);
        if r.is_zero() {
            continue;
        }
        let r = r.monic();
        if r.lm().degree() == 0 {
            return Ok(unit_basis(vars));
        }
        let k = g.len();
        g.push(r);
        for i in 0..k {
            pairs.push((i, k));
        }
    }
    Ok(GroebnerBasis { basis: reduce_basis(g, &vars), vars, order: MonomialOrder::Lex, reduced: true })
}

fn cmp_lp(a: &Lp, b: &Lp) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        let o = x.0.lex_cmp(&y.0).then_with(|| x.1.cmp(&y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.0.len().cmp(&b.0.len())
}

fn select_pair(g: &[Lp], pairs: &[(usize, usize)]) -> Option<usize> {
    (0..pairs.len()).min_by(|&a, &b| {
        let (i, j) = pairs[a];
        let (k, l) = pairs[b];
        let la = g[i].lm().lcm(g[j].lm());
        let lb = g[k].lm().lcm(g[l].lm());
        la.lex_cmp(&lb).then((i, j).cmp(&(k, l)))
    })
}

/// Skips (i, j) when some third leading monomial divides their lcm and both
/// pairs with it have already been handled.
fn chain_criterion(g: &[Lp], pairs: &[(usize, usize)], i: usize, j: usize) -> bool {
    let l = g[i].lm().lcm(g[j].lm());
    let pending = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
    (0..g.len()).any(|k| k != i && k != j && g[k].lm().divides(&l) && !pending(i, k) && !pending(j, k))
}

fn unit_basis(vars: Arc<[String]>) -> GroebnerBasis {
    let one = MultiPoly::constant(vars.clone(), BigRational::one());
    GroebnerBasis { vars, basis: vec![one], order: MonomialOrder::Lex, reduced: true }
}

fn reduce_basis(g: Vec<Lp>, vars: &Arc<[String]>) -> Vec<MultiPoly<BigRational>> {
    // Drop elements whose leading monomial is divisible by another's.
    let mut minimal: Vec<Lp> = Vec::new();
    for (i, f) in g.iter().enumerate() {
        let redundant =
            g.iter().enumerate().any(|(j, h)| j != i && h.lm().divides(f.lm()) && (h.lm() != f.lm() || j < i));
        if !redundant {
            minimal.push(f.clone());
        }
    }
    let mut out: Vec<Lp> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<Lp> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()).collect();
        let head = Lp(vec![minimal[i].0[0].clone()]);
        let tail = Lp(minimal[i].0[1..].to_vec());
        let mut r = normal_form(&tail, &others);
        r.0.insert(0, head.0[0].clone());
        out.push(r.monic());
    }
    out.sort_by(|a, b| b.lm().lex_cmp(a.lm()));
    out.into_iter().map(|f| f.to_poly(vars)).collect()
}
