use super::field::Field;
use super::AlgebraError;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exponent vector, one slot per ambient variable.
///
/// `Ord` is graded lexicographic: total degree first, then the first
/// differing exponent decides (larger exponent = larger monomial).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn lex_cmp(&self, o: &Monomial) -> Ordering {
        self.0.cmp(&o.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate polynomial over a coefficient field `C`.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<C> {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, C>,
}

pub fn var_names(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

impl<C: Field> MultiPoly<C> {
    pub fn zero(vars: Arc<[String]>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<[String]>, c: C) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::one(n), c)])
    }

    /// The variable `i` with coefficient `one`.
    pub fn var(vars: Arc<[String]>, i: usize, one: C) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::var(n, i), one)])
    }

    /// Builds a polynomial, summing duplicate monomials and dropping zeros.
    pub fn from_terms(vars: Arc<[String]>, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial length must equal variable count");
            match map.get_mut(&m) {
                Some(old) => *old = old.plus(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero_el());
        MultiPoly { vars, terms: map }
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var] as i64).max().unwrap_or(-1)
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Greatest term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_vars(&self, o: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch(self.vars.to_vec(), o.vars.to_vec()))
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(o)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            match terms.get_mut(m) {
                Some(old) => {
                    let s = old.plus(c);
                    if s.is_zero_el() {
                        terms.remove(m);
                    } else {
                        *old = s;
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(MultiPoly { vars: self.vars.clone(), terms })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.check_vars(o)?;
        let mut terms: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = ca.times(cb);
                match terms.get_mut(&m) {
                    Some(old) => *old = old.plus(&c),
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero_el());
        Ok(MultiPoly { vars: self.vars.clone(), terms })
    }

    /// Panicking forms of the ring operations, for operands known to share variables.
    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("variable lists differ")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("variable lists differ")
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("variable lists differ")
    }

    pub fn neg(&self) -> Self {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect() }
    }

    pub fn scale(&self, a: &C) -> Self {
        if a.is_zero_el() {
            return Self::zero(self.vars.clone());
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.times(a))).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    /// Quotient `self / g` when `g` divides `self` exactly, else `None`.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        let (gm, gc) = g.leading()?;
        let ginv = gc.inverse()?;
        let mut rest = self.clone();
        let mut q = Self::zero(self.vars.clone());
        while let Some((m, c)) = rest.leading() {
            if !gm.divides(m) {
                return None;
            }
            let t = Self::from_terms(self.vars.clone(), [(gm.quotient_of(m), c.times(&ginv))]);
            rest = rest.try_sub(&g.mul(&t)).ok()?;
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn pow(&self, e: u32, one: &C) -> Self {
        let mut acc = Self::constant(self.vars.clone(), one.one_like());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation at a point (one coordinate per variable).
    pub fn eval(&self, point: &[C]) -> Result<C, AlgebraError> {
        if point.len() != self.nvars() {
            return Err(AlgebraError::LengthMismatch { expected: self.nvars(), got: point.len() });
        }
        let zero = match (self.terms.values().next(), point.first()) {
            (Some(c), _) => c.zero_like(),
            (None, Some(x)) => x.zero_like(),
            (None, None) => return Err(AlgebraError::Domain("cannot infer the field of an empty evaluation".into())),
        };
        // Powers are cached per variable so each term costs one product chain.
        let mut powers: Vec<Vec<C>> = point.iter().map(|x| vec![x.one_like()]).collect();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().times(&point[i]);
                    powers[i].push(next);
                }
                t = t.times(&powers[i][e]);
            }
            acc = acc.plus(&t);
        }
        Ok(acc)
    }

    /// Pads each term with powers of a new leading variable up to `target_degree`.
    pub fn homogenize(&self, new_var: &str, target_degree: u32) -> Result<Self, AlgebraError> {
        if self.degree() > target_degree as i64 {
            return Err(AlgebraError::Domain(format!(
                "target degree {} below polynomial degree {}",
                target_degree,
                self.degree()
            )));
        }
        let mut names = vec![new_var.to_string()];
        names.extend(self.vars.iter().cloned());
        let vars: Arc<[String]> = names.into();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e: SmallVec<[u16; 8]> = SmallVec::new();
            e.push((target_degree - m.degree()) as u16);
            e.extend(m.0.iter().copied());
            (Monomial(e), c.clone())
        });
        Ok(Self::from_terms(vars, terms))
    }

    /// Substitutes `value` for variable `var` and removes it from the variable list.
    pub fn dehomogenize(&self, var: usize, value: &C) -> Self {
        let names: Vec<String> =
            self.vars.iter().enumerate().filter(|(i, _)| *i != var).map(|(_, s)| s.clone()).collect();
        let vars: Arc<[String]> = names.into();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut k = c.clone();
            for _ in 0..m.0[var] {
                k = k.times(value);
            }
            let e: SmallVec<[u16; 8]> = m.0.iter().enumerate().filter(|(i, _)| *i != var).map(|(_, e)| *e).collect();
            (Monomial(e), k)
        });
        Self::from_terms(vars, terms)
    }

    /// Replaces every variable by the matching polynomial of `images`
    /// (all images share one variable list, which becomes the result's).
    pub fn substitute(&self, images: &[MultiPoly<C>]) -> Result<Self, AlgebraError> {
        if images.len() != self.nvars() {
            return Err(AlgebraError::LengthMismatch { expected: self.nvars(), got: images.len() });
        }
        let target = match images.first() {
            Some(f) => f.vars.clone(),
            None => return Ok(self.clone()),
        };
        let mut acc = Self::zero(target.clone());
        let mut powers: Vec<Vec<Self>> = Vec::new();
        for (m, c) in &self.terms {
            if powers.is_empty() {
                powers = images.iter().map(|_| vec![Self::constant(target.clone(), c.one_like())]).collect();
            }
            let mut t = Self::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().try_mul(&images[i])?;
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e]);
                }
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.0[var] > 0).map(|(m, c)| {
            let mut e = m.clone();
            let k = e.0[var];
            e.0[var] -= 1;
            (e, c.times(&c.int_like(k as i64)))
        });
        Self::from_terms(self.vars.clone(), terms)
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly::from_terms(self.vars.clone(), self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Re-expresses the polynomial over a different variable list; `map[i]` is the
    /// target slot of source variable `i`.
    pub fn remap_vars(&self, vars: Arc<[String]>, map: &[usize]) -> Self {
        let n = vars.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = Monomial::one(n);
            for (i, &k) in m.0.iter().enumerate() {
                e.0[map[i]] += k;
            }
            (e, c.clone())
        });
        Self::from_terms(vars, terms)
    }
}

impl<C: Field + fmt::Display> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = format!("{c}");
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            if mag != "1" || m.degree() == 0 {
                parts.push(mag);
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars[i].clone()),
                    _ => parts.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
