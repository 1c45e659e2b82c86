//! Bivariate factorization over F_q: choose a main variable with constant
//! leading coefficient, specialize y to a value with a squarefree image,
//! factor that image, Hensel-lift the factors in y and recombine by exact
//! trial division. Fields too small for a good specialization are handled by
//! factoring over an extension and grouping Frobenius orbits.

use super::fq::{fq_cached, FqContext, FqElement};
use super::uni::{self, Raw};
use super::FieldError;
use crate::algebra::{var_names, Monomial, MultiPoly};
use std::sync::Arc;

/// Dense bivariate: `c[i]` is the coefficient of x^i as a polynomial in y.
type Bi = Vec<Raw>;

/// Largest total degree accepted.
pub const MAX_BI_DEGREE: usize = 12;

fn bi_trim(a: &mut Bi) {
    for c in a.iter_mut() {
        uni::trim(c);
    }
    while a.last().is_some_and(|c| c.is_empty()) {
        a.pop();
    }
}

fn deg_x(a: &Bi) -> i64 {
    a.len() as i64 - 1
}

fn deg_y(a: &Bi) -> i64 {
    a.iter().map(|c| uni::deg(c)).max().unwrap_or(-1)
}

fn total_degree(a: &Bi) -> i64 {
    a.iter().enumerate().filter(|(_, c)| !c.is_empty()).map(|(i, c)| i as i64 + uni::deg(c)).max().unwrap_or(-1)
}

fn bi_add(k: &FqContext, a: &Bi, b: &Bi) -> Bi {
    let n = a.len().max(b.len());
    let mut r: Bi =
        (0..n).map(|i| uni::add(k, a.get(i).map_or(&[][..], |v| v), b.get(i).map_or(&[][..], |v| v))).collect();
    bi_trim(&mut r);
    r
}

fn bi_sub(k: &FqContext, a: &Bi, b: &Bi) -> Bi {
    let n = a.len().max(b.len());
    let mut r: Bi =
        (0..n).map(|i| uni::sub(k, a.get(i).map_or(&[][..], |v| v), b.get(i).map_or(&[][..], |v| v))).collect();
    bi_trim(&mut r);
    r
}

fn bi_mul(k: &FqContext, a: &Bi, b: &Bi) -> Bi {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r: Bi = vec![vec![]; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_empty() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_empty() {
                continue;
            }
            r[i + j] = uni::add(k, &r[i + j], &uni::mul(k, x, y));
        }
    }
    bi_trim(&mut r);
    r
}

fn truncate_y(a: &mut Bi, prec: usize) {
    for c in a.iter_mut() {
        c.truncate(prec);
    }
    bi_trim(a);
}

fn bi_mul_trunc(k: &FqContext, a: &Bi, b: &Bi, prec: usize) -> Bi {
    let mut r = bi_mul(k, a, b);
    truncate_y(&mut r, prec);
    r
}

fn bi_scale(k: &FqContext, a: &Bi, c: u64) -> Bi {
    let mut r: Bi = a.iter().map(|v| uni::scale(k, v, c)).collect();
    bi_trim(&mut r);
    r
}

/// Division by `b`, monic in x (leading x-coefficient equal to 1).
fn bi_divrem_monic(k: &FqContext, a: &Bi, b: &Bi) -> (Bi, Bi) {
    let db = b.len() - 1;
    debug_assert!(b[db] == vec![1]);
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q: Bi = vec![vec![]; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top].clone();
        for i in 0..=db {
            let t = uni::mul(k, &c, &b[i]);
            r[top - db + i] = uni::sub(k, &r[top - db + i], &t);
        }
        q[top - db] = c;
        bi_trim(&mut r);
        if r.len() > top {
            r.truncate(top);
            bi_trim(&mut r);
        }
    }
    bi_trim(&mut q);
    (q, r)
}

fn deriv_x(k: &FqContext, a: &Bi) -> Bi {
    let mut r: Bi = a.iter().enumerate().skip(1).map(|(i, c)| uni::scale(k, c, k.from_int(i as i64))).collect();
    bi_trim(&mut r);
    r
}

fn deriv_y(k: &FqContext, a: &Bi) -> Bi {
    let mut r: Bi = a.iter().map(|c| uni::derivative(k, c)).collect();
    bi_trim(&mut r);
    r
}

fn eval_y(k: &FqContext, a: &Bi, y0: u64) -> Raw {
    let mut r: Raw = a.iter().map(|c| uni::eval(k, c, y0)).collect();
    uni::trim(&mut r);
    r
}

fn shift_y(k: &FqContext, a: &Bi, t: u64) -> Bi {
    let mut r: Bi = a.iter().map(|c| uni::shift(k, c, t)).collect();
    bi_trim(&mut r);
    r
}

fn terms(a: &Bi) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    for (i, c) in a.iter().enumerate() {
        for (j, &v) in c.iter().enumerate() {
            if v != 0 {
                out.push((i, j, v));
            }
        }
    }
    out
}

fn from_terms(k: &FqContext, ts: impl IntoIterator<Item = (usize, usize, u64)>) -> Bi {
    let mut r: Bi = Vec::new();
    for (i, j, v) in ts {
        if r.len() <= i {
            r.resize(i + 1, vec![]);
        }
        if r[i].len() <= j {
            r[i].resize(j + 1, 0);
        }
        r[i][j] = k.add(r[i][j], v);
    }
    bi_trim(&mut r);
    r
}

fn swap_xy(k: &FqContext, a: &Bi) -> Bi {
    from_terms(k, terms(a).into_iter().map(|(i, j, v)| (j, i, v)))
}

fn binomials(k: &FqContext, n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let mut row = vec![1u64; m + 1];
        for l in 1..m {
            row[l] = k.add(prev[l - 1], prev[l]);
        }
        rows.push(row);
    }
    rows
}

/// a(x, y + s·x).
fn shear(k: &FqContext, a: &Bi, s: u64) -> Bi {
    if s == 0 {
        return a.clone();
    }
    let ts = terms(a);
    let maxj = ts.iter().map(|t| t.1).max().unwrap_or(0);
    let binom = binomials(k, maxj);
    let mut out = Vec::new();
    for (i, j, v) in ts {
        // x^i (y + s x)^j = Σ_l C(j,l) s^(j−l) x^(i+j−l) y^l
        for l in 0..=j {
            let c = k.mul(v, k.mul(binom[j][l], k.pow(s, (j - l) as u64)));
            out.push((i + j - l, l, c));
        }
    }
    from_terms(k, out)
}

#[derive(Clone, Copy)]
struct Transform {
    swap: bool,
    s: u64,
}

impl Transform {
    fn apply(&self, k: &FqContext, a: &Bi) -> Bi {
        let b = if self.swap { swap_xy(k, a) } else { a.clone() };
        shear(k, &b, self.s)
    }

    fn undo(&self, k: &FqContext, a: &Bi) -> Bi {
        let b = shear(k, a, k.neg(self.s));
        if self.swap {
            swap_xy(k, &b)
        } else {
            b
        }
    }
}

/// Makes the graded-lex leading coefficient (x before y) equal to one.
fn normalize(k: &FqContext, a: &Bi) -> (Bi, u64) {
    let lc = leading_coeff(a);
    (bi_scale(k, a, k.inv(lc)), lc)
}

fn leading_coeff(a: &Bi) -> u64 {
    terms(a).into_iter().max_by_key(|&(i, j, _)| (i + j, i)).map(|t| t.2).expect("nonzero polynomial")
}

fn pth_root_bi(k: &FqContext, a: &Bi) -> Bi {
    let p = k.p() as usize;
    from_terms(k, terms(a).into_iter().map(|(i, j, v)| (i / p, j / p, k.pth_root(v))))
}

fn content(k: &FqContext, a: &Bi) -> Raw {
    a.iter().fold(vec![], |g, c| uni::gcd(k, &g, c))
}

fn primitive_part(k: &FqContext, a: &Bi) -> Bi {
    let c = content(k, a);
    if c.len() <= 1 {
        return a.clone();
    }
    let mut r: Bi = a.iter().map(|v| uni::divrem(k, v, &c).0).collect();
    bi_trim(&mut r);
    r
}

/// Pseudo-remainder of `a` by `b` in F_q[y][x].
fn prem(k: &FqContext, a: &Bi, b: &Bi) -> Bi {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    while !r.is_empty() && r.len() > db {
        let top = r.len() - 1;
        let lr = r[top].clone();
        let shift = top - db;
        let mut scaled: Bi = r.iter().map(|c| uni::mul(k, c, &lb)).collect();
        for (i, c) in b.iter().enumerate() {
            scaled[shift + i] = uni::sub(k, &scaled[shift + i], &uni::mul(k, &lr, c));
        }
        bi_trim(&mut scaled);
        r = scaled;
    }
    r
}

/// Primitive gcd in x of two polynomials whose contents are trivial.
fn gcd_x(k: &FqContext, a: &Bi, b: &Bi) -> Bi {
    let (mut a, mut b) = (primitive_part(k, a), primitive_part(k, b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(k, &a, &b);
        a = b;
        b = if r.is_empty() { r } else { primitive_part(k, &r) };
    }
    a
}

fn make_monic_x(k: &FqContext, a: &Bi) -> Bi {
    let lc = a.last().expect("nonzero")[0];
    bi_scale(k, a, k.inv(lc))
}

/// Multifactor Hensel lifting of `g ≡ Π us mod y` to precision y^prec.
fn hensel_lift(k: &FqContext, g: &Bi, us: &[Raw], prec: usize) -> Vec<Bi> {
    let r = us.len();
    let coefs: Vec<Raw> = (0..r)
        .map(|i| {
            let mut prod: Raw = vec![1];
            for (j, u) in us.iter().enumerate() {
                if j != i {
                    prod = uni::mulmod(k, &prod, u, &us[i]);
                }
            }
            uni::inv_mod(k, &prod, &us[i]).expect("factors of a squarefree image are coprime")
        })
        .collect();
    let mut lifted: Vec<Bi> =
        us.iter().map(|u| u.iter().map(|&c| if c == 0 { vec![] } else { vec![c] }).collect()).collect();
    for step in 1..prec {
        let mut prod: Bi = vec![vec![1]];
        for f in &lifted {
            prod = bi_mul_trunc(k, &prod, f, step + 1);
        }
        let err = bi_sub(k, g, &prod);
        let mut e: Raw = err.iter().map(|c| c.get(step).copied().unwrap_or(0)).collect();
        uni::trim(&mut e);
        if e.is_empty() {
            continue;
        }
        for i in 0..r {
            let delta = uni::rem(k, &uni::mul(k, &e, &coefs[i]), &us[i]);
            for (a, &c) in delta.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let slot = &mut lifted[i][a];
                if slot.len() <= step {
                    slot.resize(step + 1, 0);
                }
                slot[step] = k.add(slot[step], c);
            }
        }
    }
    lifted
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Factors `g`, monic in x and squarefree, into irreducibles monic in x.
/// `None` when no y0 in the field gives a squarefree image.
/// First y0 whose image g(x, y0) is squarefree of full degree.
fn good_specialization(k: &FqContext, g: &Bi) -> Option<(u64, Raw)> {
    (0..k.order().min(256)).find_map(|y0| {
        let u = eval_y(k, g, y0);
        let du = uni::derivative(k, &u);
        (!du.is_empty() && uni::gcd(k, &u, &du) == vec![1]).then_some((y0, u))
    })
}

fn factor_monic_squarefree(k: &FqContext, g: &Bi) -> Option<Vec<Bi>> {
    if deg_x(g) <= 1 {
        return Some(vec![g.clone()]);
    }
    let (y0, u) = good_specialization(k, g)?;
    let (_, fs) = uni::factor(k, &u, y0 ^ 0x9e37);
    if fs.len() == 1 {
        return Some(vec![g.clone()]);
    }
    let h = shift_y(k, g, y0);
    let prec = deg_y(&h).max(0) as usize + 1;
    let us: Vec<Raw> = fs.into_iter().map(|(f, _)| f).collect();
    let mut lifted = hensel_lift(k, &h, &us, prec);
    let mut rest = h;
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), size) {
            let mut cand: Bi = vec![vec![1]];
            for &i in &subset {
                cand = bi_mul_trunc(k, &cand, &lifted[i], prec);
            }
            let (q, r) = bi_divrem_monic(k, &rest, &cand);
            if r.is_empty() {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    found.push(rest);
    let back = k.neg(y0);
    Some(found.into_iter().map(|f| shift_y(k, &f, back)).collect())
}

type Factors = Vec<(Bi, u32)>;

fn merge(mut a: Factors, b: Factors) -> Factors {
    for (f, e) in b {
        match a.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 += e,
            None => a.push((f, e)),
        }
    }
    a
}

/// Full factorization over the field of `k` into normalized irreducibles
/// (unit omitted). `None` when the field is too small for the method.
fn factor_over(k: &FqContext, f: &Bi) -> Option<Factors> {
    if total_degree(f) <= 0 {
        return Some(vec![]);
    }
    let fx = deriv_x(k, f);
    if fx.is_empty() && deriv_y(k, f).is_empty() {
        let h = pth_root_bi(k, f);
        let p = k.p() as u32;
        return Some(factor_over(k, &h)?.into_iter().map(|(g, e)| (g, e * p)).collect());
    }
    let d = total_degree(f) as usize;
    let shears = k.order().min(64);
    let t = [false, true].into_iter().flat_map(|swap| (0..shears).map(move |s| Transform { swap, s })).find(|t| {
        let g = t.apply(k, f);
        deg_x(&g) == d as i64 && is_monic_x_const(&g) && !deriv_x(k, &g).is_empty()
    })?;
    let g = make_monic_x(k, &t.apply(k, f));
    // A squarefree specialization already certifies that g is squarefree.
    let h = if good_specialization(k, &g).is_some() { vec![vec![1]] } else { gcd_x(k, &g, &deriv_x(k, &g)) };
    if deg_x(&h) > 0 {
        let h = make_monic_x(k, &h);
        let (q, _) = bi_divrem_monic(k, &g, &h);
        let a = factor_over(k, &t.undo(k, &h))?;
        let b = factor_over(k, &t.undo(k, &q))?;
        return Some(merge(a, b));
    }
    let fs = factor_monic_squarefree(k, &g)?;
    Some(fs.into_iter().map(|f| (normalize(k, &t.undo(k, &f)).0, 1)).collect())
}

/// Leading x-coefficient is a nonzero constant.
fn is_monic_x_const(a: &Bi) -> bool {
    a.last().is_some_and(|c| c.len() == 1)
}

/// Embedding of F_q into an extension F_{q^k} and descent back.
struct Embedding {
    base: Arc<FqContext>,
    ext: Arc<FqContext>,
    /// Images of t^i (t the base generator), i < d.
    powers: Vec<u64>,
}

impl Embedding {
    fn new(base: &Arc<FqContext>, ext: &Arc<FqContext>) -> Self {
        let d = base.d();
        let powers = if d == 1 {
            vec![1]
        } else {
            let m: Raw = base.modulus().iter().map(|&c| c).collect();
            let (_, fs) = uni::factor(ext, &m, 7);
            let lin = fs.iter().find(|(f, _)| f.len() == 2).expect("base modulus splits in the extension");
            let alpha = ext.neg(lin.0[0]);
            let mut pw = vec![1u64];
            for _ in 1..d {
                pw.push(ext.mul(*pw.last().unwrap(), alpha));
            }
            pw
        };
        Embedding { base: base.clone(), ext: ext.clone(), powers }
    }

    fn up(&self, a: u64) -> u64 {
        if self.base.d() == 1 {
            return a;
        }
        self.base.digits(a).iter().zip(&self.powers).fold(0, |acc, (&c, &w)| self.ext.add(acc, self.ext.mul(c, w)))
    }

    /// Inverse image of an element fixed by the q-Frobenius.
    fn down(&self, e: u64) -> u64 {
        let p = self.base.p();
        if self.base.d() == 1 {
            debug_assert!(e < p);
            return e;
        }
        // Solve Σ c_i powers[i] = e over F_p by Gaussian elimination.
        let d = self.base.d();
        let rows = self.ext.d();
        let cols: Vec<Vec<u64>> = self.powers.iter().map(|&w| self.ext.digits(w)).collect();
        let rhs = self.ext.digits(e);
        let mut m: Vec<Vec<u64>> = (0..rows).map(|r| (0..d).map(|c| cols[c][r]).chain([rhs[r]]).collect()).collect();
        let fp = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
        let inv = |a: u64| {
            let mut r = 1u64;
            let (mut b, mut x) = (a, p - 2);
            while x > 0 {
                if x & 1 == 1 {
                    r = fp(r, b);
                }
                b = fp(b, b);
                x >>= 1;
            }
            r
        };
        let mut row = 0;
        let mut pivots = vec![usize::MAX; d];
        for col in 0..d {
            let Some(pr) = (row..rows).find(|&r| m[r][col] != 0) else { continue };
            m.swap(row, pr);
            let iv = inv(m[row][col]);
            for x in m[row].iter_mut() {
                *x = fp(*x, iv);
            }
            for r in 0..rows {
                if r != row && m[r][col] != 0 {
                    let f = m[r][col];
                    for c in 0..=d {
                        let t = fp(f, m[row][c]);
                        m[r][c] = (m[r][c] + p - t) % p;
                    }
                }
            }
            pivots[col] = row;
            row += 1;
        }
        let coeffs: Vec<u64> = (0..d).map(|c| if pivots[c] == usize::MAX { 0 } else { m[pivots[c]][d] }).collect();
        self.base.from_digits(&coeffs)
    }
}

fn frobenius_bi(k: &FqContext, a: &Bi, q: u64) -> Bi {
    a.iter().map(|c| c.iter().map(|&v| k.pow(v, q)).collect()).collect()
}

/// Groups extension factors into Frobenius orbits; each orbit product lies
/// over the base field.
fn descend(emb: &Embedding, fs: Factors) -> Factors {
    let k = &*emb.ext;
    let q = emb.base.order();
    let mut used = vec![false; fs.len()];
    let mut out = Vec::new();
    for i in 0..fs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut prod = fs[i].0.clone();
        let mut cur = frobenius_bi(k, &fs[i].0, q);
        while cur != fs[i].0 {
            let j = fs.iter().position(|(g, _)| *g == cur).expect("Frobenius permutes the factors");
            used[j] = true;
            prod = bi_mul(k, &prod, &cur);
            cur = frobenius_bi(k, &cur, q);
        }
        let down: Bi = prod.iter().map(|c| c.iter().map(|&v| emb.down(v)).collect()).collect();
        let mut down = down;
        bi_trim(&mut down);
        out.push((down, fs[i].1));
    }
    out
}

/// Bivariate polynomial over F_q in variables (x, y).
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    ctx: Arc<FqContext>,
    c: Bi,
}

impl BiPoly {
    /// From (x-exponent, y-exponent, integer coefficient) triples.
    pub fn from_int_terms(ctx: &Arc<FqContext>, ts: &[(usize, usize, i64)]) -> Self {
        BiPoly { ctx: ctx.clone(), c: from_terms(ctx, ts.iter().map(|&(i, j, v)| (i, j, ctx.from_int(v)))) }
    }

    /// From (x-exponent, y-exponent, element code) triples.
    pub fn from_code_terms(ctx: &Arc<FqContext>, ts: &[(usize, usize, u64)]) -> Self {
        BiPoly { ctx: ctx.clone(), c: from_terms(ctx, ts.iter().copied()) }
    }

    pub fn from_multipoly(ctx: &Arc<FqContext>, f: &MultiPoly<FqElement>) -> Result<Self, FieldError> {
        if f.nvars() != 2 {
            return Err(FieldError::Domain(format!("expected 2 variables, got {}", f.nvars())));
        }
        let ts = f.terms().map(|(m, c)| (m.exps()[0] as usize, m.exps()[1] as usize, c.code()));
        Ok(BiPoly { ctx: ctx.clone(), c: from_terms(ctx, ts) })
    }

    pub fn to_multipoly(&self, names: [&str; 2]) -> MultiPoly<FqElement> {
        let vars = var_names(&names);
        MultiPoly::from_terms(
            vars,
            terms(&self.c)
                .into_iter()
                .map(|(i, j, v)| (Monomial::from_exps(&[i as u16, j as u16]), FqElement::new(&self.ctx, v))),
        )
    }

    pub fn ctx(&self) -> &Arc<FqContext> {
        &self.ctx
    }

    /// (x-exponent, y-exponent, element code) of every nonzero term.
    pub fn terms(&self) -> Vec<(usize, usize, u64)> {
        terms(&self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Total degree; −1 for zero.
    pub fn degree(&self) -> i64 {
        total_degree(&self.c)
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        BiPoly { ctx: self.ctx.clone(), c: bi_mul(&self.ctx, &self.c, &o.c) }
    }

    pub fn scale(&self, a: &FqElement) -> BiPoly {
        BiPoly { ctx: self.ctx.clone(), c: bi_scale(&self.ctx, &self.c, a.code()) }
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        BiPoly { ctx: self.ctx.clone(), c: bi_sub(&self.ctx, &self.c, &o.c) }
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        BiPoly { ctx: self.ctx.clone(), c: bi_add(&self.ctx, &self.c, &o.c) }
    }

    /// Exact quotient by `o` when `o` divides `self`.
    pub fn exact_div(&self, o: &BiPoly) -> Option<BiPoly> {
        if o.is_zero() {
            return None;
        }
        let k = &*self.ctx;
        // Shear the divisor until its leading x-coefficient is constant.
        let t = [false, true]
            .into_iter()
            .flat_map(|swap| (0..k.order().min(64)).map(move |s| Transform { swap, s }))
            .find(|t| {
            let g = t.apply(k, &o.c);
            deg_x(&g) == total_degree(&o.c) && is_monic_x_const(&g)
        })?;
        let b = t.apply(k, &o.c);
        let lc = b.last().unwrap()[0];
        let b = bi_scale(k, &b, k.inv(lc));
        let a = t.apply(k, &self.c);
        let (q, r) = bi_divrem_monic(k, &a, &b);
        if !r.is_empty() {
            return None;
        }
        let q = bi_scale(k, &q, k.inv(lc));
        Some(BiPoly { ctx: self.ctx.clone(), c: t.undo(k, &q) })
    }
}

/// `unit · Π factor^multiplicity`, factors with graded-lex leading coefficient 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BiFactorization {
    pub unit: FqElement,
    pub factors: Vec<(BiPoly, u32)>,
}

impl BiFactorization {
    pub fn expand(&self) -> BiPoly {
        let ctx = self.unit.ctx();
        let mut acc = BiPoly::from_code_terms(ctx, &[(0, 0, self.unit.code())]);
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Outcome of the bivariate irreducibility decision.
#[derive(Clone, Debug, PartialEq)]
pub enum BiVerdict {
    Irreducible,
    /// Nonconstant factors whose product is the input.
    Reducible(BiPoly, BiPoly),
    Inconclusive,
}

fn check_input(f: &BiPoly) -> Result<(), FieldError> {
    let d = f.degree();
    if d < 1 {
        return Err(FieldError::Domain("bivariate decision needs a nonconstant polynomial".into()));
    }
    if d as usize > MAX_BI_DEGREE {
        return Err(FieldError::Domain(format!("total degree {d} exceeds the bound {MAX_BI_DEGREE}")));
    }
    Ok(())
}

/// Complete factorization over F_q; `Ok(None)` if no extension up to degree
/// 8 admits a valid specialization.
pub fn bi_factor(f: &BiPoly) -> Result<Option<BiFactorization>, FieldError> {
    check_input(f)?;
    let k = &f.ctx;
    let unit = FqElement::new(k, leading_coeff(&f.c));
    let wrap = |fs: Factors| {
        let mut factors: Vec<(BiPoly, u32)> =
            fs.into_iter().map(|(c, e)| (BiPoly { ctx: k.clone(), c: normalize(k, &c).0 }, e)).collect();
        factors.sort_by(|a, b| (a.0.degree(), a.0.terms()).cmp(&(b.0.degree(), b.0.terms())).then(a.1.cmp(&b.1)));
        BiFactorization { unit: unit.clone(), factors }
    };
    if let Some(fs) = factor_over(k, &f.c) {
        return Ok(Some(wrap(fs)));
    }
    for ext_deg in 2..=8usize {
        let d = k.d() * ext_deg;
        let Ok(ext) = fq_cached(k.p(), d) else { break };
        let emb = Embedding::new(k, &ext);
        let up: Bi = f.c.iter().map(|c| c.iter().map(|&v| emb.up(v)).collect()).collect();
        if let Some(fs) = factor_over(&ext, &up) {
            return Ok(Some(wrap(descend(&emb, fs))));
        }
    }
    Ok(None)
}

/// Decides irreducibility over F_q of a bivariate polynomial of total
/// degree ≤ 12; a reducible verdict carries a verified factor pair.
pub fn bi_is_irreducible(f: &BiPoly) -> Result<BiVerdict, FieldError> {
    let Some(fact) = bi_factor(f)? else { return Ok(BiVerdict::Inconclusive) };
    if fact.factors.len() == 1 && fact.factors[0].1 == 1 {
        return Ok(BiVerdict::Irreducible);
    }
    let first = fact.factors[0].0.clone();
    let mut rest = BiPoly::from_code_terms(&f.ctx, &[(0, 0, fact.unit.code())]);
    for (i, (g, e)) in fact.factors.iter().enumerate() {
        let e = if i == 0 { e - 1 } else { *e };
        for _ in 0..e {
            rest = rest.mul(g);
        }
    }
    assert!(first.mul(&rest) == *f, "factor pair must multiply back to the input");
    Ok(BiVerdict::Reducible(first, rest))
}
