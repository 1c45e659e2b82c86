use super::field::Field;
use super::poly::MultiPoly;
use super::AlgebraError;

/// Square matrix of polynomials sharing one variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<C> {
    n: usize,
    entries: Vec<MultiPoly<C>>,
}

impl<C: Field> PolyMatrix<C> {
    pub fn from_rows(rows: Vec<Vec<MultiPoly<C>>>) -> Result<Self, AlgebraError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::NonSquare);
        }
        let entries: Vec<_> = rows.into_iter().flatten().collect();
        if let Some(first) = entries.first() {
            if entries.iter().any(|e| e.vars() != first.vars()) {
                return Err(AlgebraError::VariableMismatch(first.vars().to_vec(), vec![]));
            }
        }
        Ok(PolyMatrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly<C> {
        &self.entries[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// Subtracts `d` from every diagonal entry.
    pub fn minus_diagonal(&self, d: &MultiPoly<C>) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.entries[i * self.n + i] = self.entry(i, i).sub(d);
        }
        m
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.entry(perm[k / n], perm[k % n]).clone()).collect();
        PolyMatrix { n, entries }
    }

    /// Cofactor expansion along whichever row or column has the fewest terms.
    pub fn det(&self) -> MultiPoly<C> {
        let idx: Vec<usize> = (0..self.n).collect();
        det_rec(self, &idx, &idx)
    }
}

fn det_rec<C: Field>(m: &PolyMatrix<C>, rows: &[usize], cols: &[usize]) -> MultiPoly<C> {
    let k = rows.len();
    let vars = m.entries[0].vars().clone();
    if k == 0 {
        let one = m.entries.iter().flat_map(|e| e.terms().map(|(_, c)| c.one_like())).next();
        return match one {
            Some(one) => MultiPoly::constant(vars, one),
            None => MultiPoly::zero(vars),
        };
    }
    if k == 1 {
        return m.entry(rows[0], cols[0]).clone();
    }
    let weight = |i: usize, j: usize| m.entry(i, j).num_terms();
    let best_row = (0..k).min_by_key(|&a| cols.iter().map(|&c| weight(rows[a], c)).sum::<usize>()).unwrap();
    let best_col = (0..k).min_by_key(|&b| rows.iter().map(|&r| weight(r, cols[b])).sum::<usize>()).unwrap();
    let row_w: usize = cols.iter().map(|&c| weight(rows[best_row], c)).sum();
    let col_w: usize = rows.iter().map(|&r| weight(r, cols[best_col])).sum();
    let mut acc = MultiPoly::zero(vars);
    if row_w <= col_w {
        let r = rows[best_row];
        let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        for (b, &c) in cols.iter().enumerate() {
            let e = m.entry(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let t = e.mul(&det_rec(m, &sub_rows, &sub_cols));
            acc = if (best_row + b) % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
    } else {
        let c = cols[best_col];
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        for (a, &r) in rows.iter().enumerate() {
            let e = m.entry(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
            let t = e.mul(&det_rec(m, &sub_rows, &sub_cols));
            acc = if (a + best_col) % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
    }
    acc
}
