use num_traits::{Signed, Zero};
use serde::Serialize;

use super::tensor::{StiffnessTensor, SymmetryClass};
use super::ElasticError;
use crate::algebra::{format_rational, rat, to_f64, BigRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CayleyRegion {
    InsideTetrahedron,
    Outside,
    Boundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub is_positive: bool,
    /// First non-positive leading principal minor: (0-based index set, value).
    pub failing_minor: Option<(Vec<usize>, BigRational)>,
    /// (b12/√(b11b22), b13/√(b11b33), b23/√(b22b33)) for orthorhombic tensors
    /// with positive diagonal.
    pub cayley_point: Option<(f64, f64, f64)>,
    pub cayley_region: Option<CayleyRegion>,
}

impl PositivityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "is_positive": self.is_positive,
            "failing_minor": self.failing_minor.as_ref().map(|(idx, v)| serde_json::json!({
                "indices": idx, "value": format_rational(v)
            })),
            "cayley_point": self.cayley_point.map(|(x, y, z)| vec![x, y, z]),
            "cayley_region": self.cayley_region,
        })
    }
}

/// Leading principal minors of a square rational matrix.
pub fn leading_minors(m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = m.len();
    (1..=n)
        .map(|k| {
            let mut a: Vec<Vec<BigRational>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            let mut det = rat(1);
            for c in 0..k {
                let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else { return rat(0) };
                if p != c {
                    a.swap(p, c);
                    det = -det;
                }
                det *= a[c][c].clone();
                for r in c + 1..k {
                    let f = &a[r][c] / &a[c][c];
                    for j in c..k {
                        let t = &f * &a[c][j];
                        a[r][j] -= t;
                    }
                }
            }
            det
        })
        .collect()
}

/// Sylvester test on the Voigt matrix, plus the Cayley classification for
/// orthorhombic tensors.
pub fn positivity(t: &StiffnessTensor) -> PositivityReport {
    let minors = leading_minors(&t.voigt_matrix());
    let failing = minors.iter().position(|m| !m.is_positive()).map(|k| ((0..=k).collect(), minors[k].clone()));
    let (cayley_point, cayley_region) = match cayley(t) {
        Ok((p, r)) => (p, Some(r)),
        Err(_) => (None, None),
    };
    PositivityReport { is_positive: failing.is_none(), failing_minor: failing, cayley_point, cayley_region }
}

/// Classifies (x, y, z) against 1 + 2xyz − x² − y² − z² > 0 with |x|, |y|, |z| < 1,
/// deciding signs on the cleared forms in exact arithmetic.
pub fn cayley(t: &StiffnessTensor) -> Result<(Option<(f64, f64, f64)>, CayleyRegion), ElasticError> {
    if t.class() != SymmetryClass::Orthorhombic {
        return Err(ElasticError::Unsupported(format!(
            "Cayley classification needs an orthorhombic tensor, got {}",
            t.class().name()
        )));
    }
    let b = |k: &str| t.param(k).expect("orthorhombic parameter").clone();
    let (b11, b12, b13, b22, b23, b33) = (b("b11"), b("b12"), b("b13"), b("b22"), b("b23"), b("b33"));
    if !(b11.is_positive() && b22.is_positive() && b33.is_positive()) {
        return Ok((None, CayleyRegion::Outside));
    }
    let cubic =
        &b11 * &b22 * &b33 + rat(2) * &b12 * &b13 * &b23 - &b11 * &b23 * &b23 - &b22 * &b13 * &b13 - &b33 * &b12 * &b12;
    // |x| < 1 ⇔ b12² < b11 b22, and likewise for y, z.
    let gaps = [&b11 * &b22 - &b12 * &b12, &b11 * &b33 - &b13 * &b13, &b22 * &b33 - &b23 * &b23];
    let f = |x: &BigRational| to_f64(x);
    let point = (
        f(&b12) / (f(&b11) * f(&b22)).sqrt(),
        f(&b13) / (f(&b11) * f(&b33)).sqrt(),
        f(&b23) / (f(&b22) * f(&b33)).sqrt(),
    );
    let region = if cubic.is_zero() || gaps.iter().any(|g| g.is_zero()) {
        if cubic.is_negative() || gaps.iter().any(|g| g.is_negative()) {
            CayleyRegion::Outside
        } else {
            CayleyRegion::Boundary
        }
    } else if cubic.is_positive() && gaps.iter().all(|g| g.is_positive()) {
        CayleyRegion::InsideTetrahedron
    } else {
        CayleyRegion::Outside
    };
    Ok((Some(point), region))
}
