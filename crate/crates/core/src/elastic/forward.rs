use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use super::tensor::{voigt_index, StiffnessTensor, SymmetryClass};
use super::ElasticError;
use crate::algebra::{format_rational, parse_rational, rat, BigRational, Monomial, MultiPoly, PolyMatrix};

/// Coefficient layout of a slowness polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Canon2d,
    Ortho3d,
    Mono3d,
    Generic,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Canon2d => "canon2d",
            Basis::Ortho3d => "ortho3d",
            Basis::Mono3d => "mono3d",
            Basis::Generic => "generic",
        }
    }

    pub fn parse(s: &str) -> Result<Self, ElasticError> {
        [Basis::Canon2d, Basis::Ortho3d, Basis::Mono3d, Basis::Generic]
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| ElasticError::Format(format!("unknown basis {s:?}")))
    }

    pub fn dim(self) -> Option<usize> {
        match self {
            Basis::Canon2d => Some(2),
            Basis::Ortho3d | Basis::Mono3d => Some(3),
            Basis::Generic => None,
        }
    }

    /// Slot monomials as exponent vectors over (p0, p1, …, pn).
    pub fn slots(self) -> &'static [&'static [u16]] {
        match self {
            Basis::Canon2d => &CANON2D,
            Basis::Ortho3d => &ORTHO3D,
            Basis::Mono3d => &MONO3D,
            Basis::Generic => &[],
        }
    }

    pub fn for_class(class: SymmetryClass, dim: usize) -> Basis {
        match (class, dim) {
            (_, 2) => Basis::Canon2d,
            (SymmetryClass::Orthorhombic | SymmetryClass::Isotropic, _) => Basis::Ortho3d,
            (SymmetryClass::Monoclinic, _) => Basis::Mono3d,
            _ => Basis::Generic,
        }
    }
}

const CANON2D: [&[u16]; 9] =
    [&[0, 4, 0], &[0, 3, 1], &[0, 2, 2], &[2, 2, 0], &[0, 1, 3], &[2, 1, 1], &[0, 0, 4], &[2, 0, 2], &[4, 0, 0]];

const ORTHO3D: [&[u16]; 20] = [
    &[0, 6, 0, 0],
    &[0, 4, 2, 0],
    &[0, 4, 0, 2],
    &[2, 4, 0, 0],
    &[0, 2, 4, 0],
    &[0, 2, 2, 2],
    &[2, 2, 2, 0],
    &[0, 2, 0, 4],
    &[2, 2, 0, 2],
    &[4, 2, 0, 0],
    &[0, 0, 6, 0],
    &[0, 0, 4, 2],
    &[2, 0, 4, 0],
    &[0, 0, 2, 4],
    &[2, 0, 2, 2],
    &[4, 0, 2, 0],
    &[0, 0, 0, 6],
    &[2, 0, 0, 4],
    &[4, 0, 0, 2],
    &[6, 0, 0, 0],
];

const MONO3D: [&[u16]; 30] = [
    &[0, 6, 0, 0],
    &[0, 5, 0, 1],
    &[0, 4, 2, 0],
    &[0, 4, 0, 2],
    &[2, 4, 0, 0],
    &[0, 3, 2, 1],
    &[0, 3, 0, 3],
    &[2, 3, 0, 1],
    &[0, 2, 4, 0],
    &[0, 2, 2, 2],
    &[2, 2, 2, 0],
    &[0, 2, 0, 4],
    &[2, 2, 0, 2],
    &[4, 2, 0, 0],
    &[0, 1, 4, 1],
    &[0, 1, 2, 3],
    &[2, 1, 2, 1],
    &[0, 1, 0, 5],
    &[2, 1, 0, 3],
    &[4, 1, 0, 1],
    &[0, 0, 6, 0],
    &[0, 0, 4, 2],
    &[2, 0, 4, 0],
    &[0, 0, 2, 4],
    &[2, 0, 2, 2],
    &[4, 0, 2, 0],
    &[0, 0, 0, 6],
    &[2, 0, 0, 4],
    &[4, 0, 0, 2],
    &[6, 0, 0, 0],
];

pub fn p_names(dim: usize, homogeneous: bool) -> Arc<[String]> {
    let start = if homogeneous { 0 } else { 1 };
    (start..=dim).map(|i| format!("p{i}")).collect::<Vec<_>>().into()
}

/// Slowness polynomial with its homogenized form over (p0, …, pn).
#[derive(Clone, Debug, PartialEq)]
pub struct SlownessPoly {
    dim: usize,
    basis: Basis,
    homogeneous: bool,
    hom: MultiPoly<BigRational>,
}

impl SlownessPoly {
    /// Wraps a homogenized polynomial over (p0, …, pn).
    pub fn from_homogeneous(dim: usize, basis: Basis, hom: MultiPoly<BigRational>) -> Result<Self, ElasticError> {
        if hom.nvars() != dim + 1 {
            return Err(ElasticError::Format(format!("expected {} variables, got {}", dim + 1, hom.nvars())));
        }
        if !hom.is_homogeneous() || hom.degree() != 2 * dim as i64 {
            return Err(ElasticError::Domain(format!("slowness polynomial must be homogeneous of degree {}", 2 * dim)));
        }
        if let Some(d) = basis.dim() {
            if d != dim {
                return Err(ElasticError::Format(format!("basis {} needs dimension {d}", basis.name())));
            }
            let slots: Vec<Monomial> = basis.slots().iter().map(|e| Monomial::from_exps(e)).collect();
            if let Some((m, _)) = hom.terms().find(|(m, _)| !slots.contains(m)) {
                return Err(ElasticError::Domain(format!(
                    "monomial {:?} is not part of the {} basis",
                    m.exps(),
                    basis.name()
                )));
            }
        }
        let hom = hom.remap_vars(p_names(dim, true), &(0..=dim).collect::<Vec<_>>());
        Ok(SlownessPoly { dim, basis, homogeneous: true, hom })
    }

    /// Builds from canonical slot coefficients.
    pub fn from_coeffs(basis: Basis, coeffs: &[BigRational]) -> Result<Self, ElasticError> {
        let dim = basis.dim().ok_or_else(|| ElasticError::Format("generic basis has no slot layout".into()))?;
        let slots = basis.slots();
        if coeffs.len() != slots.len() {
            return Err(ElasticError::Format(format!(
                "basis {} has {} slots, got {}",
                basis.name(),
                slots.len(),
                coeffs.len()
            )));
        }
        let terms = slots.iter().zip(coeffs).map(|(e, c)| (Monomial::from_exps(e), c.clone()));
        Self::from_homogeneous(dim, basis, MultiPoly::from_terms(p_names(dim, true), terms))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// Whether the preferred presentation is the homogenized one.
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn with_homogeneous(mut self, h: bool) -> Self {
        self.homogeneous = h;
        self
    }

    /// Homogenized form over (p0, …, pn).
    pub fn homogenized(&self) -> &MultiPoly<BigRational> {
        &self.hom
    }

    /// Form with p0 = 1, over (p1, …, pn).
    pub fn dehomogenized(&self) -> MultiPoly<BigRational> {
        self.hom.dehomogenize(0, &rat(1))
    }

    /// The preferred presentation.
    pub fn poly(&self) -> MultiPoly<BigRational> {
        if self.homogeneous {
            self.hom.clone()
        } else {
            self.dehomogenized()
        }
    }

    /// Slot coefficients for canonical bases (zero for absent slots).
    pub fn coeffs(&self) -> Option<Vec<BigRational>> {
        if self.basis == Basis::Generic {
            return None;
        }
        Some(
            self.basis
                .slots()
                .iter()
                .map(|e| self.hom.coeff(&Monomial::from_exps(e)).cloned().unwrap_or_else(|| rat(0)))
                .collect(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = serde_json::json!({
            "dim": self.dim,
            "basis": self.basis.name(),
            "homogeneous": self.homogeneous,
        });
        match self.coeffs() {
            Some(c) => doc["coeffs"] = c.iter().map(format_rational).collect::<Vec<_>>().into(),
            None => doc["poly"] = self.poly().to_json(),
        }
        doc
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ElasticError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            dim: usize,
            basis: String,
            #[serde(default = "yes")]
            homogeneous: bool,
            coeffs: Option<Vec<String>>,
            poly: Option<serde_json::Value>,
        }
        fn yes() -> bool {
            true
        }
        let doc: Doc = serde_json::from_value(v.clone()).map_err(|e| ElasticError::Format(e.to_string()))?;
        let basis = Basis::parse(&doc.basis)?;
        let sp = match (doc.coeffs, doc.poly) {
            (Some(cs), None) => {
                let cs = cs
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| ElasticError::Format(e.to_string()))?;
                let sp = Self::from_coeffs(basis, &cs)?;
                if sp.dim != doc.dim {
                    return Err(ElasticError::Format("dimension does not match basis".into()));
                }
                sp
            }
            (None, Some(p)) => {
                let p = MultiPoly::from_json(&p).map_err(|e| ElasticError::Format(e.to_string()))?;
                let hom = if doc.homogeneous {
                    p
                } else {
                    p.homogenize("p0", 2 * doc.dim as u32).map_err(|e| ElasticError::Domain(e.to_string()))?
                };
                Self::from_homogeneous(doc.dim, basis, hom)?
            }
            _ => return Err(ElasticError::Format("exactly one of \"coeffs\" and \"poly\" is required".into())),
        };
        Ok(sp.with_homogeneous(doc.homogeneous))
    }
}

/// Γ_il = Σ a_ijkl p_j p_k with p_j the variable `p_offset + j`.
fn christoffel_of(
    dim: usize,
    voigt: &[Vec<MultiPoly<BigRational>>],
    vars: &Arc<[String]>,
    p_offset: usize,
) -> PolyMatrix<BigRational> {
    let p: Vec<MultiPoly<BigRational>> = (0..dim).map(|j| MultiPoly::var(vars.clone(), p_offset + j, rat(1))).collect();
    let mut rows = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for l in 0..dim {
            let mut acc = MultiPoly::zero(vars.clone());
            for j in 0..dim {
                for k in 0..dim {
                    let a = &voigt[voigt_index(dim, i, j)][voigt_index(dim, k, l)];
                    if !a.is_zero() {
                        acc = acc.add(&a.mul(&p[j]).mul(&p[k]));
                    }
                }
            }
            row.push(acc);
        }
        rows.push(row);
    }
    PolyMatrix::from_rows(rows).expect("square matrix")
}

fn constant_voigt(t: &StiffnessTensor, vars: &Arc<[String]>) -> Vec<Vec<MultiPoly<BigRational>>> {
    t.voigt_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(|x| MultiPoly::constant(vars.clone(), x)).collect())
        .collect()
}

/// Christoffel matrix over (p1, …, pn).
pub fn christoffel(t: &StiffnessTensor) -> PolyMatrix<BigRational> {
    let vars = p_names(t.dim(), false);
    christoffel_of(t.dim(), &constant_voigt(t, &vars), &vars, 0)
}

fn slowness_det(
    dim: usize,
    voigt: &[Vec<MultiPoly<BigRational>>],
    vars: &Arc<[String]>,
    p0: usize,
) -> MultiPoly<BigRational> {
    let g = christoffel_of(dim, voigt, vars, p0 + 1);
    let p0sq = MultiPoly::var(vars.clone(), p0, rat(1)).pow(2, &rat(1));
    g.minus_diagonal(&p0sq).det()
}

/// det(Γ(p) − p0² I), expressed in the canonical basis of the tensor's class.
pub fn forward(t: &StiffnessTensor, homogeneous: bool) -> SlownessPoly {
    let vars = p_names(t.dim(), true);
    let hom = slowness_det(t.dim(), &constant_voigt(t, &vars), &vars, 0);
    let basis = Basis::for_class(t.class(), t.dim());
    SlownessPoly::from_homogeneous(t.dim(), basis, hom)
        .expect("determinant lies in the class basis")
        .with_homogeneous(homogeneous)
}

/// Symbolic slot formulas, 1-based slot → polynomial in the class parameters.
pub fn coefficient_formulas(class: SymmetryClass) -> Result<BTreeMap<usize, MultiPoly<BigRational>>, ElasticError> {
    let (dim, basis) = match class {
        SymmetryClass::Full2d => (2, Basis::Canon2d),
        SymmetryClass::Orthorhombic => (3, Basis::Ortho3d),
        SymmetryClass::Monoclinic => (3, Basis::Mono3d),
        _ => return Err(ElasticError::Unsupported(format!("no slot formulas for class {}", class.name()))),
    };
    let names = class.param_names();
    let nb = names.len();
    let mut all: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    all.extend((0..=dim).map(|i| format!("p{i}")));
    let vars: Arc<[String]> = all.into();
    let m = if dim == 2 { 3 } else { 6 };
    let mut voigt = vec![vec![MultiPoly::zero(vars.clone()); m]; m];
    for (idx, name) in names.iter().enumerate() {
        let b = name.as_bytes();
        let r = (b[1] - b'1') as usize;
        let s = (b[2] - b'1') as usize;
        let v = MultiPoly::var(vars.clone(), idx, rat(1));
        voigt[r][s] = v.clone();
        voigt[s][r] = v;
    }
    let det = slowness_det(dim, &voigt, &vars, nb);
    let bvars: Arc<[String]> = names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into();
    let mut per_slot: BTreeMap<Vec<u16>, Vec<(Monomial, BigRational)>> = BTreeMap::new();
    for (mon, c) in det.terms() {
        let e = mon.exps();
        per_slot.entry(e[nb..].to_vec()).or_default().push((Monomial::from_exps(&e[..nb]), c.clone()));
    }
    let mut out = BTreeMap::new();
    for (i, slot) in basis.slots().iter().enumerate() {
        let terms = per_slot.remove(*slot).unwrap_or_default();
        out.insert(i + 1, MultiPoly::from_terms(bvars.clone(), terms));
    }
    debug_assert!(per_slot.is_empty(), "determinant has monomials outside the basis");
    Ok(out)
}
