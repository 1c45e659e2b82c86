use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ElasticError;
use crate::algebra::{format_rational, parse_rational, rat, BigRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Full2d,
    Triclinic3d,
    Orthorhombic,
    Monoclinic,
    Isotropic,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Full2d => "full2d",
            SymmetryClass::Triclinic3d => "triclinic3d",
            SymmetryClass::Orthorhombic => "orthorhombic",
            SymmetryClass::Monoclinic => "monoclinic",
            SymmetryClass::Isotropic => "isotropic",
        }
    }

    pub fn parse(s: &str) -> Result<Self, ElasticError> {
        [Self::Full2d, Self::Triclinic3d, Self::Orthorhombic, Self::Monoclinic, Self::Isotropic]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ElasticError::Format(format!("unknown symmetry class {s:?}")))
    }

    /// Independent parameter names in canonical order.
    pub fn param_names(self) -> Vec<&'static str> {
        match self {
            SymmetryClass::Full2d => FULL2D.to_vec(),
            SymmetryClass::Triclinic3d => TRICLINIC.to_vec(),
            SymmetryClass::Orthorhombic => ORTHO.to_vec(),
            SymmetryClass::Monoclinic => MONO.to_vec(),
            SymmetryClass::Isotropic => vec!["cp2", "cs2"],
        }
    }

    fn dim_ok(self, dim: usize) -> bool {
        match self {
            SymmetryClass::Full2d => dim == 2,
            SymmetryClass::Isotropic => dim == 2 || dim == 3,
            _ => dim == 3,
        }
    }
}

pub const FULL2D: [&str; 6] = ["b11", "b12", "b13", "b22", "b23", "b33"];
pub const ORTHO: [&str; 9] = ["b11", "b12", "b13", "b22", "b23", "b33", "b44", "b55", "b66"];
pub const MONO: [&str; 13] =
    ["b11", "b12", "b13", "b15", "b22", "b23", "b25", "b33", "b35", "b44", "b46", "b55", "b66"];
pub const TRICLINIC: [&str; 21] = [
    "b11", "b12", "b13", "b14", "b15", "b16", "b22", "b23", "b24", "b25", "b26", "b33", "b34", "b35", "b36", "b44",
    "b45", "b46", "b55", "b56", "b66",
];

/// Voigt index (0-based) of the symmetric index pair (i, j), 0-based.
pub fn voigt_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (dim, i, j) {
        (2, 0, 0) => 0,
        (2, 1, 1) => 1,
        (2, 0, 1) => 2,
        (3, 0, 0) => 0,
        (3, 1, 1) => 1,
        (3, 2, 2) => 2,
        (3, 1, 2) => 3,
        (3, 0, 2) => 4,
        (3, 0, 1) => 5,
        _ => panic!("index pair ({i}, {j}) out of range for dimension {dim}"),
    }
}

/// Density-normalized stiffness tensor given by its Voigt parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct StiffnessTensor {
    dim: usize,
    class: SymmetryClass,
    params: BTreeMap<String, BigRational>,
}

impl StiffnessTensor {
    pub fn new(dim: usize, class: SymmetryClass, params: BTreeMap<String, BigRational>) -> Result<Self, ElasticError> {
        if !class.dim_ok(dim) {
            return Err(ElasticError::Format(format!("class {} is not available in dimension {dim}", class.name())));
        }
        let names = class.param_names();
        if let Some(k) = params.keys().find(|k| !names.contains(&k.as_str())) {
            return Err(ElasticError::Format(format!("unknown parameter {k} for class {}", class.name())));
        }
        if let Some(k) = names.iter().find(|k| !params.contains_key(**k)) {
            return Err(ElasticError::Format(format!("missing parameter {k} for class {}", class.name())));
        }
        Ok(StiffnessTensor { dim, class, params })
    }

    /// Parameters in canonical order.
    pub fn from_values(dim: usize, class: SymmetryClass, values: &[BigRational]) -> Result<Self, ElasticError> {
        let names = class.param_names();
        if names.len() != values.len() {
            return Err(ElasticError::Format(format!(
                "class {} takes {} parameters, got {}",
                class.name(),
                names.len(),
                values.len()
            )));
        }
        let params = names.iter().zip(values).map(|(k, v)| (k.to_string(), v.clone())).collect();
        Self::new(dim, class, params)
    }

    pub fn from_ints(dim: usize, class: SymmetryClass, values: &[i64]) -> Result<Self, ElasticError> {
        let v: Vec<BigRational> = values.iter().map(|&x| rat(x)).collect();
        Self::from_values(dim, class, &v)
    }

    pub fn full2d(b: [i64; 6]) -> Self {
        Self::from_ints(2, SymmetryClass::Full2d, &b).expect("six parameters")
    }

    pub fn orthorhombic(b: [i64; 9]) -> Self {
        Self::from_ints(3, SymmetryClass::Orthorhombic, &b).expect("nine parameters")
    }

    pub fn monoclinic(b: [i64; 13]) -> Self {
        Self::from_ints(3, SymmetryClass::Monoclinic, &b).expect("thirteen parameters")
    }

    pub fn isotropic(dim: usize, cp2: BigRational, cs2: BigRational) -> Result<Self, ElasticError> {
        Self::from_values(dim, SymmetryClass::Isotropic, &[cp2, cs2])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn param(&self, name: &str) -> Option<&BigRational> {
        self.params.get(name)
    }

    /// Values in canonical order.
    pub fn values(&self) -> Vec<BigRational> {
        self.class.param_names().iter().map(|k| self.params[*k].clone()).collect()
    }

    /// Full symmetric Voigt matrix (3×3 in 2D, 6×6 in 3D).
    pub fn voigt_matrix(&self) -> Vec<Vec<BigRational>> {
        let m = if self.dim == 2 { 3 } else { 6 };
        let mut v = vec![vec![BigRational::zero(); m]; m];
        if self.class == SymmetryClass::Isotropic {
            let cp = &self.params["cp2"];
            let cs = &self.params["cs2"];
            let lam = cp - cs * rat(2);
            let normal = self.dim;
            for i in 0..normal {
                for j in 0..normal {
                    v[i][j] = if i == j { cp.clone() } else { lam.clone() };
                }
            }
            for s in normal..m {
                v[s][s] = cs.clone();
            }
            return v;
        }
        for (k, x) in &self.params {
            let b = k.as_bytes();
            let r = (b[1] - b'1') as usize;
            let s = (b[2] - b'1') as usize;
            v[r][s] = x.clone();
            v[s][r] = x.clone();
        }
        v
    }

    /// All n⁴ components a_ijkl, flattened as ((i·n + j)·n + k)·n + l.
    pub fn voigt_expand(&self) -> Vec<BigRational> {
        let n = self.dim;
        let v = self.voigt_matrix();
        let mut a = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        a.push(v[voigt_index(n, i, j)][voigt_index(n, k, l)].clone());
                    }
                }
            }
        }
        a
    }

    pub fn to_json(&self) -> serde_json::Value {
        let voigt: serde_json::Map<String, serde_json::Value> =
            self.params.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(format_rational(v)))).collect();
        serde_json::json!({"dim": self.dim, "class": self.class.name(), "voigt": voigt})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, ElasticError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            dim: usize,
            class: String,
            voigt: BTreeMap<String, String>,
        }
        let doc: Doc = serde_json::from_value(v.clone()).map_err(|e| ElasticError::Format(e.to_string()))?;
        let class = SymmetryClass::parse(&doc.class)?;
        let mut params = BTreeMap::new();
        for (k, s) in doc.voigt {
            let x = parse_rational(&s).map_err(|e| ElasticError::Format(format!("{k}: {e}")))?;
            params.insert(k, x);
        }
        Self::new(doc.dim, class, params)
    }
}
