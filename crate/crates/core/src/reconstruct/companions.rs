use num_traits::Zero;

use super::groebner::{buchberger, GroebnerBasis, PolyIdeal};
use super::solve::{rational_solutions, solution_count};
use super::two_d::reconstruct_2d;
use super::{Multiplicity, ReconstructError, ReconstructionResult};
use crate::algebra::{rat, var_names, BigRational, MultiPoly};
use crate::elastic::{coefficient_formulas, forward, ElasticError, StiffnessTensor, SymmetryClass};

fn require(t: &StiffnessTensor, class: SymmetryClass) -> Result<(), ReconstructError> {
    if t.class() != class {
        return Err(
            ElasticError::Unsupported(format!("expected a {} tensor, got {}", class.name(), t.class().name())).into()
        );
    }
    Ok(())
}

fn with_values(t: &StiffnessTensor, changes: &[(&str, BigRational)]) -> StiffnessTensor {
    let mut vals = t.values();
    let names = t.class().param_names();
    for (k, v) in changes {
        let i = names.iter().position(|n| n == k).expect("known parameter");
        vals[i] = v.clone();
    }
    StiffnessTensor::from_values(t.dim(), t.class(), &vals).expect("same class and size")
}

/// −2·partner − x.
fn star(t: &StiffnessTensor, x: &str, partner: &str) -> BigRational {
    let p = t.param(partner).expect("partner parameter");
    -(rat(2) * p) - t.param(x).expect("parameter")
}

fn finish(t: &StiffnessTensor, all: Vec<StiffnessTensor>) -> Result<ReconstructionResult, ReconstructError> {
    let image = forward(t, true).poly();
    let mut distinct: Vec<StiffnessTensor> = Vec::new();
    for c in all {
        if forward(&c, true).poly() != image {
            return Err(ReconstructError::Domain("companion forward image differs from the input".into()));
        }
        if !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    let class = match distinct.len() {
        1 => Multiplicity::Unique,
        2 => Multiplicity::TwoCompanions,
        4 => Multiplicity::FourCompanions,
        _ => Multiplicity::Multiple,
    };
    let n = distinct.len();
    Ok(ReconstructionResult::new(distinct, class, Some(n), None))
}

/// The four tensors sharing the slowness polynomial of an orthorhombic
/// tensor, through b12* = −2b66 − b12, b13* = −2b55 − b13, b23* = −2b44 − b23.
/// Coinciding companions are listed once.
pub fn companions_orthorhombic(t: &StiffnessTensor) -> Result<ReconstructionResult, ReconstructError> {
    require(t, SymmetryClass::Orthorhombic)?;
    let s12 = star(t, "b12", "b66");
    let s13 = star(t, "b13", "b55");
    let s23 = star(t, "b23", "b44");
    let all = vec![
        t.clone(),
        with_values(t, &[("b13", s13.clone()), ("b23", s23.clone())]),
        with_values(t, &[("b12", s12.clone()), ("b13", s13)]),
        with_values(t, &[("b12", s12), ("b23", s23)]),
    ];
    finish(t, all)
}

/// The tensor and its companion (−b12 − 2b66, −b23 − 2b44, −b25 − 2b46).
pub fn companions_monoclinic(t: &StiffnessTensor) -> Result<ReconstructionResult, ReconstructError> {
    require(t, SymmetryClass::Monoclinic)?;
    let other = with_values(
        t,
        &[("b12", star(t, "b12", "b66")), ("b23", star(t, "b23", "b44")), ("b25", star(t, "b25", "b46"))],
    );
    finish(t, vec![t.clone(), other])
}

/// Every tensor of the class with the same slowness polynomial: Gröbner
/// reconstruction for full 2D tensors, closed forms in 3D.
pub fn companions(t: &StiffnessTensor) -> Result<ReconstructionResult, ReconstructError> {
    match t.class() {
        SymmetryClass::Full2d => reconstruct_2d(&forward(t, false).coeffs().expect("canonical basis")),
        SymmetryClass::Orthorhombic => companions_orthorhombic(t),
        SymmetryClass::Monoclinic => companions_monoclinic(t),
        c => Err(ElasticError::Unsupported(format!("no reconstruction for class {}", c.name())).into()),
    }
}

/// Relations c_i − formula_i(b) for every slot of the class basis, lex in
/// the class parameter order.
pub fn reconstruction_ideal(class: SymmetryClass, coeffs: &[BigRational]) -> Result<PolyIdeal, ReconstructError> {
    let formulas = coefficient_formulas(class)?;
    if coeffs.len() != formulas.len() {
        return Err(ReconstructError::Domain(format!(
            "expected {} coefficients, got {}",
            formulas.len(),
            coeffs.len()
        )));
    }
    let vars = var_names(&class.param_names());
    let gens: Vec<MultiPoly<BigRational>> = formulas
        .iter()
        .map(|(&i, f)| MultiPoly::constant(vars.clone(), coeffs[i - 1].clone()).sub(f))
        .filter(|g| !g.is_zero())
        .collect();
    PolyIdeal::new(vars, gens)
}

/// Every tensor of an orthorhombic or monoclinic class with the given ortho3d
/// or mono3d coefficients, from a lex Gröbner basis of the relation ideal.
pub fn reconstruct_3d(class: SymmetryClass, coeffs: &[BigRational]) -> Result<ReconstructionResult, ReconstructError> {
    if !matches!(class, SymmetryClass::Orthorhombic | SymmetryClass::Monoclinic) {
        return Err(ElasticError::Unsupported(format!("no 3D reconstruction for class {}", class.name())).into());
    }
    let gb = buchberger(&reconstruction_ideal(class, coeffs)?)?;
    if gb.is_unit() {
        return Ok(ReconstructionResult::new(Vec::new(), Multiplicity::Empty, Some(0), Some(gb)));
    }
    let Some(count) = solution_count(&gb) else {
        return Ok(ReconstructionResult::new(Vec::new(), Multiplicity::Nonfinite, None, Some(gb)));
    };
    let solutions = rational_solutions(&gb)
        .unwrap_or_default()
        .iter()
        .map(|pt| StiffnessTensor::from_values(3, class, pt))
        .collect::<Result<Vec<_>, _>>()?;
    let tag = match (count, solutions.len()) {
        (1, _) => Multiplicity::Unique,
        (_, 2) => Multiplicity::TwoCompanions,
        (_, 4) => Multiplicity::FourCompanions,
        _ => Multiplicity::Multiple,
    };
    Ok(ReconstructionResult::new(solutions, tag, Some(count), Some(gb)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub groebner: GroebnerBasis,
    pub solution_count: Option<usize>,
    /// Every closed-form companion lies on the variety of the basis.
    pub companions_on_variety: bool,
}

/// Gröbner computation of the full fiber of a 3D tensor, compared with the
/// closed-form companions.
pub fn groebner_crosscheck(t: &StiffnessTensor) -> Result<CrossCheck, ReconstructError> {
    let closed = companions(t)?;
    let coeffs = forward(t, true).coeffs().expect("canonical basis");
    let gb = buchberger(&reconstruction_ideal(t.class(), &coeffs)?)?;
    let on = closed.solutions.iter().all(|c| {
        let pt = c.values();
        gb.basis.iter().all(|g| g.eval(&pt).map(|v| v.is_zero()).unwrap_or(false))
    });
    Ok(CrossCheck { solution_count: solution_count(&gb), groebner: gb, companions_on_variety: on })
}
