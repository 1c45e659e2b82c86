use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::groebner::{buchberger, PolyIdeal};
use super::solve::{rational_solutions, solution_count};
use super::{Multiplicity, ReconstructError, ReconstructionResult};
use crate::algebra::{format_rational, rat, var_names, BigRational, Monomial, MultiPoly};
use crate::elastic::{coefficient_formulas, forward, StiffnessTensor, SymmetryClass, FULL2D};

fn check_c(c: &[BigRational]) -> Result<(), ReconstructError> {
    if c.len() != 9 {
        return Err(ReconstructError::Domain(format!("expected 9 coefficients, got {}", c.len())));
    }
    if !c[8].is_one() {
        return Err(ReconstructError::Domain(format!(
            "constant coefficient must be 1, got {}",
            format_rational(&c[8])
        )));
    }
    Ok(())
}

/// The eight relations c_i − formula_i(b), lex b11 > b12 > b13 > b22 > b23 > b33.
pub fn build_reconstruction_ideal_2d(c: &[BigRational]) -> Result<PolyIdeal, ReconstructError> {
    check_c(c)?;
    let formulas = coefficient_formulas(SymmetryClass::Full2d)?;
    let vars = var_names(&FULL2D);
    let gens = (1..=8).map(|i| MultiPoly::constant(vars.clone(), c[i - 1].clone()).sub(&formulas[&i])).collect();
    PolyIdeal::new(vars, gens)
}

/// Solves the 2D reconstruction system and checks every rational solution
/// against the forward map.
pub fn reconstruct_2d(c: &[BigRational]) -> Result<ReconstructionResult, ReconstructError> {
    let ideal = build_reconstruction_ideal_2d(c)?;
    let gb = buchberger(&ideal)?;
    if gb.is_unit() {
        return Ok(ReconstructionResult::new(Vec::new(), Multiplicity::Empty, Some(0), Some(gb)));
    }
    let Some(count) = solution_count(&gb) else {
        return Ok(ReconstructionResult::new(Vec::new(), Multiplicity::Nonfinite, None, Some(gb)));
    };
    let points = rational_solutions(&gb).unwrap_or_default();
    let mut solutions = Vec::new();
    for pt in points {
        let t = StiffnessTensor::from_values(2, SymmetryClass::Full2d, &pt)?;
        let image = forward(&t, false).coeffs().expect("canonical basis");
        if image != c {
            return Err(ReconstructError::Domain(format!("solution {pt:?} does not reproduce the input")));
        }
        solutions.push(t);
    }
    let class = if count == 1 { Multiplicity::Unique } else { Multiplicity::Multiple };
    Ok(ReconstructionResult::new(solutions, class, Some(count), Some(gb)))
}

fn c_vars() -> Arc<[String]> {
    var_names(&["c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"])
}

/// Parses sums of terms like `-16c1^2c3` over the variables c1..c8.
fn parse_c(src: &str) -> MultiPoly<BigRational> {
    let vars = c_vars();
    let mut terms = Vec::new();
    let s: String = src.chars().filter(|ch| !ch.is_whitespace()).collect();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let mut sign = 1i64;
        if b[i] == b'+' || b[i] == b'-' {
            sign = if b[i] == b'-' { -1 } else { 1 };
            i += 1;
        }
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let coef: i64 = if i > start { s[start..i].parse().unwrap() } else { 1 };
        let mut e = [0u16; 8];
        while i < b.len() && b[i] == b'c' {
            let v = (b[i + 1] - b'1') as usize;
            i += 2;
            let mut k = 1;
            if i < b.len() && b[i] == b'^' {
                k = (b[i + 1] - b'0') as u16;
                i += 2;
            }
            e[v] += k;
        }
        terms.push((Monomial::from_exps(&e), rat(sign * coef)));
    }
    MultiPoly::from_terms(vars, terms)
}

const J1_UNCORRECTED: &str =
    "-16c1^2c3 + 4c1c2^2 - 8c1c2c5 + 16c1c3c4c8 - 4c1c3c6^2 + 32c1c3c7 - 16c1c3c8^2 - 12c1c5^2 \
    + 16c1c5c6c8 - 16c1c6^2c7 - 4c2^2c4c8 + c2^2c6^2 - 12c2^2c7 + 4c2^2c8^2 + 16c2c4c6c7 \
    - 2c2c5c6^2 - 8c2c5c7 - 4c3c4^2c7 + 4c3c4c7c8 - c3c6^2c7 - 4c3c7^2 + c4^2c5^2 - c4c5^2c8 \
    + c5^2c6^2 + 4c5^2c7";

/// First generator with the six coefficients that vanish on the image only
/// after scaling by 4.
const J1: &str = "-16c1^2c3 + 4c1c2^2 - 8c1c2c5 + 16c1c3c4c8 - 4c1c3c6^2 + 32c1c3c7 - 16c1c3c8^2 - 12c1c5^2 \
    + 16c1c5c6c8 - 16c1c6^2c7 - 4c2^2c4c8 + c2^2c6^2 - 12c2^2c7 + 4c2^2c8^2 + 16c2c4c6c7 \
    - 2c2c5c6^2 - 8c2c5c7 - 16c3c4^2c7 + 16c3c4c7c8 - 4c3c6^2c7 - 16c3c7^2 + 4c4^2c5^2 - 4c4c5^2c8 \
    + c5^2c6^2 + 4c5^2c7";

const J2: &str = "-4c1^2 + 4c1c4c8 - c1c6^2 + 8c1c7 - 4c1c8^2 - c2^2 - 2c2c5 + 2c2c6c8 - c3c6^2 - 4c4^2c7 \
    + 2c4c5c6 + 4c4c7c8 - c5^2 - c6^2c7 - 4c7^2";

const PIECE1_J: [&str; 9] = [
    "c4^2 - 2c4c8 + c6^2 + c8^2",
    "-c2c6 + 2c3c4 - 2c3c8 - 4c4c7 + 3c5c6 + 4c7c8",
    "c2^2 - 6c2c5 + 4c3^2 - 16c3c7 + 9c5^2 + 16c7^2",
    "-3c1c6 + 2c2c4 - 2c2c8 + c3c6 + c6c7",
    "-c1c6 - c3c6 + 2c4c5 - 2c5c8 + 3c6c7",
    "2c1c4 - 2c1c8 + c2c6 - 2c4c7 + c5c6 + 2c7c8",
    "c1c3 - 2c1c7 - c2c5 + c3^2 - 5c3c7 + 3c5^2 + 6c7^2",
    "c1c2 - 3c1c5 + c2c3 - 3c2c7 + c3c5 + c5c7",
    "c1^2 - 2c1c7 + 2c2c5 - c3^2 + 4c3c7 - 2c5^2 - 3c7^2",
];

const PIECE2_I: [&str; 11] = [
    "c4^2 - 2c4c8 + c6^2 + c8^2",
    "-c1c6 - c3c6 + 2c4c5 - 2c5c8 + 3c6c7",
    "-c2c6 + 2c3c4 - 2c3c8 - 4c4c7 + 3c5c6 + 4c7c8",
    "-3c1c6 + 2c2c4 - 2c2c8 + c3c6 + c6c7",
    "2c1c4 - 2c1c8 + c2c6 - 2c4c7 + c5c6 + 2c7c8",
    "c1c6^2 - 16c2c5 + 4c2c6c8 + 8c3^2 - c3c6^2 - 32c3c7 + 16c5^2 + 4c5c6c8 - 7c6^2c7 + 32c7^2",
    "16c1c5 - 8c1c6c8 - 4c2c3 + c2c6^2 + 8c2c7 - 4c3c5 + 8c4c6c7 - c5c6^2 - 8c5c7",
    "c1c3 - 2c1c7 - c2c5 + c3^2 - 5c3c7 + 3c5^2 + 6c7^2",
    "c2^2 - 6c2c5 + 4c3^2 - 16c3c7 + 9c5^2 + 16c7^2",
    "c1c2 - 3c1c5 + c2c3 - 3c2c7 + c3c5 + c5c7",
    "c1^2 - 2c1c7 + 2c2c5 - c3^2 + 4c3c7 - 2c5^2 - 3c7^2",
];

const PIECE2_J: [&str; 7] = [
    "c4^2 - 2c4c8 + c6^2 + c8^2",
    "4c3 - 2c4c8 - c6^2 + 24c7 - 6c8^2",
    "2c2 - c4c6 + 2c5 - c6c8",
    "4c1 - 2c4c8 + c6^2 - 4c7 + 2c8^2",
    "8c4c7 - 2c4c8^2 - 2c5c6 + c6^2c8 - 8c7c8 + 2c8^3",
    "2c4c5 - c4c6c8 - 2c5c8 + 8c6c7 - c6c8^2",
    "4c5^2 - 4c5c6c8 + c6^2c8^2 + 64c7^2 - 32c7c8^2 + 4c8^4",
];

const PIECE3_I: [&str; 7] = [
    "c8^2 - 4c7",
    "c6c8 - 2c5",
    "c4c8 - c1 - c3 - c7",
    "2c6c7 - c5c8",
    "c6^2 + 2c1 - 2c3 + 2c7",
    "c4c6 - 2c2",
    "c4^2 - 4c1",
];

/// Generators of the closure of the 2D image, in c1..c8 (the first one
/// corrected so that it vanishes on the image).
pub fn j_generators() -> [MultiPoly<BigRational>; 2] {
    [parse_c(J1), parse_c(J2)]
}

/// The two generators before correcting the first one (see `j_generators`).
pub fn uncorrected_j_generators() -> [MultiPoly<BigRational>; 2] {
    [parse_c(J1_UNCORRECTED), parse_c(J2)]
}

/// Locally closed piece V(I_k) \ V(J_k) of the image.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub i: Vec<MultiPoly<BigRational>>,
    /// `None` stands for the unit ideal.
    pub j: Option<Vec<MultiPoly<BigRational>>>,
}

/// The three pieces whose union is the set-theoretic image; I_1 = J.
pub fn decomposition_pieces() -> [Piece; 3] {
    let parse = |xs: &[&str]| xs.iter().map(|s| parse_c(s)).collect::<Vec<_>>();
    [
        Piece { i: j_generators().to_vec(), j: Some(parse(&PIECE1_J)) },
        Piece { i: parse(&PIECE2_I), j: Some(parse(&PIECE2_J)) },
        Piece { i: parse(&PIECE3_I), j: None },
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility {
    /// Both generators of J vanish.
    pub admissible: bool,
    pub j_values: [String; 2],
    /// 1-based index of the first piece containing c.
    pub piece: Option<usize>,
}

pub fn admissibility_2d(c: &[BigRational]) -> Result<Admissibility, ReconstructError> {
    check_c(c)?;
    let pt = &c[..8];
    let eval = |f: &MultiPoly<BigRational>| f.eval(pt).expect("eight coordinates");
    let [g1, g2] = j_generators();
    let (v1, v2) = (eval(&g1), eval(&g2));
    let piece = decomposition_pieces().iter().position(|p| {
        p.i.iter().all(|f| eval(f).is_zero())
            && match &p.j {
                None => true,
                Some(js) => js.iter().any(|f| !eval(f).is_zero()),
            }
    });
    Ok(Admissibility {
        admissible: v1.is_zero() && v2.is_zero(),
        j_values: [format_rational(&v1), format_rational(&v2)],
        piece: piece.map(|k| k + 1),
    })
}
