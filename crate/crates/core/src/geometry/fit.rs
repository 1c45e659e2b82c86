use nalgebra::{DMatrix, DVector};

use super::{BranchSample, GeometryError};
use crate::algebra::{rat, rational_reconstruct_within, to_f64, BigRational};
use crate::elastic::{Basis, SlownessPoly};

pub const FIT_MAX_DENOMINATOR: u64 = 1_000_000;
/// Largest scaled residual of the exact polynomial at the float samples.
pub const FIT_RESIDUAL_TOL: f64 = 1e-6;
/// Singular value ratio treated as rank deficiency.
const RANK_TOL: f64 = 1e-13;

fn monomial(e: &[u16], p: &[f64]) -> f64 {
    e[1..].iter().zip(p).map(|(&k, x)| x.powi(k as i32)).product()
}

/// Exact slowness polynomial interpolating samples of a single branch.
/// The constant slot is fixed to det(−I) = (−1)ⁿ and the remaining slots
/// are solved in least squares, then snapped to rationals.
pub fn fit_patch(samples: &[BranchSample], basis: Basis) -> Result<SlownessPoly, GeometryError> {
    let dim = basis.dim().ok_or_else(|| GeometryError::Domain("generic basis has no slot layout".into()))?;
    let slots = basis.slots();
    let konst = slots.iter().position(|e| e[1..].iter().all(|&k| k == 0)).expect("basis has a constant slot");
    let unknowns: Vec<usize> = (0..slots.len()).filter(|&j| j != konst).collect();
    if samples.iter().any(|s| s.p.len() != dim) {
        return Err(GeometryError::Domain(format!("samples must have dimension {dim}")));
    }
    if let Some(s) = samples.iter().find(|s| s.branch != samples[0].branch) {
        return Err(GeometryError::Domain(format!("samples mix branches {} and {}", samples[0].branch, s.branch)));
    }
    if samples.len() < unknowns.len() {
        return Err(GeometryError::NeedsMoreSamples(format!(
            "{} samples for {} unknowns",
            samples.len(),
            unknowns.len()
        )));
    }
    let c0 = if dim % 2 == 0 { 1.0 } else { -1.0 };
    let mut a = DMatrix::from_fn(samples.len(), unknowns.len(), |r, c| monomial(slots[unknowns[c]], &samples[r].p));
    let scale: Vec<f64> = (0..unknowns.len()).map(|c| a.column(c).amax().max(f64::MIN_POSITIVE)).collect();
    for (c, s) in scale.iter().enumerate() {
        a.column_mut(c).unscale_mut(*s);
    }
    let b = DVector::from_element(samples.len(), -c0);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > RANK_TOL * smax) {
        return Err(GeometryError::NeedsMoreSamples(format!(
            "sample matrix is rank deficient (σmin/σmax = {:.3e})",
            smin / smax
        )));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| GeometryError::Precision(e.to_string()))?;
    let fitted: Vec<f64> = x.iter().zip(&scale).map(|(v, s)| v / s).collect();
    // Small arcs give condition numbers up to ~1e12, so the float solution
    // can be off in the fourth digit. Scan rounding windows from coarse to
    // fine and keep the first (simplest) rationals that fit the samples.
    let cmax = fitted.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut last = None;
    for k in 0..=13 {
        let window = cmax * 10f64.powi(-k);
        let mut coeffs = vec![rat(0); slots.len()];
        coeffs[konst] = rat(c0 as i64);
        for (&j, &v) in unknowns.iter().zip(&fitted) {
            let (r, _) = rational_reconstruct_within(v, window, FIT_MAX_DENOMINATOR)
                .map_err(|e| GeometryError::Precision(e.to_string()))?;
            coeffs[j] = r;
        }
        let worst = max_scaled_residual(slots, &coeffs, samples);
        if worst <= FIT_RESIDUAL_TOL {
            last = Some((coeffs, worst));
            break;
        }
        last = Some((coeffs, worst));
    }
    let (coeffs, worst) = last.expect("at least one window");
    if !(worst <= FIT_RESIDUAL_TOL) {
        return Err(GeometryError::Precision(format!("reconstructed polynomial leaves residual {worst:.3e}")));
    }
    let poly = SlownessPoly::from_coeffs(basis, &coeffs).map_err(|e| GeometryError::Domain(e.to_string()))?;
    Ok(poly.with_homogeneous(false))
}

fn max_scaled_residual(slots: &[&[u16]], coeffs: &[BigRational], samples: &[BranchSample]) -> f64 {
    let c: Vec<f64> = coeffs.iter().map(to_f64).collect();
    samples
        .iter()
        .map(|s| {
            let terms: Vec<f64> = slots.iter().zip(&c).map(|(e, c)| c * monomial(e, &s.p)).collect();
            let size: f64 = terms.iter().map(|t| t.abs()).sum();
            terms.iter().sum::<f64>().abs() / size.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}
