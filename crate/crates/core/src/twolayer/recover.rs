use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde_json::{json, Value};

use super::trig::TrigSeries;
use super::{Circle, TravelDatum, TwoLayerError};
use crate::elastic::{Basis, StiffnessTensor};
use crate::geometry::{
    eigen_branches, fit_patch, gradient_analytic_2d, BranchSample, DualNormTable, GeometryError, Medium,
};
use crate::reconstruct::{reconstruct_2d, Multiplicity};

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryConfig {
    /// Chords up to this fraction of the outer diameter count as near-tangent.
    pub chord_fraction: f64,
    /// Relative tolerance for a time to equal the straight-line time in A.
    pub direct_tol: f64,
    /// Raster size per axis for the interface estimate.
    pub grid: usize,
    pub min_directions: usize,
    pub direction_grid: usize,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        RecoveryConfig { chord_fraction: 0.25, direct_tol: 1e-9, grid: 512, min_directions: 360, direction_grid: 720 }
    }
}

#[derive(Clone, Debug)]
pub struct OuterRecovery {
    pub tensor: StiffnessTensor,
    /// Outer circle fitted to the data endpoints.
    pub boundary: Circle,
    /// (direction angle, speed v(d)) for every near-tangent direction.
    pub speeds: Vec<(f64, f64)>,
    /// Largest relative mismatch between the recovered straight-line times
    /// and the near-tangent data.
    pub time_residual: f64,
}

#[derive(Clone, Debug)]
pub struct InterfaceEstimate {
    pub grid: usize,
    pub origin: [f64; 2],
    pub cell: f64,
    /// Row-major, `true` for cells of the estimated inner region.
    pub mask: Vec<bool>,
    /// Circle with the area and centroid of the mask; `None` when empty.
    pub circle: Option<Circle>,
    pub direct: usize,
    pub early: usize,
}

impl InterfaceEstimate {
    pub fn cells(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

#[derive(Clone, Debug)]
pub struct InnerRecovery {
    pub tensor: StiffnessTensor,
    /// Interface circle refined from the refraction data.
    pub circle: Option<Circle>,
    pub samples: usize,
    /// Largest |λ_qP(p) − 1| of the recovered tensor over the inner samples.
    pub eigen_residual: f64,
}

#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub outer: OuterRecovery,
    pub interface: InterfaceEstimate,
    pub inner: InnerRecovery,
}

impl RecoveryReport {
    pub fn to_json(&self) -> Value {
        json!({
            "A": self.outer.tensor.to_json(),
            "a": self.inner.tensor.to_json(),
            "outer_circle": self.outer.boundary.to_json(),
            "interface": {
                "raster_circle": self.interface.circle.map(|c| c.to_json()),
                "refined_circle": self.inner.circle.map(|c| c.to_json()),
                "grid": self.interface.grid,
                "cell": self.interface.cell,
                "cells": self.interface.cells(),
                "direct_chords": self.interface.direct,
                "early_chords": self.interface.early,
            },
            "residuals": {
                "outer_time": self.outer.time_residual,
                "inner_eigen": self.inner.eigen_residual,
                "inner_samples": self.inner.samples,
            },
        })
    }
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// Algebraic circle fit x² + y² + Dx + Ey + F = 0 through the endpoints.
fn fit_boundary(data: &[TravelDatum]) -> Result<Circle, TwoLayerError> {
    let mut pts: Vec<[f64; 2]> = data.iter().flat_map(|d| [d.x, d.y]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return Err(TwoLayerError::InsufficientData("fewer than three boundary points".into()));
    }
    let m = DMatrix::from_fn(pts.len(), 3, |r, c| if c < 2 { pts[r][c] } else { 1.0 });
    let rhs = DVector::from_iterator(pts.len(), pts.iter().map(|p| -(p[0] * p[0] + p[1] * p[1])));
    let x = m.svd(true, true).solve(&rhs, 0.0).map_err(|e| TwoLayerError::Domain(e.to_string()))?;
    let center = [-x[0] / 2.0, -x[1] / 2.0];
    let radius = (center[0] * center[0] + center[1] * center[1] - x[2]).sqrt();
    Ok(Circle { center, radius })
}

struct Direction {
    angle: f64,
    speed: f64,
    chords: Vec<usize>,
}

/// Near-tangent chords grouped by direction, with their shared speed.
fn near_tangent(
    data: &[TravelDatum],
    boundary: &Circle,
    cfg: &RecoveryConfig,
) -> Result<Vec<Direction>, TwoLayerError> {
    let limit = cfg.chord_fraction * 2.0 * boundary.radius;
    let mut chords: Vec<(f64, usize)> = data
        .iter()
        .enumerate()
        .filter(|(_, d)| d.t > 0.0 && norm(d.displacement()) <= limit)
        .map(|(i, d)| {
            let v = d.displacement();
            (v[1].atan2(v[0]), i)
        })
        .collect();
    chords.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<Vec<(f64, usize)>> = Vec::new();
    for c in chords {
        match groups.last_mut() {
            Some(g) if c.0 - g[g.len() - 1].0 <= 1e-8 => g.push(c),
            _ => groups.push(vec![c]),
        }
    }
    if groups.len() > 1 && groups[0][0].0 + 2.0 * PI - groups[groups.len() - 1][0].0 <= 1e-8 {
        let first = groups.remove(0);
        groups.last_mut().expect("nonempty").extend(first);
    }
    groups
        .into_iter()
        .map(|g| {
            let speeds: Vec<f64> = g.iter().map(|&(_, i)| norm(data[i].displacement()) / data[i].t).collect();
            let lo = speeds.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = speeds.iter().copied().fold(0.0, f64::max);
            let mean = speeds.iter().sum::<f64>() / speeds.len() as f64;
            if hi - lo > 1e-6 * mean {
                return Err(TwoLayerError::Domain(format!(
                    "near-tangent speeds disagree by {:.3e} at angle {:.6}",
                    (hi - lo) / mean,
                    g[0].0
                )));
            }
            Ok(Direction { angle: g[0].0, speed: mean, chords: g.iter().map(|&(_, i)| i).collect() })
        })
        .collect()
}

/// Speed v(d) = chord length / time shared by the near-tangent chords in
/// direction `angle` (radians).
pub fn v_of_d(data: &[TravelDatum], angle: f64, cfg: &RecoveryConfig) -> Result<f64, TwoLayerError> {
    let boundary = fit_boundary(data)?;
    let dirs = near_tangent(data, &boundary, cfg)?;
    let wrap = |x: f64| (x + PI).rem_euclid(2.0 * PI) - PI;
    dirs.iter()
        .find(|d| wrap(d.angle - angle).abs() <= 1e-8)
        .map(|d| d.speed)
        .ok_or_else(|| TwoLayerError::InsufficientData(format!("no near-tangent chord in direction {angle:.6}")))
}

fn samples_from_points(points: &[[f64; 2]]) -> Vec<BranchSample> {
    points
        .iter()
        .map(|p| {
            let r = norm(*p);
            BranchSample { direction: vec![p[0] / r, p[1] / r], branch: 2, p: p.to_vec(), eigenvalue: 1.0 / (r * r) }
        })
        .collect()
}

/// Exact tensor from qP slowness points, which must determine it uniquely.
fn tensor_from_points(points: &[[f64; 2]]) -> Result<StiffnessTensor, TwoLayerError> {
    let poly = match fit_patch(&samples_from_points(points), Basis::Canon2d) {
        Err(GeometryError::NeedsMoreSamples(m)) => {
            return Err(TwoLayerError::NonUnique(format!("qP curve does not pin the slowness polynomial: {m}")))
        }
        r => r?,
    };
    let result = reconstruct_2d(&poly.coeffs().expect("canonical basis"))?;
    if result.multiplicity != Multiplicity::Unique {
        return Err(TwoLayerError::NonUnique(format!("reconstruction is {:?}", result.multiplicity)));
    }
    Ok(result.solutions.into_iter().next().expect("unique solution"))
}

/// Outer tensor from near-tangent chords: the support function h(φ) = 1/v
/// of the qP slowness curve is interpolated by a trigonometric series and
/// the curve recovered as p(φ) = h e + h' e⊥.
pub fn recover_outer(data: &[TravelDatum], cfg: &RecoveryConfig) -> Result<OuterRecovery, TwoLayerError> {
    let boundary = fit_boundary(data)?;
    let dirs = near_tangent(data, &boundary, cfg)?;
    if dirs.len() < cfg.min_directions {
        return Err(TwoLayerError::InsufficientData(format!(
            "{} near-tangent directions, need {}",
            dirs.len(),
            cfg.min_directions
        )));
    }
    let angles: Vec<f64> = dirs.iter().map(|d| d.angle).collect();
    let h: Vec<f64> = dirs.iter().map(|d| 1.0 / d.speed).collect();
    let degree = ((dirs.len() - 1) / 2).saturating_sub(2).min(200);
    let series = TrigSeries::fit(&angles, &h, degree)
        .ok_or_else(|| TwoLayerError::InsufficientData("directions do not determine the support function".into()))?;
    let points: Vec<[f64; 2]> = angles
        .iter()
        .zip(&h)
        .map(|(&phi, &hv)| {
            let (s, c) = phi.sin_cos();
            let dh = series.derivative(phi);
            [hv * c - dh * s, hv * s + dh * c]
        })
        .collect();
    let tensor = tensor_from_points(&points)?;
    let table = DualNormTable::build(&Medium::new(&tensor)?, cfg.direction_grid);
    let time_residual = dirs
        .iter()
        .flat_map(|d| d.chords.iter())
        .map(|&i| (table.support_point(&data[i].displacement()).0 / data[i].t - 1.0).abs())
        .fold(0.0, f64::max);
    if time_residual > 1e-9 {
        return Err(
            GeometryError::Precision(format!("recovered tensor misses chord times by {time_residual:.3e}")).into()
        );
    }
    let speeds = dirs.iter().map(|d| (d.angle, d.speed)).collect();
    Ok(OuterRecovery { tensor, boundary, speeds, time_residual })
}

fn is_direct(table: &DualNormTable, d: &TravelDatum, tol: f64) -> bool {
    (d.t / table.support_point(&d.displacement()).0 - 1.0).abs() <= tol
}

/// Cells of the outer disk crossed by no chord whose time equals the
/// straight-line time in A; the largest connected region is the estimate.
pub fn recover_interface(
    data: &[TravelDatum],
    outer: &OuterRecovery,
    cfg: &RecoveryConfig,
) -> Result<InterfaceEstimate, TwoLayerError> {
    let table = DualNormTable::build(&Medium::new(&outer.tensor)?, cfg.direction_grid);
    let b = outer.boundary;
    let g = cfg.grid;
    let cell = 2.0 * b.radius / g as f64;
    let origin = [b.center[0] - b.radius, b.center[1] - b.radius];
    let mut covered = vec![false; g * g];
    // Cells hugging the outer circle lie between neighboring chords of a
    // finite boundary grid; they cannot belong to the inner region.
    for r in 0..g {
        for c in 0..g {
            let x = [origin[0] + (c as f64 + 0.5) * cell, origin[1] + (r as f64 + 0.5) * cell];
            if norm(sub(x, b.center)) > b.radius - 2.0 * cell {
                covered[r * g + c] = true;
            }
        }
    }
    let (mut direct, mut early) = (0, 0);
    for d in data {
        // Each unordered pair appears twice; rasterize one orientation.
        if (d.x[0], d.x[1]) > (d.y[0], d.y[1]) {
            continue;
        }
        if !is_direct(&table, d, cfg.direct_tol) {
            early += 1;
            continue;
        }
        direct += 1;
        let v = d.displacement();
        let steps = (4.0 * norm(v) / cell).ceil() as usize + 1;
        for k in 0..=steps {
            let s = k as f64 / steps as f64;
            let c = ((d.x[0] + s * v[0] - origin[0]) / cell).floor();
            let r = ((d.x[1] + s * v[1] - origin[1]) / cell).floor();
            if c >= 0.0 && r >= 0.0 && (c as usize) < g && (r as usize) < g {
                covered[r as usize * g + c as usize] = true;
            }
        }
    }
    let mut mask = vec![false; g * g];
    let mut seen = vec![false; g * g];
    let mut best: Vec<usize> = Vec::new();
    for start in 0..g * g {
        if covered[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            k += 1;
            let (r, c) = (i / g, i % g);
            let nb = [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)];
            for (rr, cc) in nb {
                if rr < g && cc < g && !covered[rr * g + cc] && !seen[rr * g + cc] {
                    seen[rr * g + cc] = true;
                    comp.push(rr * g + cc);
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    for &i in &best {
        mask[i] = true;
    }
    let circle = (!best.is_empty()).then(|| {
        let n = best.len() as f64;
        let (sx, sy) =
            best.iter().fold((0.0, 0.0), |(sx, sy), &i| (sx + (i % g) as f64 + 0.5, sy + (i / g) as f64 + 0.5));
        Circle { center: [origin[0] + sx / n * cell, origin[1] + sy / n * cell], radius: (n / PI).sqrt() * cell }
    });
    Ok(InterfaceEstimate { grid: g, origin, cell, mask, circle, direct, early })
}

/// One refracted datum reduced to its legs in A.
#[derive(Clone, Copy)]
struct Crossing {
    t: f64,
    z: [f64; 2],
    w: [f64; 2],
    p: [f64; 2],
    q: [f64; 2],
    vp: [f64; 2],
    vq: [f64; 2],
}

impl Crossing {
    /// Entry and exit points on `c`, the inner slowness from tangential
    /// continuity at both, and the travel-time mismatch
    /// t − ⟨p, x − z⟩ − ⟨q, w − y⟩ − ⟨p_a, y − x⟩.
    fn residual(&self, c: &Circle) -> Option<([f64; 2], f64)> {
        let s1 = c.first_hit(self.z, self.vp)?;
        let s2 = c.first_hit(self.w, [-self.vq[0], -self.vq[1]])?;
        let x = [self.z[0] + s1 * self.vp[0], self.z[1] + s1 * self.vp[1]];
        let y = [self.w[0] - s2 * self.vq[0], self.w[1] - s2 * self.vq[1]];
        let n1 = sub(x, c.center);
        let n2 = sub(y, c.center);
        // p + α n1 = q + β n2
        let det = -n1[0] * n2[1] + n1[1] * n2[0];
        if det.abs() < 0.1 * c.radius * c.radius {
            return None;
        }
        let rhs = sub(self.q, self.p);
        let alpha = (-rhs[0] * n2[1] + rhs[1] * n2[0]) / det;
        let pa = [self.p[0] + alpha * n1[0], self.p[1] + alpha * n1[1]];
        let r = self.t - dot(self.p, sub(x, self.z)) - dot(self.q, sub(self.w, y)) - dot(pa, sub(y, x));
        Some((pa, r))
    }

    /// Both legs cut well into `c` and the normals are far from parallel, so
    /// small moves of the circle keep the residual defined.
    fn well_inside(&self, c: &Circle) -> bool {
        let offset = |o: [f64; 2], v: [f64; 2]| {
            let d = sub(c.center, o);
            (d[0] * v[1] - d[1] * v[0]).abs() / v[0].hypot(v[1])
        };
        let (Some(s1), Some(s2)) = (c.first_hit(self.z, self.vp), c.first_hit(self.w, [-self.vq[0], -self.vq[1]]))
        else {
            return false;
        };
        let n1 = sub([self.z[0] + s1 * self.vp[0], self.z[1] + s1 * self.vp[1]], c.center);
        let n2 = sub([self.w[0] - s2 * self.vq[0], self.w[1] - s2 * self.vq[1]], c.center);
        (n1[0] * n2[1] - n1[1] * n2[0]).abs() >= 0.3 * c.radius * c.radius
            && offset(self.z, self.vp) <= 0.8 * c.radius
            && offset(self.w, self.vq) <= 0.8 * c.radius
            && self.residual(&Circle { radius: 0.98 * c.radius, ..*c }).is_some()
            && self.residual(&Circle { radius: 1.02 * c.radius, ..*c }).is_some()
    }
}

fn residuals(data: &[Crossing], c: &Circle) -> Option<Vec<f64>> {
    data.iter().map(|d| d.residual(c).map(|r| r.1)).collect()
}

/// Levenberg–Marquardt on (center, radius) driving the crossing mismatches to zero.
fn refine_circle(data: &[Crossing], start: Circle) -> Circle {
    let pack = |c: &Circle| Vector3::new(c.center[0], c.center[1], c.radius);
    let unpack = |v: &Vector3<f64>| Circle { center: [v[0], v[1]], radius: v[2] };
    let mut x = pack(&start);
    let Some(mut r) = residuals(data, &start) else { return start };
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut mu = 1e-3;
    for _ in 0..100 {
        let h = 1e-7 * x[2];
        let mut jac = DMatrix::zeros(r.len(), 3);
        for k in 0..3 {
            let mut xk = x;
            xk[k] += h;
            let Some(rk) = residuals(data, &unpack(&xk)) else { return unpack(&x) };
            for i in 0..r.len() {
                jac[(i, k)] = (rk[i] - r[i]) / h;
            }
        }
        let jt = jac.transpose();
        let jtj: Matrix3<f64> = (&jt * &jac).fixed_view::<3, 3>(0, 0).into();
        let g: Vector3<f64> = (&jt * DVector::from_column_slice(&r)).fixed_view::<3, 1>(0, 0).into();
        let mut improved = false;
        for _ in 0..20 {
            let a = jtj + Matrix3::from_diagonal(&jtj.diagonal()) * mu;
            let Some(step) = a.lu().solve(&(-g)) else { break };
            let xn = x + step;
            if let Some(rn) = residuals(data, &unpack(&xn)) {
                let cn: f64 = rn.iter().map(|v| v * v).sum();
                if cn < cost {
                    let small = step.norm() <= 1e-15 * x[2];
                    x = xn;
                    r = rn;
                    cost = cn;
                    mu = (mu / 10.0).max(1e-12);
                    improved = !small;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    unpack(&x)
}

/// Inner tensor from refracted data. The legs in A are fixed by the endpoint
/// momenta; the interface is refined until the times balance, and the inner
/// slowness of each crossing follows from tangential continuity at entry
/// and exit.
pub fn recover_inner(
    data: &[TravelDatum],
    outer: &OuterRecovery,
    interface: &InterfaceEstimate,
    cfg: &RecoveryConfig,
) -> Result<InnerRecovery, TwoLayerError> {
    let Some(start) = interface.circle else {
        // No early arrivals: the data cannot tell a from A.
        return Ok(InnerRecovery { tensor: outer.tensor.clone(), circle: None, samples: 0, eigen_residual: 0.0 });
    };
    let medium = Medium::new(&outer.tensor)?;
    let table = DualNormTable::build(&medium, cfg.direction_grid);
    let leg_direction = |p: [f64; 2]| -> Option<[f64; 2]> {
        let lam = eigen_branches(&medium, &p).ok()?.values[1];
        let v = gradient_analytic_2d(&medium, 2, &p).ok()?;
        // Momentum filter: p is a qP covector of A and the qP momentum of its own group direction.
        let back = table.support_point(&v).1;
        ((lam - 1.0).abs() <= 1e-6 && (back[0] - p[0]).hypot(back[1] - p[1]) <= 1e-6).then_some(v)
    };
    let crossings: Vec<Crossing> = data
        .iter()
        .filter(|d| !is_direct(&table, d, cfg.direct_tol))
        .filter_map(|d| {
            let (p, q) = (d.p?, d.q?);
            let c = Crossing { t: d.t, z: d.x, w: d.y, p, q, vp: leg_direction(p)?, vq: leg_direction(q)? };
            c.residual(&start).is_some().then_some(c)
        })
        .collect();
    if crossings.len() < 16 {
        return Err(TwoLayerError::InsufficientData(format!("{} usable refracted data", crossings.len())));
    }
    let robust: Vec<Crossing> = crossings.iter().filter(|c| c.well_inside(&start)).copied().collect();
    let stride = (robust.len() / 600).max(1);
    let subset: Vec<Crossing> = robust.iter().step_by(stride).copied().collect();
    let circle = refine_circle(&subset, start);
    let points: Vec<[f64; 2]> = crossings.iter().filter_map(|c| c.residual(&circle).map(|r| r.0)).collect();
    let tensor = tensor_from_points(&points)?;
    let inner = Medium::new(&tensor)?;
    let eigen_residual = points
        .iter()
        .map(|p| (eigen_branches(&inner, p).map(|e| e.values[1]).unwrap_or(f64::INFINITY) - 1.0).abs())
        .fold(0.0, f64::max);
    if eigen_residual > 1e-6 {
        return Err(
            GeometryError::Precision(format!("inner samples leave eigenvalue residual {eigen_residual:.3e}")).into()
        );
    }
    Ok(InnerRecovery { tensor, circle: Some(circle), samples: points.len(), eigen_residual })
}

/// The three recovery stages in order.
pub fn recover(data: &[TravelDatum], cfg: &RecoveryConfig) -> Result<RecoveryReport, TwoLayerError> {
    let outer = recover_outer(data, cfg)?;
    let interface = recover_interface(data, &outer, cfg)?;
    let inner = recover_inner(data, &outer, &interface, cfg)?;
    Ok(RecoveryReport { outer, interface, inner })
}
