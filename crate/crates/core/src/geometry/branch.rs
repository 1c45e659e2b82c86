use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::Serialize;

use super::{GeometryError, Medium, DEGENERATE_GAP};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unit eigenvectors, one per value.
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchSample {
    pub direction: Vec<f64>,
    /// 1 for the slowest branch, n for qP.
    pub branch: usize,
    pub p: Vec<f64>,
    /// Eigenvalue of the branch at the unit direction.
    pub eigenvalue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupVelocity {
    pub sample: BranchSample,
    pub velocity: Vec<f64>,
}

fn sym2(g: &[[f64; 3]; 3]) -> ([f64; 2], [[f64; 2]; 2]) {
    let (a, b, d) = (g[0][0], g[0][1], g[1][1]);
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = half.hypot(b);
    let vals = [mean - r, mean + r];
    // Eigenvector of the larger value, rotated for the smaller one.
    let theta = 0.5 * b.atan2(half);
    let (s, c) = theta.sin_cos();
    ([vals[0], vals[1]], [[-s, c], [c, s]])
}

fn cubic_refine(m: &Matrix3<f64>, mut x: f64) -> f64 {
    let tr = m.trace();
    let c2 = m[(0, 0)] * m[(1, 1)] + m[(0, 0)] * m[(2, 2)] + m[(1, 1)] * m[(2, 2)]
        - m[(0, 1)].powi(2)
        - m[(0, 2)].powi(2)
        - m[(1, 2)].powi(2);
    let det = m.determinant();
    let scale = m.abs().max().max(f64::MIN_POSITIVE);
    for _ in 0..8 {
        let f = ((x - tr) * x + c2) * x - det;
        let df = (3.0 * x - 2.0 * tr) * x + c2;
        if df.abs() < 1e-300 {
            break;
        }
        let step = f / df;
        x -= step;
        if step.abs() <= 1e-15 * scale {
            break;
        }
    }
    x
}

/// Backward-stable symmetric eigenvalues, each simple root then polished by
/// Newton steps on the characteristic cubic.
fn sym3_values(g: &[[f64; 3]; 3]) -> [f64; 3] {
    let m = Matrix3::from_fn(|i, j| g[i][j]);
    let e = m.symmetric_eigenvalues();
    let mut v = [e[0], e[1], e[2]];
    v.sort_by(f64::total_cmp);
    let scale = v[2].abs().max(v[0].abs()).max(f64::MIN_POSITIVE);
    for k in 0..3 {
        let near = (0..3).filter(|&j| j != k).map(|j| (v[j] - v[k]).abs()).fold(f64::INFINITY, f64::min);
        if near > 1e-6 * scale {
            v[k] = cubic_refine(&m, v[k]);
        }
    }
    v.sort_by(f64::total_cmp);
    v
}

/// Ascending eigenvalues of Γ(p) without eigenvectors.
pub(crate) fn eigenvalues(m: &Medium, p: &[f64]) -> [f64; 3] {
    let g = m.christoffel(p);
    if m.dim() == 2 {
        let (v, _) = sym2(&g);
        [v[0], v[1], f64::NAN]
    } else {
        sym3_values(&g)
    }
}

fn check_vector(m: &Medium, u: &[f64]) -> Result<(), GeometryError> {
    if u.len() != m.dim() {
        return Err(GeometryError::Domain(format!("expected a covector of length {}, got {}", m.dim(), u.len())));
    }
    if u.iter().any(|x| !x.is_finite()) || u.iter().all(|&x| x == 0.0) {
        return Err(GeometryError::Domain("covector must be finite and nonzero".into()));
    }
    Ok(())
}

/// Eigenvalues of Γ(u) in ascending order, with unit eigenvectors.
pub fn eigen_branches(m: &Medium, u: &[f64]) -> Result<Eigen, GeometryError> {
    check_vector(m, u)?;
    let g = m.christoffel(u);
    if m.dim() == 2 {
        let (v, w) = sym2(&g);
        return Ok(Eigen { values: v.to_vec(), vectors: w.iter().map(|r| r.to_vec()).collect() });
    }
    let values = sym3_values(&g);
    let se = Matrix3::from_fn(|i, j| g[i][j]).symmetric_eigen();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vectors = order.iter().map(|&k| se.eigenvectors.column(k).iter().copied().collect()).collect();
    Ok(Eigen { values: values.to_vec(), vectors })
}

/// Slowness points p = u/√λ_i(u) along each direction.
pub fn sample_branch(m: &Medium, branch: usize, directions: &[Vec<f64>]) -> Result<Vec<BranchSample>, GeometryError> {
    if branch == 0 || branch > m.dim() {
        return Err(GeometryError::Domain(format!("branch {branch} does not exist in dimension {}", m.dim())));
    }
    directions
        .iter()
        .map(|d| {
            check_vector(m, d)?;
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            let u: Vec<f64> = d.iter().map(|x| x / norm).collect();
            let lam = eigenvalues(m, &u)[branch - 1];
            if lam <= 0.0 {
                return Err(GeometryError::Domain("eigenvalue is not positive".into()));
            }
            let s = lam.sqrt();
            let p = u.iter().map(|x| x / s).collect();
            Ok(BranchSample { direction: u, branch, p, eigenvalue: lam })
        })
        .collect()
}

fn check_gap(m: &Medium, vals: &[f64; 3], branch: usize) -> Result<(), GeometryError> {
    let n = m.dim();
    let scale = vals[..n].iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let i = branch - 1;
    let below = if i > 0 { vals[i] - vals[i - 1] } else { f64::INFINITY };
    let above = if i + 1 < n { vals[i + 1] - vals[i] } else { f64::INFINITY };
    let gap = below.min(above) / scale;
    if gap < DEGENERATE_GAP {
        return Err(GeometryError::Degenerate(format!("relative gap {gap:.3e} at branch {branch}")));
    }
    Ok(())
}

fn check_branch(m: &Medium, branch: usize, p: &[f64]) -> Result<[f64; 3], GeometryError> {
    check_vector(m, p)?;
    if branch == 0 || branch > m.dim() {
        return Err(GeometryError::Domain(format!("branch {branch} does not exist in dimension {}", m.dim())));
    }
    let vals = eigenvalues(m, p);
    check_gap(m, &vals, branch)?;
    Ok(vals)
}

/// ∇λ of the larger 2×2 eigenvalue, without a gap check.
pub(crate) fn qp_grad_2d(m: &Medium, p: &[f64]) -> [f64; 2] {
    let g = m.christoffel(p);
    let half = 0.5 * (g[0][0] - g[1][1]);
    let r = half.hypot(g[0][1]).max(f64::MIN_POSITIVE);
    let mut out = [0.0; 2];
    for (k, o) in out.iter_mut().enumerate() {
        let d = m.christoffel_grad(p, k);
        *o = 0.5 * (d[0][0] + d[1][1]) + (half * 0.5 * (d[0][0] - d[1][1]) + g[0][1] * d[0][1]) / r;
    }
    out
}

/// ∇λ_i(p) from the closed-form 2×2 eigenvalue.
pub fn gradient_analytic_2d(m: &Medium, branch: usize, p: &[f64]) -> Result<[f64; 2], GeometryError> {
    if m.dim() != 2 {
        return Err(GeometryError::Domain("analytic gradient needs a 2D tensor".into()));
    }
    check_branch(m, branch, p)?;
    let g = m.christoffel(p);
    let half = 0.5 * (g[0][0] - g[1][1]);
    let r = half.hypot(g[0][1]);
    let sign = if branch == 2 { 1.0 } else { -1.0 };
    let mut out = [0.0; 2];
    for (k, o) in out.iter_mut().enumerate() {
        let d = m.christoffel_grad(p, k);
        let dr = (half * 0.5 * (d[0][0] - d[1][1]) + g[0][1] * d[0][1]) / r;
        *o = 0.5 * (d[0][0] + d[1][1]) + sign * dr;
    }
    Ok(out)
}

/// ∇λ_i(p) by central differences with one Richardson step.
pub fn gradient_fd(m: &Medium, branch: usize, p: &[f64]) -> Result<Vec<f64>, GeometryError> {
    check_branch(m, branch, p)?;
    let h = 1e-6 * p.iter().map(|x| x * x).sum::<f64>().sqrt();
    let central = |k: usize, h: f64| {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[k] += h;
        b[k] -= h;
        (eigenvalues(m, &a)[branch - 1] - eigenvalues(m, &b)[branch - 1]) / (2.0 * h)
    };
    Ok((0..m.dim()).map(|k| (4.0 * central(k, h / 2.0) - central(k, h)) / 3.0).collect())
}

/// v = ∇λ_i(p)/2 at a slowness sample; refuses near-degenerate eigenvalues.
pub fn group_velocity(m: &Medium, sample: &BranchSample) -> Result<GroupVelocity, GeometryError> {
    let grad = if m.dim() == 2 {
        gradient_analytic_2d(m, sample.branch, &sample.p)?.to_vec()
    } else {
        gradient_fd(m, sample.branch, &sample.p)?
    };
    Ok(GroupVelocity { sample: sample.clone(), velocity: grad.iter().map(|g| g / 2.0).collect() })
}

/// Smallest λ_n − λ_{n−1} over a direction grid, with the direction attaining it.
pub fn min_gap(m: &Medium, n_dirs: usize) -> (f64, Vec<f64>) {
    let dirs = if m.dim() == 2 { circle_directions(n_dirs) } else { fibonacci_sphere(n_dirs) };
    let n = m.dim();
    dirs.into_iter()
        .map(|u| {
            let v = eigenvalues(m, &u);
            (v[n - 1] - v[n - 2], u)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((f64::INFINITY, vec![]))
}

/// n unit vectors at equally spaced angles starting from (1, 0).
pub fn circle_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// n quasi-random unit vectors from golden-ratio angle offsets within an
/// aperture (radians) centered at `center`.
pub fn aperture_directions(center: f64, aperture: f64, n: usize) -> Vec<Vec<f64>> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    (0..n)
        .map(|k| {
            let f = (0.5 + k as f64 * g).fract();
            let t = center + aperture * (f - 0.5);
            vec![t.cos(), t.sin()]
        })
        .collect()
}

pub(crate) fn fibonacci_sphere(n: usize) -> Vec<Vec<f64>> {
    let ga = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = ga * k as f64;
            vec![r * t.cos(), r * t.sin(), z]
        })
        .collect()
}
