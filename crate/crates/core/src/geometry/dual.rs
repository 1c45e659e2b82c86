use std::f64::consts::PI;

use super::branch::{circle_directions, eigenvalues, fibonacci_sphere, qp_grad_2d};
use super::Medium;

/// Dense sample of the qP slowness curve (or surface) with its support
/// function f*(v) = max ⟨v, p⟩.
#[derive(Clone, Debug)]
pub struct DualNormTable {
    dim: usize,
    points: Vec<Vec<f64>>,
    medium: Medium,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl DualNormTable {
    pub fn build(m: &Medium, n_dirs: usize) -> Self {
        let n = m.dim();
        let dirs = if n == 2 { circle_directions(n_dirs) } else { fibonacci_sphere(n_dirs) };
        let points = dirs.iter().map(|u| qp_point(m, u)).collect();
        DualNormTable { dim: n, points, medium: m.clone() }
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Support function over the stored samples.
    pub fn eval(&self, v: &[f64]) -> f64 {
        self.points.iter().map(|p| dot(v, p)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Support function and its maximizing qP slowness point. In 2D the
    /// maximizing angle is refined to machine precision by a bracketed root
    /// search on d⟨v, p(θ)⟩/dθ; in 3D the best grid sample is returned.
    pub fn support_point(&self, v: &[f64]) -> (f64, Vec<f64>) {
        if v.iter().all(|&x| x == 0.0) {
            return (0.0, vec![0.0; self.dim]);
        }
        let (k, _) = self
            .points
            .iter()
            .enumerate()
            .map(|(k, p)| (k, dot(v, p)))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        if self.dim != 2 {
            return (dot(v, &self.points[k]), self.points[k].clone());
        }
        let step = 2.0 * PI / self.points.len() as f64;
        let t = maximize_angle(&self.medium, v, k as f64 * step, step);
        let p = qp_point(&self.medium, &[t.cos(), t.sin()]);
        (dot(v, &p), p)
    }
}

/// d⟨v, p(θ)⟩/dθ for p(θ) = u/√λ(u), u = (cos θ, sin θ).
fn slope(m: &Medium, v: &[f64], t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let u = [c, s];
    let perp = [-s, c];
    let lam = eigenvalues(m, &u)[1];
    let g = qp_grad_2d(m, &u);
    let gp = g[0] * perp[0] + g[1] * perp[1];
    let sq = lam.sqrt();
    (0..2).map(|i| v[i] * (perp[i] / sq - u[i] * gp / (2.0 * lam * sq))).sum()
}

fn maximize_angle(m: &Medium, v: &[f64], center: f64, step: f64) -> f64 {
    let (mut a, mut b) = (center - step, center + step);
    let (mut fa, mut fb) = (slope(m, v, a), slope(m, v, b));
    let mut widen = 0;
    while !(fa >= 0.0 && fb <= 0.0) && widen < 8 {
        a -= step;
        b += step;
        fa = slope(m, v, a);
        fb = slope(m, v, b);
        widen += 1;
    }
    // Illinois false position, falling back to bisection.
    let mut side = 0;
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + b.abs()) {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = slope(m, v, c);
        if fc == 0.0 {
            return c;
        }
        if fc > 0.0 {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        } else {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}

pub(crate) fn qp_point(m: &Medium, u: &[f64]) -> Vec<f64> {
    // λ is 2-homogeneous, so u/√λ(u) needs no normalization.
    let s = eigenvalues(m, u)[m.dim() - 1].sqrt();
    u.iter().map(|x| x / s).collect()
}

/// Whether a closed polygon, listed counterclockwise, turns left at every vertex.
pub fn is_strictly_convex(points: &[Vec<f64>]) -> bool {
    let n = points.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|k| {
        let (a, b, c) = (&points[k], &points[(k + 1) % n], &points[(k + 2) % n]);
        let (e1, e2) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
        e1[0] * e2[1] - e1[1] * e2[0] > 0.0
    })
}
