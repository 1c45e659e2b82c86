use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Circle, TwoLayerError, TwoLayerModel};
use crate::geometry::DualNormTable;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TravelDatum {
    pub t: f64,
    pub x: [f64; 2],
    pub y: [f64; 2],
    /// Slowness covector at x along the direction of travel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<[f64; 2]>,
    /// Slowness covector at y along the direction of travel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<[f64; 2]>,
}

impl TravelDatum {
    pub fn displacement(&self) -> [f64; 2] {
        [self.y[0] - self.x[0], self.y[1] - self.x[1]]
    }

    pub fn without_momenta(&self) -> TravelDatum {
        TravelDatum { p: None, q: None, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Leg {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub branch: usize,
    pub slowness: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayPath {
    pub legs: Vec<Leg>,
    pub time: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Equally spaced source/receiver points on the outer circle.
    pub boundary_points: usize,
    /// Direction grid of the support-function tables.
    pub direction_grid: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { boundary_points: 180, direction_grid: 720 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    /// Entries with endpoint momenta; dropping the momenta gives the
    /// travel-time-only dataset.
    pub entries: Vec<TravelDatum>,
    /// Refracted rays, one per unordered boundary pair.
    pub rays: Vec<RayPath>,
    /// Boundary pairs whose refracted ray failed the tangency or Snell checks.
    pub dropped: usize,
}

impl Dataset {
    pub fn traveltimes(&self) -> Vec<TravelDatum> {
        self.entries.iter().map(TravelDatum::without_momenta).collect()
    }

    pub fn to_jsonl(&self) -> String {
        self.entries.iter().map(|d| serde_json::to_string(d).expect("plain data") + "\n").collect()
    }

    pub fn from_jsonl(s: &str) -> Result<Self, TwoLayerError> {
        let entries = s
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| TwoLayerError::Format(format!("line {}: {e}", i + 1))))
            .collect::<Result<Vec<TravelDatum>, _>>()?;
        Ok(Dataset { entries, rays: Vec::new(), dropped: 0 })
    }

    /// Copy with a random `fraction` of the entries removed.
    pub fn thinned(&self, fraction: f64, seed: u64) -> Dataset {
        let n = self.entries.len();
        let k = ((fraction * n as f64).round() as usize).min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gone = vec![false; n];
        for i in sample(&mut rng, n, k) {
            gone[i] = true;
        }
        let entries = self.entries.iter().zip(&gone).filter(|(_, g)| !**g).map(|(d, _)| *d).collect();
        Dataset { entries, rays: self.rays.clone(), dropped: self.dropped }
    }
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn neg(a: [f64; 2]) -> [f64; 2] {
    [-a[0], -a[1]]
}

fn support(t: &DualNormTable, d: [f64; 2]) -> (f64, [f64; 2]) {
    let (v, p) = t.support_point(&d);
    (v, [p[0], p[1]])
}

/// Largest tangential slowness mismatch over the interior vertices of a ray.
pub fn snell_residual(ray: &RayPath, interface: &Circle) -> f64 {
    ray.legs
        .windows(2)
        .map(|w| {
            let v = w[0].end;
            let n = sub(v, interface.center);
            let len = n[0].hypot(n[1]);
            let tau = [-n[1] / len, n[0] / len];
            dot(sub(w[0].slowness, w[1].slowness), tau).abs()
        })
        .fold(0.0, f64::max)
}

struct Refracted {
    time: f64,
    x1: [f64; 2],
    x2: [f64; 2],
    p1: [f64; 2],
    pa: [f64; 2],
    p3: [f64; 2],
    grad: [f64; 2],
}

struct Fermat<'a> {
    outer: &'a DualNormTable,
    inner: &'a DualNormTable,
    circle: Circle,
    z: [f64; 2],
    w: [f64; 2],
}

impl Fermat<'_> {
    fn eval(&self, phi: [f64; 2]) -> Refracted {
        let c = &self.circle;
        let (x1, x2) = (c.point(phi[0]), c.point(phi[1]));
        let (t1, p1) = support(self.outer, sub(x1, self.z));
        let (t2, pa) = support(self.inner, sub(x2, x1));
        let (t3, p3) = support(self.outer, sub(self.w, x2));
        let d1 = [-c.radius * phi[0].sin(), c.radius * phi[0].cos()];
        let d2 = [-c.radius * phi[1].sin(), c.radius * phi[1].cos()];
        let grad = [dot(sub(p1, pa), d1), dot(sub(pa, p3), d2)];
        Refracted { time: t1 + t2 + t3, x1, x2, p1, pa, p3, grad }
    }

    /// Damped Newton on the two interface angles, started from the straight
    /// chord's crossing points.
    fn solve(&self) -> Option<Refracted> {
        let c = &self.circle;
        let d = sub(self.w, self.z);
        let s1 = c.first_hit(self.z, d)?;
        let s2 = c.first_hit(self.w, neg(d))?;
        let start = |o: [f64; 2], s: f64, v: [f64; 2]| {
            let x = [o[0] + s * v[0], o[1] + s * v[1]];
            (x[1] - c.center[1]).atan2(x[0] - c.center[0])
        };
        let mut phi = [start(self.z, s1, d), start(self.w, s2, neg(d))];
        let mut cur = self.eval(phi);
        let scale = c.radius * cur.p1[0].hypot(cur.p1[1]);
        for _ in 0..100 {
            if cur.grad[0].hypot(cur.grad[1]) <= 1e-13 * scale {
                break;
            }
            let h = 1e-7;
            let mut hess = [[0.0; 2]; 2];
            for k in 0..2 {
                let mut q = phi;
                q[k] += h;
                let g = self.eval(q).grad;
                hess[0][k] = (g[0] - cur.grad[0]) / h;
                hess[1][k] = (g[1] - cur.grad[1]) / h;
            }
            let off = 0.5 * (hess[0][1] + hess[1][0]);
            let (mut a, mut b) = (hess[0][0], hess[1][1]);
            let det = a * b - off * off;
            if !(a > 0.0 && det > 0.0) {
                let lo = 0.5 * (a + b) - (0.25 * (a - b).powi(2) + off * off).sqrt();
                let shift = -lo + 1e-3 * (a.abs() + b.abs() + scale);
                a += shift;
                b += shift;
            }
            let det = a * b - off * off;
            let step = [-(b * cur.grad[0] - off * cur.grad[1]) / det, -(a * cur.grad[1] - off * cur.grad[0]) / det];
            let mut alpha = 1.0;
            let next = loop {
                let trial = [phi[0] + alpha * step[0], phi[1] + alpha * step[1]];
                let r = self.eval(trial);
                // Near the optimum time changes drown in rounding; a smaller
                // gradient then decides.
                let flat =
                    r.time <= cur.time * (1.0 + 1e-13) && r.grad[0].hypot(r.grad[1]) < cur.grad[0].hypot(cur.grad[1]);
                if r.time <= cur.time || flat || alpha < 1e-12 {
                    break (trial, r);
                }
                alpha *= 0.5;
            };
            let moved = alpha * step[0].hypot(step[1]);
            let improvement = cur.time - next.1.time;
            phi = next.0;
            cur = next.1;
            if moved < 1e-15 || (improvement < 1e-12 * cur.time && cur.grad[0].hypot(cur.grad[1]) <= 1e-11 * scale) {
                break;
            }
        }
        Some(cur)
    }
}

enum PairOutcome {
    Direct(TravelDatum),
    Refracted(TravelDatum, RayPath),
    Dropped,
}

fn simulate_pair(
    model: &TwoLayerModel,
    outer: &DualNormTable,
    inner: &DualNormTable,
    z: [f64; 2],
    w: [f64; 2],
) -> PairOutcome {
    let circle = model.inner;
    if circle.segment_distance(z, w) > circle.radius {
        let (t, p) = support(outer, sub(w, z));
        return PairOutcome::Direct(TravelDatum { t, x: z, y: w, p: Some(p), q: Some(p) });
    }
    let Some(r) = (Fermat { outer, inner, circle, z, w }).solve() else { return PairOutcome::Dropped };
    let n1 = sub(r.x1, circle.center);
    let n2 = sub(r.x2, circle.center);
    let l1 = sub(r.x1, z);
    let l3 = sub(w, r.x2);
    // Legs must cross the interface transversally, entering and leaving once.
    let enter = dot(l1, n1) / (l1[0].hypot(l1[1]) * circle.radius);
    let leave = dot(l3, n2) / (l3[0].hypot(l3[1]) * circle.radius);
    if !(enter < -1e-6 && leave > 1e-6) || r.x1 == r.x2 {
        return PairOutcome::Dropped;
    }
    let leg = |start, end, slowness| Leg { start, end, branch: 2, slowness };
    let ray = RayPath { legs: vec![leg(z, r.x1, r.p1), leg(r.x1, r.x2, r.pa), leg(r.x2, w, r.p3)], time: r.time };
    if snell_residual(&ray, &circle) > 1e-8 {
        return PairOutcome::Dropped;
    }
    PairOutcome::Refracted(TravelDatum { t: r.time, x: z, y: w, p: Some(r.p1), q: Some(r.p3) }, ray)
}

/// Direct qP chords and three-leg qP refractions between all pairs of
/// boundary points. Each unordered pair is solved once and emitted in both
/// orientations, reversed momenta negated.
pub fn simulate(model: &TwoLayerModel, cfg: &SimConfig) -> Result<Dataset, TwoLayerError> {
    if cfg.boundary_points < 3 || cfg.direction_grid < 8 {
        return Err(TwoLayerError::Domain("grids are too coarse".into()));
    }
    let outer = DualNormTable::build(&model.outer_medium, cfg.direction_grid);
    let inner = DualNormTable::build(&model.inner_medium, cfg.direction_grid);
    let n = cfg.boundary_points;
    let pts: Vec<[f64; 2]> = (0..n).map(|k| model.outer.point(2.0 * PI * k as f64 / n as f64)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let outcomes: Vec<PairOutcome> =
        pairs.par_iter().map(|&(i, j)| simulate_pair(model, &outer, &inner, pts[i], pts[j])).collect();
    let mut out = Dataset::default();
    for o in outcomes {
        let d = match o {
            PairOutcome::Direct(d) => d,
            PairOutcome::Refracted(d, ray) => {
                out.rays.push(ray);
                d
            }
            PairOutcome::Dropped => {
                out.dropped += 1;
                continue;
            }
        };
        let (p, q) = (d.p.expect("simulated momenta"), d.q.expect("simulated momenta"));
        out.entries.push(d);
        out.entries.push(TravelDatum { t: d.t, x: d.y, y: d.x, p: Some(neg(q)), q: Some(neg(p)) });
    }
    Ok(out)
}
