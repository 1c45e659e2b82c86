//! Disk-in-disk travel-time simulator and the three-stage recovery of the
//! outer tensor, the interface and the inner tensor.
//!
//! Nestedness follows the slowness convention: the qP slowness curve of the
//! inner tensor lies inside that of the outer one, so the inner medium is
//! faster and chords through it arrive early.

mod recover;
mod simulate;
mod trig;

use serde_json::{json, Value};

use crate::elastic::{ElasticError, StiffnessTensor};
use crate::geometry::{circle_directions, min_gap, GeometryError, Medium, DEGENERATE_GAP};
use crate::reconstruct::ReconstructError;

pub use recover::{
    recover, recover_inner, recover_interface, recover_outer, v_of_d, InnerRecovery, InterfaceEstimate, OuterRecovery,
    RecoveryConfig, RecoveryReport,
};
pub use simulate::{simulate, snell_residual, Dataset, Leg, RayPath, SimConfig, TravelDatum};
pub use trig::TrigSeries;

/// Directions checked for the admissibility conditions.
pub const ADMISSIBILITY_GRID: usize = 720;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum TwoLayerError {
    #[error("{0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("not unique: {0}")]
    NonUnique(String),
    #[error("format: {0}")]
    Format(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error(transparent)]
    Elastic(#[from] ElasticError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Circle {
    pub fn point(&self, angle: f64) -> [f64; 2] {
        [self.center[0] + self.radius * angle.cos(), self.center[1] + self.radius * angle.sin()]
    }

    /// Distance from the center to the segment a–b.
    pub fn segment_distance(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let d = [b[0] - a[0], b[1] - a[1]];
        let w = [self.center[0] - a[0], self.center[1] - a[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let s = ((w[0] * d[0] + w[1] * d[1]) / len2).clamp(0.0, 1.0);
        (w[0] - s * d[0]).hypot(w[1] - s * d[1])
    }

    /// Smallest s > 0 with |o + s·v − c| = radius.
    pub fn first_hit(&self, o: [f64; 2], v: [f64; 2]) -> Option<f64> {
        let w = [o[0] - self.center[0], o[1] - self.center[1]];
        let a = v[0] * v[0] + v[1] * v[1];
        let b = w[0] * v[0] + w[1] * v[1];
        let c = w[0] * w[0] + w[1] * w[1] - self.radius * self.radius;
        let disc = b * b - a * c;
        if disc <= 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        [(-b - sq) / a, (-b + sq) / a].into_iter().find(|&s| s > 0.0)
    }

    pub fn to_json(&self) -> Value {
        json!({"center": self.center, "radius": self.radius})
    }

    pub fn from_json(v: &Value) -> Result<Self, TwoLayerError> {
        let bad = || TwoLayerError::Format("circle needs \"center\": [x, y] and \"radius\"".into());
        let c = v.get("center").and_then(Value::as_array).ok_or_else(bad)?;
        if c.len() != 2 {
            return Err(bad());
        }
        let center = [c[0].as_f64().ok_or_else(bad)?, c[1].as_f64().ok_or_else(bad)?];
        let radius = v.get("radius").and_then(Value::as_f64).ok_or_else(bad)?;
        Ok(Circle { center, radius })
    }
}

/// Outer disk Ω with tensor A, inner disk ω with tensor a.
#[derive(Clone, Debug)]
pub struct TwoLayerModel {
    pub outer: Circle,
    pub inner: Circle,
    pub outer_tensor: StiffnessTensor,
    pub inner_tensor: StiffnessTensor,
    pub(crate) outer_medium: Medium,
    pub(crate) inner_medium: Medium,
}

/// Largest eigenvalue of Γ(u) along each admissibility direction.
fn qp_eigenvalues(m: &Medium) -> Vec<f64> {
    circle_directions(ADMISSIBILITY_GRID)
        .iter()
        .map(|u| crate::geometry::eigen_branches(m, u).expect("unit direction").values[1])
        .collect()
}

impl TwoLayerModel {
    pub fn new(
        outer: Circle,
        inner: Circle,
        outer_tensor: StiffnessTensor,
        inner_tensor: StiffnessTensor,
    ) -> Result<Self, TwoLayerError> {
        for (name, t) in [("A", &outer_tensor), ("a", &inner_tensor)] {
            if t.dim() != 2 {
                return Err(TwoLayerError::Domain(format!("tensor {name} must be two-dimensional")));
            }
        }
        if !(outer.radius > 0.0 && inner.radius > 0.0) {
            return Err(TwoLayerError::Domain("radii must be positive".into()));
        }
        let offset = (inner.center[0] - outer.center[0]).hypot(inner.center[1] - outer.center[1]);
        if !(offset + inner.radius < outer.radius) {
            return Err(TwoLayerError::Domain("inner disk must lie strictly inside the outer disk".into()));
        }
        let outer_medium = Medium::new(&outer_tensor)?;
        let inner_medium = Medium::new(&inner_tensor)?;
        for (name, m) in [("A", &outer_medium), ("a", &inner_medium)] {
            let (gap, _) = min_gap(m, ADMISSIBILITY_GRID);
            let top = qp_eigenvalues(m).into_iter().fold(0.0, f64::max);
            if gap <= DEGENERATE_GAP * top {
                return Err(TwoLayerError::Domain(format!("largest Christoffel eigenvalue of {name} is not simple")));
            }
        }
        let fast = qp_eigenvalues(&inner_medium);
        let slow = qp_eigenvalues(&outer_medium);
        if fast.iter().zip(&slow).any(|(a, b)| a < b) {
            return Err(TwoLayerError::Domain("qP slowness curve of a is not inside that of A".into()));
        }
        Ok(TwoLayerModel { outer, inner, outer_tensor, inner_tensor, outer_medium, inner_medium })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "outer": self.outer.to_json(),
            "inner": self.inner.to_json(),
            "A": self.outer_tensor.to_json(),
            "a": self.inner_tensor.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, TwoLayerError> {
        let field = |k: &str| v.get(k).ok_or_else(|| TwoLayerError::Format(format!("model is missing \"{k}\"")));
        Self::new(
            Circle::from_json(field("outer")?)?,
            Circle::from_json(field("inner")?)?,
            StiffnessTensor::from_json(field("A")?)?,
            StiffnessTensor::from_json(field("a")?)?,
        )
    }
}
