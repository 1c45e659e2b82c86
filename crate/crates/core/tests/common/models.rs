//! Random admissible two-layer models with integral tensors.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slowness::elastic::{forward, positivity, StiffnessTensor};
use slowness::reconstruct::{reconstruct_2d, Multiplicity};
use slowness::twolayer::{Circle, TwoLayerModel};

fn positive(rng: &mut ChaCha8Rng, diag: (i64, i64), off: i64) -> StiffnessTensor {
    loop {
        let mut d = || rng.gen_range(diag.0..=diag.1);
        let (b11, b22, b33) = (d(), d(), d());
        let mut o = || rng.gen_range(-off..=off);
        let t = StiffnessTensor::full2d([b11, o(), o(), b22, o(), b33]);
        if positivity(&t).is_positive {
            return t;
        }
    }
}

fn generic(t: &StiffnessTensor) -> bool {
    let c = forward(t, false).coeffs().expect("canonical basis");
    reconstruct_2d(&c).map(|r| r.multiplicity == Multiplicity::Unique).unwrap_or(false)
}

/// Outer tensor A, inner tensor a = A + D with D positive (so the inner qP
/// curve is nested inside), and an inner disk kept away from the boundary.
pub fn random_model(rng: &mut ChaCha8Rng) -> TwoLayerModel {
    loop {
        let outer_t = positive(rng, (8, 30), 6);
        let d = positive(rng, (4, 12), 2);
        let inner_t = StiffnessTensor::from_values(2, outer_t.class(), &{
            let (a, b) = (outer_t.values(), d.values());
            a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>()
        })
        .unwrap();
        if !generic(&outer_t) || !generic(&inner_t) {
            continue;
        }
        let radius = rng.gen_range(1.0..2.0);
        let outer = Circle { center: [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)], radius };
        let r = radius * rng.gen_range(0.25..0.45);
        let off = rng.gen_range(0.0..(0.8 * radius - r));
        let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let inner =
            Circle { center: [outer.center[0] + off * ang.cos(), outer.center[1] + off * ang.sin()], radius: r };
        if let Ok(m) = TwoLayerModel::new(outer, inner, outer_t, inner_t) {
            return m;
        }
    }
}
