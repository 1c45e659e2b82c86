use nalgebra::{DMatrix, DVector};

/// Real trigonometric polynomial a0 + Σ a_k cos kφ + b_k sin kφ.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    pub a0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TrigSeries {
    /// Least-squares fit of degree `degree`; `None` if the samples do not
    /// determine it.
    pub fn fit(angles: &[f64], values: &[f64], degree: usize) -> Option<Self> {
        let cols = 2 * degree + 1;
        if angles.len() < cols {
            return None;
        }
        let m = DMatrix::from_fn(angles.len(), cols, |r, c| {
            let k = c.div_ceil(2) as f64;
            match c {
                0 => 1.0,
                c if c % 2 == 1 => (k * angles[r]).cos(),
                _ => (k * angles[r]).sin(),
            }
        });
        let svd = m.svd(true, true);
        let (hi, lo) = (svd.singular_values.max(), svd.singular_values.min());
        if !(lo > 1e-10 * hi) {
            return None;
        }
        let x = svd.solve(&DVector::from_column_slice(values), 0.0).ok()?;
        Some(TrigSeries {
            a0: x[0],
            a: (0..degree).map(|k| x[2 * k + 1]).collect(),
            b: (0..degree).map(|k| x[2 * k + 2]).collect(),
        })
    }

    pub fn eval(&self, phi: f64) -> f64 {
        self.a.iter().zip(&self.b).enumerate().fold(self.a0, |acc, (k, (a, b))| {
            let (s, c) = ((k + 1) as f64 * phi).sin_cos();
            acc + a * c + b * s
        })
    }

    pub fn derivative(&self, phi: f64) -> f64 {
        self.a.iter().zip(&self.b).enumerate().fold(0.0, |acc, (k, (a, b))| {
            let m = (k + 1) as f64;
            let (s, c) = (m * phi).sin_cos();
            acc + m * (b * c - a * s)
        })
    }
}
