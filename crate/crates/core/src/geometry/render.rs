use std::fmt::Write;

use super::{BranchSample, GroupVelocity};

/// Rows `direction,branch,p_x,p_y[,p_z],v_x,v_y[,v_z]`. In 2D the direction
/// column is the polar angle in radians; in 3D it is the sample index.
/// Velocity columns are empty for samples without a velocity.
pub fn samples_csv(samples: &[BranchSample], velocities: &[Option<GroupVelocity>]) -> String {
    let dim = samples.first().map_or(2, |s| s.p.len());
    let axes = ["x", "y", "z"];
    let mut out = String::from("direction,branch");
    for a in &axes[..dim] {
        let _ = write!(out, ",p_{a}");
    }
    for a in &axes[..dim] {
        let _ = write!(out, ",v_{a}");
    }
    out.push('\n');
    for (k, s) in samples.iter().enumerate() {
        if dim == 2 {
            let _ = write!(out, "{:.12}", s.direction[1].atan2(s.direction[0]));
        } else {
            let _ = write!(out, "{k}");
        }
        let _ = write!(out, ",{}", s.branch);
        for x in &s.p {
            let _ = write!(out, ",{x:.12e}");
        }
        match velocities.get(k).and_then(|v| v.as_ref()) {
            Some(v) => v.velocity.iter().for_each(|x| {
                let _ = write!(out, ",{x:.12e}");
            }),
            None => out.push_str(&",".repeat(dim)),
        }
        out.push('\n');
    }
    out
}

const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];
const SIZE: f64 = 800.0;

/// Closed 2D curves, one per branch, drawn in an 800×800 viewport with axes.
pub fn svg_curves(title: &str, curves: &[(usize, Vec<[f64; 2]>)]) -> String {
    let extent = curves
        .iter()
        .flat_map(|(_, pts)| pts.iter().flat_map(|p| [p[0].abs(), p[1].abs()]))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE)
        * 1.1;
    let half = SIZE / 2.0;
    let map = |p: &[f64; 2]| (half + p[0] / extent * half, half - p[1] / extent * half);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#);
    let _ = writeln!(out, "<title>{}</title>", title.replace('&', "&amp;").replace('<', "&lt;"));
    let _ = writeln!(out, r#"<rect width="800" height="800" fill="white"/>"#);
    let _ = writeln!(out, r##"<line x1="0" y1="400" x2="800" y2="400" stroke="#999" stroke-width="1"/>"##);
    let _ = writeln!(out, r##"<line x1="400" y1="0" x2="400" y2="800" stroke="#999" stroke-width="1"/>"##);
    for (branch, pts) in curves {
        let color = COLORS[(branch.saturating_sub(1)) % COLORS.len()];
        let mut d = String::new();
        for (k, p) in pts.iter().enumerate() {
            let (x, y) = map(p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if k == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ =
            writeln!(out, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="2" data-branch="{branch}"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
