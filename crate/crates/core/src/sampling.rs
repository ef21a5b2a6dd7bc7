//! Plot data: sampled extremals, unit circles and indicatrix meshes.

use crate::batch::{map_with, Execution};
use crate::error::{Error, Result};
use crate::geodesic::{geodesic_eval, Geodesic, UnitPoint};
use crate::relative::{circle_point, Component};

/// `x -> tanh(x ln3 / 2)`, which maps `(0, ∞)` onto `(0, 1)` and `1` to `1/2`.
pub fn compactify(x: f64) -> f64 {
    (0.5 * x * 3f64.ln()).tanh()
}

fn coords(p: &UnitPoint, compact: bool) -> [f64; 3] {
    let x = p.components();
    if compact {
        x.map(compactify)
    } else {
        x
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidConfig("sample count must be at least 2"));
    }
    Ok(())
}

/// `n` equally spaced values from `a` to `b`, hitting both ends exactly.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| if k + 1 == n { b } else { a + (b - a) * (k as f64 / (n - 1) as f64) }).collect()
}

/// Rows `(s, x1, x2, x3)` along `g` for `s` in `[s0, s1]`.
pub fn sample_geodesic(g: &Geodesic, s0: f64, s1: f64, n: usize, compact: bool) -> Result<Vec<[f64; 4]>> {
    check_count(n)?;
    if !(s0.is_finite() && s1.is_finite()) {
        return Err(Error::InvalidInterval(s0, s1));
    }
    Ok(linspace(s0, s1, n)
        .into_iter()
        .map(|s| {
            let [x1, x2, x3] = coords(&geodesic_eval(g, s), compact);
            [s, x1, x2, x3]
        })
        .collect())
}

/// Points of one unit-circle component for log-spaced parameters in `[xi0, xi1]`.
pub fn sample_circle(
    component: Component,
    xi0: f64,
    xi1: f64,
    n: usize,
    compact: bool,
) -> Result<Vec<(f64, [f64; 3])>> {
    check_count(n)?;
    if !(xi0 > 0.0 && xi1 >= xi0 && xi1.is_finite()) {
        return Err(Error::InvalidInterval(xi0, xi1));
    }
    linspace(xi0.ln(), xi1.ln(), n)
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            let xi = if k == 0 {
                xi0
            } else if k + 1 == n {
                xi1
            } else {
                t.exp()
            };
            Ok((xi, coords(&circle_point(component, xi)?, compact)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshVertex {
    pub strip: usize,
    pub u1: f64,
    pub u2: f64,
    pub x: [f64; 3],
}

/// Triangle strips over an `n × n` grid of `(u1, u2) ∈ [-extent, extent]²`.
///
/// Strip `j` alternates between grid rows `j` and `j + 1`. Vertices are
/// computed in parallel and emitted in grid order.
pub fn sample_mesh(extent: f64, n: usize, compact: bool, mode: Execution) -> Result<Vec<MeshVertex>> {
    check_count(n)?;
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidInterval(-extent, extent));
    }
    let axis = linspace(-extent, extent, n);
    let rows: Vec<Vec<[f64; 3]>> = map_with(mode, &axis, |&u2| {
        axis.iter()
            .map(|&u1| UnitPoint::from_log_chart(u1, u2).map(|p| coords(&p, compact)))
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(2 * n * (n - 1));
    for j in 0..n - 1 {
        for i in 0..n {
            for jj in [j, j + 1] {
                out.push(MeshVertex { strip: j, u1: axis[i], u2: axis[jj], x: rows[jj][i] });
            }
        }
    }
    Ok(out)
}
