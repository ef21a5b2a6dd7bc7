//! Reciprocal bingles, metric coplanarity and the conformal invariants of a pair.

use std::f64::consts::PI;

use crate::bispace::{biproject, bm_norm_flat, BingleVec};
use crate::error::{Error, Result};
use crate::geodesic::unit_point;
use crate::poly::{normalize_octant, scalar3, Poly3};

/// Normalized coplanarity residual accepted as zero.
pub const COPLANAR_TOL: f64 = 1e-9;

/// Reciprocal bingle: the Berwald-Moor distance of the bi-projections.
pub fn reciprocal_bingle(a: &Poly3, b: &Poly3) -> Result<f64> {
    Ok(bm_norm_flat(&(biproject(a)? - biproject(b)?)))
}

/// Signed chart form `[ln(b1/a1) ln(b2/a2) ln(b1 b2 / a1 a2)]^(1/3)` on unit vectors.
///
/// Its absolute value is the reciprocal bingle; the sign is that of the
/// natural parameter of the connecting extremal.
pub fn bingle_chart(a: &Poly3, b: &Poly3) -> Result<f64> {
    let ua = unit_point(a)?.components();
    let ub = unit_point(b)?.components();
    let l1 = (ub[0] / ua[0]).ln();
    let l2 = (ub[1] / ua[1]).ln();
    Ok((l1 * l2 * (l1 + l2)).cbrt())
}

/// Bingle of two vectors in the same (arbitrary) octant.
pub fn reciprocal_bingle_any_octant(a: &Poly3, b: &Poly3) -> Result<f64> {
    let (abs_a, oa) = normalize_octant(a)?;
    let (abs_b, ob) = normalize_octant(b)?;
    if oa != ob {
        return Err(Error::MixedOctant);
    }
    reciprocal_bingle(&abs_a, &abs_b)
}

fn differences(a: &Poly3, b: &Poly3, c: &Poly3) -> Result<(BingleVec, BingleVec, f64)> {
    let (pa, pb, pc) = (biproject(a)?, biproject(b)?, biproject(c)?);
    let scale = [pa, pb, pc].iter().fold(1.0f64, |m, p| m.max(p.euclidean_norm()));
    Ok((pa - pb, pa - pc, scale))
}

fn is_negligible(d: &BingleVec, scale: f64) -> bool {
    d.euclidean_norm() <= 1e-14 * scale
}

/// `|(A♭ - B♭) × (A♭ - C♭)| / (|A♭ - B♭| |A♭ - C♭|)`; zero iff the bi-images are collinear.
pub fn coplanarity_residual(a: &Poly3, b: &Poly3, c: &Poly3) -> Result<f64> {
    let (d1, d2, scale) = differences(a, b, c)?;
    if is_negligible(&d1, scale) || is_negligible(&d2, scale) {
        return Err(Error::DegeneratePair);
    }
    let [x, y, z] = d1.cross(&d2);
    let cross = (x * x + y * y + z * z).sqrt();
    Ok(cross / (d1.euclidean_norm() * d2.euclidean_norm()))
}

/// `φ[A,C] - φ[A,B] - φ[B,C]` for `B` between `A` and `C` on a common revolution plane.
pub fn check_additivity(a: &Poly3, b: &Poly3, c: &Poly3) -> Result<f64> {
    let (d1, d2, scale) = differences(a, b, c)?;
    if is_negligible(&d1, scale) || is_negligible(&(d1 - d2), scale) {
        return Ok(0.0);
    }
    let residual = coplanarity_residual(a, b, c)?;
    if residual > COPLANAR_TOL {
        return Err(Error::NotCoplanar(residual));
    }
    let t = d1.dot(&d2) / d2.dot(&d2);
    if !(-COPLANAR_TOL..=1.0 + COPLANAR_TOL).contains(&t) {
        return Err(Error::NotBetween);
    }
    Ok(reciprocal_bingle(a, c)? - reciprocal_bingle(a, b)? - reciprocal_bingle(b, c)?)
}

/// Conformal invariants of an ordered pair, built from `ξi = Bi / Ai`.
///
/// With `e1, e2, e3` the elementary symmetric functions of `ξ`:
/// `i1 = e1 / e3^(1/3)`, `i2 = e2 / e3^(2/3)`, `i3 = e3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
}

impl Invariants {
    pub fn from_symmetric(e1: f64, e2: f64, e3: f64) -> Invariants {
        Invariants { i1: e1 / e3.cbrt(), i2: e2 / (e3.cbrt() * e3.cbrt()), i3: e3 }
    }

    /// Elementary symmetric functions `(e1, e2, e3)` of the ratios.
    pub fn symmetric(&self) -> (f64, f64, f64) {
        let r = self.i3.cbrt();
        (self.i1 * r, self.i2 * r * r, self.i3)
    }
}

pub fn invariants(a: &Poly3, b: &Poly3) -> Result<Invariants> {
    a.require_first_octant()?;
    b.require_first_octant()?;
    let [x1, x2, x3] = b.div(a)?.0;
    Ok(Invariants::from_symmetric(x1 + x2 + x3, x1 * x2 + x1 * x3 + x2 * x3, x1 * x2 * x3))
}

/// The permanent-based quantities `(A,A,B)/(2|A|²|B|)`, `(A,B,B)/(2|A||B|²)`
/// and the norm ratio `|A|/|B|`.
///
/// The first two coincide with `i1` and `i2` of [`invariants`].
pub fn raw_invariants(a: &Poly3, b: &Poly3) -> Result<(f64, f64, f64)> {
    a.require_first_octant()?;
    b.require_first_octant()?;
    let (na, nb) = (a.norm(), b.norm());
    Ok((0.5 * scalar3(a, a, b) / (na * na * nb), 0.5 * scalar3(a, b, b) / (na * nb * nb), na / nb))
}

/// Discriminant of the monic cubic `x³ + b x² + c x + d`.
pub fn cubic_discriminant(b: f64, c: f64, d: f64) -> f64 {
    18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c - 27.0 * d * d
}

/// Roots of `ξ³ - e1 ξ² + e2 ξ - e3`, ascending.
pub fn xi_from_invariants(inv: &Invariants) -> Result<[f64; 3]> {
    let (e1, e2, e3) = inv.symmetric();
    if !(e1.is_finite() && e2.is_finite() && e3.is_finite()) {
        return Err(Error::NonFinite);
    }
    let (b, c, d) = (-e1, e2, -e3);
    let disc = cubic_discriminant(b, c, d);
    let scale = (e1.abs() / 3.0).max((e2.abs() / 3.0).sqrt()).max(e3.abs().cbrt());
    if disc < -1e-10 * scale.powi(6) {
        return Err(Error::ComplexRoots(disc));
    }

    // Depressed cubic t³ + p t + q with x = t + e1/3.
    let shift = e1 / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let mut roots = if p >= 0.0 {
        [shift; 3]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        [0.0, 1.0, 2.0].map(|k| shift + m * (theta - 2.0 * PI * k / 3.0).cos())
    };

    for x in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*x + b) * *x + c) * *x + d;
            let df = (3.0 * *x + 2.0 * b) * *x + c;
            if df == 0.0 || f == 0.0 {
                break;
            }
            let step = f / df;
            let next = *x - step;
            let f_next = ((next + b) * next + c) * next + d;
            if f_next.abs() >= f.abs() {
                break;
            }
            *x = next;
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Reciprocal bingle recovered from the invariants alone.
pub fn bingle_from_invariants(inv: &Invariants) -> Result<f64> {
    let xi = xi_from_invariants(inv)?;
    Ok(bm_norm_flat(&biproject(&Poly3(xi))?))
}
