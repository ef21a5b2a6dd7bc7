//! Bi-projection onto the space of exponential angles.
//!
//! A first-octant vector `A` is written `A = |A| exp(χ1 e1 + χ2 e2 + χ3 e3)`
//! with `χ1 + χ2 + χ3 = 0`. The map `A -> χ` collapses rays to points and
//! turns componentwise dilations into translations, so the trace-free plane
//! of `χ` triples carries the Berwald-Moor geometry of directions.

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{Octant, Poly3};

/// Absolute trace tolerance for values of order one; scaled by the largest component.
pub const TRACE_TOL: f64 = 1e-12;

/// A trace-free triple of exponential angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BingleVec([f64; 3]);

impl BingleVec {
    pub const ZERO: BingleVec = BingleVec([0.0; 3]);

    /// Validated constructor; rejects triples off the trace-free plane.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = BingleVec([x1, x2, x3]);
        if !v.0.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = v.0.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if v.trace().abs() > TRACE_TOL * scale {
            return Err(Error::NotTraceZero(v.trace()));
        }
        Ok(v)
    }

    /// Projects an arbitrary triple onto the trace-free plane.
    pub fn from_free(x: [f64; 3]) -> Self {
        let mean = (x[0] + x[1] + x[2]) / 3.0;
        BingleVec([x[0] - mean, x[1] - mean, x[2] - mean])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    /// Euclidean length in the ambient space of triples.
    pub fn euclidean_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &BingleVec) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &BingleVec) -> [f64; 3] {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        [a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1]
    }

    /// Signed product `u1 u2 u3`; the cube of the Berwald-Moor norm up to sign.
    pub fn product(&self) -> f64 {
        self.0[0] * self.0[1] * self.0[2]
    }

    /// Sign pattern of the components, if none vanishes.
    pub fn octant(&self) -> Result<Octant> {
        if self.0.contains(&0.0) {
            return Err(Error::NullComponent(self.0));
        }
        Ok(Octant(self.0.map(|x| if x > 0.0 { 1 } else { -1 })))
    }
}

impl Index<usize> for BingleVec {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for BingleVec {
    type Output = BingleVec;

    fn add(self, rhs: BingleVec) -> BingleVec {
        BingleVec([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for BingleVec {
    type Output = BingleVec;

    fn sub(self, rhs: BingleVec) -> BingleVec {
        BingleVec([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for BingleVec {
    type Output = BingleVec;

    fn neg(self) -> BingleVec {
        BingleVec(self.0.map(|x| -x))
    }
}

impl Mul<f64> for BingleVec {
    type Output = BingleVec;

    fn mul(self, k: f64) -> BingleVec {
        BingleVec(self.0.map(|x| x * k))
    }
}

/// `(ln(x_i/x_j) + ln(x_i/x_k)) / 3`.
///
/// The ratio form makes the result bitwise invariant under scaling by a power
/// of two; the mean-log form is used only when a ratio leaves the normal range.
fn centered_logs(x: [f64; 3]) -> [f64; 3] {
    let ratio_ln = |a: f64, b: f64| {
        let r = a / b;
        if r.is_normal() {
            r.ln()
        } else {
            a.ln() - b.ln()
        }
    };
    [
        (ratio_ln(x[0], x[1]) + ratio_ln(x[0], x[2])) / 3.0,
        (ratio_ln(x[1], x[0]) + ratio_ln(x[1], x[2])) / 3.0,
        (ratio_ln(x[2], x[0]) + ratio_ln(x[2], x[1])) / 3.0,
    ]
}

/// Exponential angles of a first-octant vector.
pub fn biproject(a: &Poly3) -> Result<BingleVec> {
    a.require_first_octant()?;
    Ok(BingleVec(centered_logs(a.0)))
}

/// Berwald-Moor norm on the bi-space, `|u1 u2 u3|^(1/3)`.
pub fn bm_norm_flat(u: &BingleVec) -> f64 {
    u.product().abs().cbrt()
}

/// Bi-projection applied to `|u|`; the sign pattern is recovered with [`BingleVec::octant`].
pub fn second_biproject(u: &BingleVec) -> Result<BingleVec> {
    u.octant()?;
    Ok(BingleVec(centered_logs(u.0.map(f64::abs))))
}

/// Second bi-projection together with the octant of `u` in the ambient triple space.
pub fn second_biproject_signed(u: &BingleVec) -> Result<(BingleVec, Octant)> {
    let oct = u.octant()?;
    Ok((BingleVec(centered_logs(u.0.map(f64::abs))), oct))
}

/// `n * exp(u)`, the exponential representation of a vector with norm `n`.
pub fn reconstruct(n: f64, u: &BingleVec) -> Result<Poly3> {
    if !(n > 0.0) {
        return Err(Error::NonPositiveNorm(n));
    }
    Ok(Poly3(u.0.map(|x| n * x.exp())))
}

/// Double exponential form `n * exp(phi * exp(w))`.
///
/// `exp(w)` has all components positive, so the exponent is trace-free only
/// for `phi = 0`; see [`double_exp_reconstruct_signed`] for the form that
/// round-trips with a bi-projection.
pub fn double_exp_reconstruct(n: f64, phi: f64, w: &BingleVec) -> Result<Poly3> {
    if !(n > 0.0) {
        return Err(Error::NonPositiveNorm(n));
    }
    let inner = Poly3(w.0).exp().scale(phi);
    Ok(inner.exp().scale(n))
}

/// `n * exp(phi * (s1 e^{w1}, s2 e^{w2}, s3 e^{w3}))` with the sign pattern `s`
/// carried by the second bi-projection.
pub fn double_exp_reconstruct_signed(n: f64, phi: f64, w: &BingleVec, signs: Octant) -> Result<Poly3> {
    if !(n > 0.0) {
        return Err(Error::NonPositiveNorm(n));
    }
    let inner = (Poly3(w.0).exp() * signs.bisector()).scale(phi);
    Ok(inner.exp().scale(n))
}

/// Exponential trigonometric form `n * exp(phi * (c1, c2, c3))`.
pub fn exp_trig_reconstruct(n: f64, phi: f64, cfh: [f64; 3]) -> Result<Poly3> {
    if !(n > 0.0) {
        return Err(Error::NonPositiveNorm(n));
    }
    Ok(Poly3(cfh).scale(phi).exp().scale(n))
}

/// Translation of the bi-space induced by the dilation `X -> alpha X`.
pub fn homothety_to_translation(alpha: &Poly3) -> Result<BingleVec> {
    biproject(alpha)
}

/// Componentwise rescaling `u -> (l1 u1, l2 u2, l3 u3)` for `l` orthogonal to `u`.
pub fn apply_nonlinear(u: &BingleVec, lam: [f64; 3]) -> Result<BingleVec> {
    let out = [lam[0] * u.0[0], lam[1] * u.0[1], lam[2] * u.0[2]];
    let residual = out[0] + out[1] + out[2];
    let scale = out.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if residual.abs() > TRACE_TOL * scale {
        return Err(Error::NotOrthogonal(residual));
    }
    Ok(BingleVec(out))
}
