//! Extremals of the first-octant unit sphere `x1 x2 x3 = 1`.
//!
//! In the chart `(X1, X2)` the induced metric is the cube root of the cubic
//! form `v1² v2 / (x1² x2) + v2² v1 / (x1 x2²)`. In logarithmic coordinates
//! `u = ln X` it has constant coefficients, so extremals are the curves
//! `X1 = A1 e^(q1 s)`, `X2 = A2 e^(q2 s)` with `q1 q2 (q1 + q2) = 1`, and `s`
//! is their natural parameter.

use crate::error::{Error, Result};
use crate::poly::Poly3;
use crate::quad::{integrate, QuadratureCfg};

/// Relative tolerance on `x1 x2 x3 = 1`.
pub const UNIT_TOL: f64 = 1e-12;
/// Relative tolerance on `q1 q2 (q1 + q2) = 1`.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// A point of the first-octant indicatrix component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPoint([f64; 3]);

impl UnitPoint {
    pub const ORIGIN: UnitPoint = UnitPoint([1.0; 3]);

    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let p = Poly3::new(x1, x2, x3);
        p.require_first_octant()?;
        let prod = x1 * x2 * x3;
        if (prod - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(prod));
        }
        Ok(UnitPoint([x1, x2, x3]))
    }

    /// The point with chart coordinates `(x1, x2)`.
    pub fn from_chart(x1: f64, x2: f64) -> Result<Self> {
        Poly3::new(x1, x2, 1.0).require_first_octant()?;
        let x3 = 1.0 / (x1 * x2);
        if !x3.is_finite() || x3 <= 0.0 {
            return Err(Error::OutOfOctant([x1, x2, x3]));
        }
        Ok(UnitPoint([x1, x2, x3]))
    }

    /// The point with logarithmic chart coordinates `(u1, u2)`.
    pub fn from_log_chart(u1: f64, u2: f64) -> Result<Self> {
        UnitPoint::from_chart(u1.exp(), u2.exp())
    }

    /// Exponentiates a trace-free triple, which the caller guarantees.
    pub(crate) fn from_trace_free_log(u: [f64; 3]) -> Self {
        UnitPoint(u.map(f64::exp))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn to_poly(&self) -> Poly3 {
        Poly3(self.0)
    }

    pub fn chart(&self) -> (f64, f64) {
        (self.0[0], self.0[1])
    }
}

/// Projects a first-octant vector onto the indicatrix along its ray.
pub fn unit_point(a: &Poly3) -> Result<UnitPoint> {
    a.require_first_octant()?;
    let n = a.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::OutOfOctant(a.0));
    }
    let [x1, x2, x3] = a.0.map(|c| c / n);
    if !(x1 > 0.0 && x2 > 0.0 && x3 > 0.0 && (x1 * x2 * x3).is_finite()) {
        return Err(Error::OutOfOctant(a.0));
    }
    Ok(UnitPoint([x1, x2, x3]))
}

/// A naturally parametrized extremal through the chart point `(a1, a2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    a1: f64,
    a2: f64,
    q1: f64,
    q2: f64,
}

impl Geodesic {
    pub fn new(a1: f64, a2: f64, q1: f64, q2: f64) -> Result<Self> {
        UnitPoint::from_chart(a1, a2)?;
        if !(q1.is_finite() && q2.is_finite()) {
            return Err(Error::NonFinite);
        }
        let c = q1 * q2 * (q1 + q2);
        if (c - 1.0).abs() > CONSTRAINT_TOL {
            return Err(Error::ConstraintViolated(c));
        }
        Ok(Geodesic { a1, a2, q1, q2 })
    }

    /// The extremal through `base` with exponents `(q1, q2_principal(q1))`.
    pub fn principal(base: &UnitPoint, q1: f64) -> Result<Self> {
        let q2 = q2_principal(q1)?;
        Ok(Geodesic { a1: base.0[0], a2: base.0[1], q1, q2 })
    }

    pub fn base(&self) -> UnitPoint {
        UnitPoint([self.a1, self.a2, 1.0 / (self.a1 * self.a2)])
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.q1, self.q2)
    }

    /// Velocity in the chart at parameter `s`.
    pub fn velocity(&self, s: f64) -> (f64, f64) {
        let [x1, x2, _] = geodesic_eval(self, s).0;
        (self.q1 * x1, self.q2 * x2)
    }
}

/// Positive root of `q1 q2 (q1 + q2) = 1` in `q2`.
pub fn q2_principal(q1: f64) -> Result<f64> {
    if !(q1 > 0.0) || !q1.is_finite() {
        return Err(Error::NonPositive(q1));
    }
    // Rationalized form of (sqrt(q1⁴ + 4 q1) - q1²) / (2 q1), free of cancellation.
    let q1sq = q1 * q1;
    if q1 <= 1.0 {
        Ok(2.0 / ((q1sq * q1sq + 4.0 * q1).sqrt() + q1sq))
    } else {
        Ok(2.0 / (q1sq * ((1.0 + 4.0 / (q1sq * q1)).sqrt() + 1.0)))
    }
}

pub fn geodesic_eval(g: &Geodesic, s: f64) -> UnitPoint {
    let x1 = g.a1 * (g.q1 * s).exp();
    let x2 = g.a2 * (g.q2 * s).exp();
    UnitPoint([x1, x2, 1.0 / (x1 * x2)])
}

/// The extremal from `a` to `b` and the signed parameter `s*` at which it reaches `b`.
///
/// `|s*|` is the reciprocal bingle of the two points.
pub fn geodesic_between(a: &UnitPoint, b: &UnitPoint) -> Result<(Geodesic, f64)> {
    let l1 = (b.0[0] / a.0[0]).ln();
    let l2 = (b.0[1] / a.0[1]).ln();
    let l3 = l1 + l2;
    if l1 == 0.0 && l2 == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let big = l1.abs().max(l2.abs()).max(l3.abs());
    let small = l1.abs().min(l2.abs()).min(l3.abs());
    if small <= 1e-12 * big {
        return Err(Error::NullSeparated);
    }
    let s_star = (l1 * l2 * l3).cbrt();
    let g = Geodesic { a1: a.0[0], a2: a.0[1], q1: l1 / s_star, q2: l2 / s_star };
    Ok((g, s_star))
}

/// Outcome of intersecting two extremals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    /// Meeting at `geodesic_eval(g, s)`; far meetings of nearly parallel
    /// extremals can lie beyond the floating-point range of the chart.
    Point {
        s: f64,
    },
    Parallel,
    Identical,
}

/// Intersects two extremals. In log coordinates both are straight lines.
pub fn intersect(g: &Geodesic, h: &Geodesic) -> Intersection {
    let d1 = (h.a1 / g.a1).ln();
    let d2 = (h.a2 / g.a2).ln();
    let det = h.q1 * g.q2 - g.q1 * h.q2;
    let qg = g.q1.hypot(g.q2);
    let qh = h.q1.hypot(h.q2);
    if det.abs() > 1e-12 * qg * qh {
        return Intersection::Point { s: (h.q1 * d2 - h.q2 * d1) / det };
    }
    // Same direction: identical iff the offset between base points is along it.
    let offset = g.q2 * d1 - g.q1 * d2;
    if offset.abs() <= 1e-12 * qg * d1.hypot(d2).max(1.0) {
        Intersection::Identical
    } else {
        Intersection::Parallel
    }
}

/// The chart in which a unit-circle component is parametrized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    X1X2,
    X1X3,
    X2X3,
}

impl Chart {
    /// Coordinate indices carrying the exponents `q1` and `q2`, then the dependent one.
    pub fn indices(self) -> [usize; 3] {
        match self {
            Chart::X1X2 => [0, 1, 2],
            Chart::X1X3 => [0, 2, 1],
            Chart::X2X3 => [1, 2, 0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Point at unit distance from `(1,1,1)` on the circle component given by `chart` and `sign`.
pub fn unit_circle_point(q1: f64, radius_sign: Sign, chart: Chart) -> Result<UnitPoint> {
    let q2 = q2_principal(q1)?;
    let r = radius_sign.value();
    let [i, j, k] = chart.indices();
    let mut u = [0.0; 3];
    u[i] = r * q1;
    u[j] = r * q2;
    u[k] = -r * (q1 + q2);
    Ok(UnitPoint::from_trace_free_log(u))
}

/// Cubic form of the induced metric at chart point `(x1, x2)` on tangent `(v1, v2)`.
pub fn metric_eval(x1: f64, x2: f64, v1: f64, v2: f64) -> f64 {
    v1 * v1 * v2 / (x1 * x1 * x2) + v2 * v2 * v1 / (x1 * x2 * x2)
}

/// Length of `g` between parameters `s0 <= s1` by adaptive quadrature of the metric.
pub fn arclength_numeric(g: &Geodesic, s0: f64, s1: f64, cfg: &QuadratureCfg) -> Result<f64> {
    if !(s0 <= s1) {
        return Err(Error::InvalidInterval(s0, s1));
    }
    integrate(
        |s| {
            let [x1, x2, _] = geodesic_eval(g, s).0;
            metric_eval(x1, x2, g.q1 * x1, g.q2 * x2).cbrt()
        },
        s0,
        s1,
        cfg,
    )
}
