//! Relative bingles on the unit circle and Finslerian-hyperbolic trigonometry.
//!
//! The unit circle about `(1,1,1)` has six components, each parametrized in a
//! coordinate chart by the director exponent `ξ > 0` of the connecting
//! extremal. Arclength along a component, measured from the symmetric point
//! `ξ = 2^(-1/3)`, is the non-elementary function
//!
//! ```text
//! F(ξ) = -∫_{2^(-1/3)}^{ξ} (q2'(x) + q2'(x)²)^(1/3) dx
//! ```
//!
//! with `q2(x)` the principal solution of `x q2 (x + q2) = 1`. Its inverse on
//! the branch `ξ >= 2^(-1/3)` is the hyperbolic cosine analogue `cfh`.

use std::fmt;

use crate::bispace::{biproject, second_biproject};
use crate::error::{Error, Result};
use crate::geodesic::{q2_principal, Sign, UnitPoint};
use crate::poly::Poly3;
use crate::quad::{integrate, integrate_tanh_sinh, QuadratureCfg, Rule};

/// The symmetric point `2^(-1/3)`, where `F` vanishes.
pub fn symmetric_point() -> f64 {
    0.5f64.cbrt()
}

/// Lower cutoff on the integration variable of `F`.
pub const XI_CUTOFF: f64 = 1e-12;

/// Director exponents of an ordered pair together with the signed bingle `s*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Directors {
    pub q: [f64; 3],
    pub s_star: f64,
}

/// `qi = (χi(B) - χi(A)) / s*` with `s* = (-l1 l2 l3)^(1/3)` signed.
///
/// The result satisfies `Σ qi = 0` and `Π qi = -1`.
pub fn directors(a: &Poly3, b: &Poly3) -> Result<Directors> {
    let l = (biproject(b)? - biproject(a)?).components();
    if l.iter().all(|&x| x == 0.0) {
        return Err(Error::CoincidentPoints);
    }
    let big = l.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let small = l.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if small <= 1e-12 * big {
        return Err(Error::NullSeparated);
    }
    let s_star = (-l[0] * l[1] * l[2]).cbrt();
    Ok(Directors { q: l.map(|x| x / s_star), s_star })
}

/// Label of a unit-circle component: `index` in 1..=3 and the sign of `s*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub index: u8,
    pub sign: Sign,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{}{}", self.index, s)
    }
}

/// Component hit by the extremal with directors `q`.
///
/// `q1, q2 > 0` gives 3, `q1 < 0 < q2` gives 2, `q2 < 0 < q1` gives 1.
pub fn classify(q: &[f64; 3], s_sign: Sign) -> Result<Component> {
    if q.iter().any(|&x| x == 0.0 || !x.is_finite()) {
        return Err(Error::Ambiguous(*q));
    }
    let index = match (q[0] > 0.0, q[1] > 0.0) {
        (true, true) => 3,
        (false, true) => 2,
        (true, false) => 1,
        (false, false) => return Err(Error::Ambiguous(*q)),
    };
    Ok(Component { index, sign: s_sign })
}

/// `q2' + q2'²` along the principal branch, in a form free of cancellation.
pub fn circle_rate(x: f64) -> f64 {
    let q2 = q2_principal(x).unwrap_or(f64::NAN);
    let t = x + 2.0 * q2;
    -q2 * (q2 + 2.0 * x) * (x - q2) * (x + q2) / (x * x * t * t)
}

fn check_xi(xi: f64) -> Result<f64> {
    if xi.is_nan() || xi <= 0.0 {
        return Err(Error::NonPositive(xi));
    }
    if !xi.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(xi.max(XI_CUTOFF))
}

/// `F(ξ)` by the selected rule; arguments below [`XI_CUTOFF`] are clamped to it.
///
/// Gauss-Kronrod integrates in `t = ln x`, where the integrand is bounded at
/// both ends; tanh-sinh integrates in `x` directly.
pub fn f_integral_with(xi: f64, cfg: &QuadratureCfg, rule: Rule) -> Result<f64> {
    let xi = check_xi(xi)?;
    let c = symmetric_point();
    if xi == c {
        return Ok(0.0);
    }
    let v = match rule {
        Rule::GaussKronrod => integrate(
            |t| {
                let x = t.exp();
                x * circle_rate(x).cbrt()
            },
            c.ln(),
            xi.ln(),
            cfg,
        )?,
        Rule::TanhSinh => integrate_tanh_sinh(|x| circle_rate(x).cbrt(), c, xi, cfg)?,
    };
    Ok(-v)
}

/// `F(ξ)`: arclength on a unit-circle component from the symmetric point.
pub fn f_integral(xi: f64, cfg: &QuadratureCfg) -> Result<f64> {
    f_integral_with(xi, cfg, Rule::GaussKronrod)
}

/// Monotone variant `sign(ξ - 2^(-1/3)) F(ξ)`.
pub fn f_signed(xi: f64, cfg: &QuadratureCfg) -> Result<f64> {
    let v = f_integral(xi, cfg)?;
    Ok(if xi < symmetric_point() { -v } else { v })
}

/// A relative bingle with the component it was measured on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelBingle {
    pub value: f64,
    pub component: Component,
    /// The director exponent parametrizing the component.
    pub param: f64,
}

/// Relative bingle of `b` seen from `a`.
///
/// On each component the parametrizing director is the one cyclically after
/// the negative director; it is always positive.
pub fn psi(a: &Poly3, b: &Poly3, cfg: &QuadratureCfg) -> Result<RelBingle> {
    let d = directors(a, b)?;
    let component = classify(&d.q, Sign::of(d.s_star))?;
    let param = d.q[component_indices(component.index).1];
    if !(param > 0.0) {
        return Err(Error::DomainError(format!("parametrizing director {param} is not positive")));
    }
    Ok(RelBingle { value: f_integral(param, cfg)?, component, param })
}

/// Index of the negative director on a component, and of the parametrizing one.
fn component_indices(index: u8) -> (usize, usize) {
    let negative = match index {
        3 => 2,
        2 => 0,
        _ => 1,
    };
    (negative, (negative + 1) % 3)
}

/// Point of the unit circle about `(1,1,1)` on `component` with parameter `xi > 0`.
///
/// Inverse of [`psi`] seen from `(1,1,1)`: `psi(I, circle_point(c, ξ))` is
/// `F(ξ)` on component `c`.
pub fn circle_point(component: Component, xi: f64) -> Result<UnitPoint> {
    if !(1..=3).contains(&component.index) {
        return Err(Error::DomainError(format!("no unit-circle component {}", component.index)));
    }
    let q2 = q2_principal(xi)?;
    let (negative, param) = component_indices(component.index);
    let r = component.sign.value();
    let mut u = [0.0; 3];
    u[param] = r * xi;
    u[(param + 1) % 3] = r * q2;
    u[negative] = -r * (xi + q2);
    Ok(UnitPoint::from_trace_free_log(u))
}

/// Branch of the inverse of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// `ξ >= 2^(-1/3)`
    #[default]
    Upper,
    /// `0 < ξ <= 2^(-1/3)`
    Lower,
}

const MAX_ROOT_ITER: usize = 200;

/// Inverse of `F` on the chosen branch.
pub fn cfh_branch(psi_value: f64, cfg: &QuadratureCfg, branch: Branch) -> Result<f64> {
    cfg.validate()?;
    if psi_value.is_nan() || psi_value < 0.0 {
        return Err(Error::OutOfRange(psi_value));
    }
    let c = symmetric_point();
    if psi_value == 0.0 {
        return Ok(c);
    }
    let h = |x: f64| f_integral(x, cfg).map(|v| v - psi_value);

    // Bracket [near, far] with h(near) < 0 <= h(far); grow geometrically in ln ξ.
    let (mut near, mut far) = match branch {
        Branch::Upper => (c, 2.0),
        Branch::Lower => (c, 0.5 * c),
    };
    let mut h_near = -psi_value;
    let mut h_far = h(far)?;
    while h_far < 0.0 {
        let next = far * far;
        let out_of_reach = match branch {
            Branch::Upper => !(next < 1e300),
            Branch::Lower => next < XI_CUTOFF,
        };
        if out_of_reach {
            return Err(Error::OutOfRange(psi_value));
        }
        near = far;
        h_near = h_far;
        far = next;
        h_far = h(far)?;
    }
    if h_far == 0.0 {
        return Ok(far);
    }

    // Illinois variant of regula falsi, with a bisection step when it stalls.
    let (mut lo, mut hi, mut f_lo, mut f_hi) = (near, far, h_near, h_far);
    let mut side = 0i8;
    for _ in 0..MAX_ROOT_ITER {
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let width = (hi - lo).abs();
        if !x.is_finite() || (x - lo).abs() < 0.01 * width || (hi - x).abs() < 0.01 * width {
            x = 0.5 * (lo + hi);
        }
        let fx = h(x)?;
        if fx.abs() <= cfg.abs_tol || (hi - lo).abs() <= 4.0 * f64::EPSILON * x.abs() {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::RootFinding(format!("cfh({psi_value}) did not converge in {MAX_ROOT_ITER} iterations")))
}

/// Inverse of `F` on the principal branch `ξ >= 2^(-1/3)`.
pub fn cfh(psi_value: f64, cfg: &QuadratureCfg) -> Result<f64> {
    cfh_branch(psi_value, cfg, Branch::Upper)
}

/// Sines, tangents and cotangents built from a cfh triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub cfh: [f64; 3],
    pub sfh: [f64; 3],
    pub tfh: [f64; 3],
    pub ctfh: [f64; 3],
}

pub fn trig(cfh1: f64, cfh2: f64, cfh3: f64) -> Result<Trig> {
    let c = [cfh1, cfh2, cfh3];
    if c.contains(&0.0) {
        return Err(Error::ZeroCosine);
    }
    let sfh = [c[1] * c[2], c[2] * c[0], c[0] * c[1]];
    let tfh = [sfh[0] / c[0], sfh[1] / c[1], sfh[2] / c[2]];
    Ok(Trig { cfh: c, sfh, tfh, ctfh: tfh.map(|t| 1.0 / t) })
}

/// `cfh_i = -q_i`; the triple has unit product and zero sum.
pub fn cfh_triple_from_pair(a: &Poly3, b: &Poly3) -> Result<[f64; 3]> {
    Ok(directors(a, b)?.q.map(|q| -q))
}

/// Sign convention relating the directors to cfh values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `cfh_i = -q_i`
    Minus,
    /// `cfh_i = q_i`
    Plus,
}

/// Comparison of the cube-root ratios `χi^(2/3) / (χj χk)^(1/3)` with cfh values
/// and with the exponentiated second bi-projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectReport {
    /// `cbrt(χi²) / cbrt(χj χk)` with real cube roots.
    pub ratios: [f64; 3],
    /// Directors of the pair `(I, a)` under the minus convention.
    pub cfh_minus: [f64; 3],
    pub residual_minus: f64,
    pub residual_plus: f64,
    /// `exp` of the second bi-projection, `|χi|^(2/3) / |χj χk|^(1/3)`.
    pub second_exp: [f64; 3],
    /// `|ratio_i - second_exp_i|` where the ratio is positive.
    pub second_exp_residual: [Option<f64>; 3],
    /// True unless all three ratios are positive.
    pub domain_restricted: bool,
}

impl ConnectReport {
    /// The convention whose residual is within `tol`, preferring the smaller.
    pub fn matching_convention(&self, tol: f64) -> Option<Convention> {
        if self.residual_minus <= tol && self.residual_minus <= self.residual_plus {
            Some(Convention::Minus)
        } else if self.residual_plus <= tol {
            Some(Convention::Plus)
        } else {
            None
        }
    }
}

pub fn check_connect(a: &Poly3) -> Result<ConnectReport> {
    let u = biproject(a)?;
    let chi = u.components();
    if chi.contains(&0.0) {
        return Err(Error::NullComponent(chi));
    }
    let ratio = |i: usize| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        (chi[i] * chi[i]).cbrt() / (chi[j] * chi[k]).cbrt()
    };
    let ratios = [ratio(0), ratio(1), ratio(2)];
    let cfh_minus = cfh_triple_from_pair(&Poly3::ONE, a)?;
    let residual = |sign: f64| (0..3).fold(0.0f64, |m, i| m.max((sign * cfh_minus[i] - ratios[i]).abs()));
    let second_exp = second_biproject(&u)?.components().map(f64::exp);
    let second_exp_residual = [0, 1, 2].map(|i| (ratios[i] > 0.0).then(|| (ratios[i] - second_exp[i]).abs()));
    Ok(ConnectReport {
        ratios,
        cfh_minus,
        residual_minus: residual(1.0),
        residual_plus: residual(-1.0),
        second_exp,
        second_exp_residual,
        domain_restricted: !ratios.iter().all(|&r| r > 0.0),
    })
}
