//! One-dimensional quadrature.
//!
//! The workhorse is globally adaptive 7/15-point Gauss-Kronrod bisection.
//! A double-exponential (tanh-sinh) rule is provided as an independent
//! second method; it shares no nodes or error model with the first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Tolerances and refinement limit for the adaptive rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureCfg {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections of any panel (levels for tanh-sinh).
    pub max_depth: u32,
}

impl Default for QuadratureCfg {
    fn default() -> Self {
        QuadratureCfg { abs_tol: 1e-12, rel_tol: 1e-10, max_depth: 40 }
    }
}

impl QuadratureCfg {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let cfg = QuadratureCfg { abs_tol, rel_tol, max_depth };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig("abs_tol must be positive"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig("rel_tol must be positive"));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidConfig("max_depth must be at least 1"));
        }
        Ok(())
    }

    fn target(&self, estimate: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

/// Selects the quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rule {
    #[default]
    GaussKronrod,
    TanhSinh,
}

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_PANELS: usize = 50_000;

fn checked(x: f64, y: f64) -> Result<f64> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::QuadratureFailure(format!("integrand is not finite at x = {x}")))
    }
}

/// One G7/K15 panel: (kronrod estimate, |kronrod - gauss|).
fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(center, f(center)?)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let f1 = checked(x1, f(x1)?)?;
        let f2 = checked(x2, f(x2)?)?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    estimate: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Adaptive Gauss-Kronrod integration of a fallible integrand over `[a, b]`.
///
/// Reversed limits give the negated integral; equal limits give exactly zero.
pub fn integrate_gk_with<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureCfg) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInterval(a, b));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_gk_with(f, b, a, cfg).map(|v| -v);
    }

    let (estimate, error) = gk15(&mut f, a, b)?;
    let mut total = estimate;
    let mut total_err = error;
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, estimate, error, depth: 0 });

    loop {
        if total_err <= cfg.target(total) {
            // Running sums can lose accuracy when large panels are retired.
            total = heap.iter().map(|p| p.estimate).sum();
            total_err = heap.iter().map(|p| p.error).sum();
            if total_err <= cfg.target(total) {
                break;
            }
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailure(format!(
                "panel limit reached on [{a}, {b}] (error estimate {total_err:e})"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= cfg.max_depth {
            return Err(Error::QuadratureFailure(format!(
                "max_depth {} exceeded near [{}, {}] (error estimate {:e})",
                cfg.max_depth, worst.a, worst.b, total_err
            )));
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (e1, r1) = gk15(&mut f, worst.a, mid)?;
        let (e2, r2) = gk15(&mut f, mid, worst.b)?;
        total += e1 + e2 - worst.estimate;
        total_err += r1 + r2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, estimate: e1, error: r1, depth: worst.depth + 1 });
        heap.push(Panel { a: mid, b: worst.b, estimate: e2, error: r2, depth: worst.depth + 1 });
    }

    // Re-sum in interval order so the result does not carry running-sum drift.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(|p| p.estimate).sum())
}

/// Adaptive Gauss-Kronrod integration of an infallible integrand.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureCfg) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_gk_with(|x| Ok(f(x)), a, b, cfg)
}

/// Tanh-sinh integration with level doubling.
///
/// Nodes cluster doubly-exponentially at both ends, so integrable endpoint
/// singularities need no special treatment. Abscissae that round onto an
/// endpoint are skipped.
pub fn integrate_tanh_sinh<F>(f: F, a: f64, b: f64, cfg: &QuadratureCfg) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInterval(a, b));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_tanh_sinh(f, b, a, cfg).map(|v| -v);
    }

    const T_MAX: f64 = 4.0;
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let max_level = cfg.max_depth.min(14);

    // Contribution of the symmetric node pair at parameter t (t > 0).
    let pair = |t: f64| -> Result<f64> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u).exp();
        let complement = 2.0 * e / (1.0 + e); // 1 - tanh(u)
        let cosh_u = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        let offset = half * complement;
        let mut s = 0.0;
        let x1 = a + offset;
        if x1 > a && x1 < b {
            s += checked(x1, f(x1))?;
        }
        let x2 = b - offset;
        if x2 > a && x2 < b {
            s += checked(x2, f(x2))?;
        }
        Ok(w * s)
    };

    let mut h = 1.0;
    let mut sum = FRAC_PI_2 * checked(center, f(center))?;
    let mut k = 1u32;
    while k as f64 * h <= T_MAX {
        sum += pair(k as f64 * h)?;
        k += 1;
    }
    let mut previous = half * h * sum;

    for level in 1..=max_level {
        h *= 0.5;
        let mut k = 1u32;
        while k as f64 * h <= T_MAX {
            sum += pair(k as f64 * h)?;
            k += 2;
        }
        let current = half * h * sum;
        if level >= 3 && (current - previous).abs() <= cfg.target(current) {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::QuadratureFailure(format!("tanh-sinh did not converge on [{a}, {b}] within {max_level} levels")))
}

/// Dispatches to the selected rule.
pub fn integrate_rule<F>(rule: Rule, f: F, a: f64, b: f64, cfg: &QuadratureCfg) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    match rule {
        Rule::GaussKronrod => integrate(f, a, b, cfg),
        Rule::TanhSinh => integrate_tanh_sinh(f, a, b, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomials_are_exact() {
        let cfg = QuadratureCfg::default();
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, &cfg).unwrap();
        assert_abs_diff_eq!(v, 8.0, epsilon = 1e-13);
        assert_eq!(integrate(|x| x, 1.0, 1.0, &cfg).unwrap(), 0.0);
        let r = integrate(|x| 3.0 * x * x, 2.0, 0.0, &cfg).unwrap();
        assert_abs_diff_eq!(r, -8.0, epsilon = 1e-13);
    }

    #[test]
    fn endpoint_singularities() {
        let cfg = QuadratureCfg::default();
        // integral of x^(-1/2) over (0, 1] is 2
        let ts = integrate_tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(ts, 2.0, epsilon = 1e-10);
        // cube-root kink
        let gk = integrate(|x: f64| x.cbrt(), 0.0, 1.0, &cfg).unwrap();
        let ts = integrate_tanh_sinh(|x: f64| x.cbrt(), 0.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(gk, 0.75, epsilon = 1e-11);
        assert_abs_diff_eq!(ts, 0.75, epsilon = 1e-11);
    }

    #[test]
    fn rules_agree_on_smooth_integrand() {
        let cfg = QuadratureCfg::default();
        let f = |x: f64| (x * 3.0).sin() * (-x).exp();
        let a = integrate_rule(Rule::GaussKronrod, f, -1.0, 2.5, &cfg).unwrap();
        let b = integrate_rule(Rule::TanhSinh, f, -1.0, 2.5, &cfg).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-11);
    }

    #[test]
    fn depth_limit_reports_failure() {
        let cfg = QuadratureCfg { abs_tol: 1e-14, rel_tol: 1e-14, max_depth: 2 };
        let err = integrate(|x: f64| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure(_)));
    }

    #[test]
    fn non_finite_integrand_fails() {
        let cfg = QuadratureCfg::default();
        let err = integrate(|_| f64::NAN, 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure(_)));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureCfg::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureCfg::new(1e-12, -1.0, 10).is_err());
        assert!(QuadratureCfg::new(1e-12, 1e-10, 0).is_err());
        assert!(QuadratureCfg::new(1e-12, 1e-10, 1).is_ok());
    }
}
