//! Reference values computed independently of the library.

use bm3_core::quad::{QuadratureCfg, Rule};
use bm3_core::relative::{cfh, f_integral, f_integral_with, symmetric_point};

// F(ξ) to 30 digits, from an arbitrary-precision evaluation of the arclength
// integral with q2 obtained by polynomial root finding.
#[allow(clippy::excessive_precision)]
const F_TABLE: [(f64, f64); 6] = [
    (0.1, 1.20532063096095036753710754466),
    (0.5, 0.211655661455374274867303571376),
    (1.0, 0.0977165506653709087874736059332),
    (2.0, 0.696816735254066266871400107181),
    (3.0, 1.16111758281669511908138754714),
    (10.0, 2.65632999004065381046683827818),
];

/// Textbook forms, deliberately without the rearrangements used in the library.
fn naive_q2(x: f64) -> f64 {
    ((x.powi(4) + 4.0 * x).sqrt() - x * x) / (2.0 * x)
}

fn naive_rate(x: f64) -> f64 {
    let q2 = naive_q2(x);
    let dq2 = -q2 * (q2 + 2.0 * x) / (x * (x + 2.0 * q2));
    dq2 + dq2 * dq2
}

/// Composite Simpson on a graded mesh: a third, unrelated rule.
fn naive_f(xi: f64) -> f64 {
    let c = symmetric_point();
    let n = 200_000;
    // x = c + (xi - c) τ^2 removes the cube-root kink at c
    let g = |tau: f64| {
        let x = c + (xi - c) * tau * tau;
        naive_rate(x).cbrt() * 2.0 * (xi - c) * tau
    };
    let h = 1.0 / n as f64;
    let mut s = g(0.0) + g(1.0);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(k as f64 * h);
    }
    -s * h / 3.0
}

#[test]
fn f_matches_reference_table() {
    let cfg = QuadratureCfg::default();
    for (xi, want) in F_TABLE {
        let gk = f_integral(xi, &cfg).unwrap();
        let ts = f_integral_with(xi, &cfg, Rule::TanhSinh).unwrap();
        assert!((gk - want).abs() <= 1e-10 * want.max(1.0), "GK F({xi}) = {gk}, want {want}");
        assert!((ts - want).abs() <= 1e-10 * want.max(1.0), "TS F({xi}) = {ts}, want {want}");
    }
}

#[test]
fn f_matches_simpson_oracle() {
    let cfg = QuadratureCfg::default();
    for xi in [0.1, 0.5, 1.0, 2.0, 3.0, 10.0] {
        let oracle = naive_f(xi);
        let gk = f_integral(xi, &cfg).unwrap();
        assert!((gk - oracle).abs() <= 1e-8, "F({xi}): {gk} vs simpson {oracle}");
    }
}

#[test]
fn cfh_of_reference_values() {
    let cfg = QuadratureCfg::default();
    for (xi, f) in F_TABLE.iter().filter(|(xi, _)| *xi >= symmetric_point()) {
        let back = cfh(*f, &cfg).unwrap();
        assert!((back - xi).abs() <= 1e-8, "cfh({f}) = {back}, want {xi}");
    }
}
