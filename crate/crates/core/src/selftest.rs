//! Seeded identity suites over every module.
//!
//! Each suite draws its own cases from a generator seeded by the run seed and
//! the suite name, evaluates them in the requested execution mode and reports
//! the worst residual against its tolerance. Errors inside a case count as a
//! `NaN` residual, which fails the suite.

use rand::Rng;

use crate::batch::{compare_closed_batch, map_with, max_of, Execution};
use crate::bingles::{
    bingle_chart, bingle_from_invariants, check_additivity, coplanarity_residual, invariants, reciprocal_bingle,
    xi_from_invariants,
};
use crate::bispace::{apply_nonlinear, biproject, bm_norm_flat, homothety_to_translation, reconstruct};
use crate::error::Result;
use crate::geodesic::{
    arclength_numeric, geodesic_between, geodesic_eval, intersect, q2_principal, Geodesic, Intersection, UnitPoint,
};
use crate::poly::{scalar3, Conjugation, Poly3};
use crate::quad::{QuadratureCfg, Rule};
use crate::random::{self, TestRng};
use crate::relative::{
    cfh, cfh_triple_from_pair, circle_rate, directors, f_integral, f_integral_with, psi, symmetric_point, trig,
};
use crate::sampling::{compactify, linspace, sample_geodesic};
use crate::tringle::{
    check_tringle_additivity, cubic_delta, induced_cubic_form, relative_scalar_v, tringle, tringle_quadrature,
    Agreement, CubicForm2,
};

/// Direction of the pass condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// worst residual `<= tolerance`
    AtMost,
    /// smallest value `>= tolerance`
    AtLeast,
}

impl Bound {
    pub fn symbol(self) -> &'static str {
        match self {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub module: &'static str,
    pub cases: usize,
    /// Worst residual, or the smallest value for [`Bound::AtLeast`].
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    /// Additional named statistics.
    pub extra: Vec<(&'static str, f64)>,
}

impl SuiteReport {
    fn new(name: &'static str, module: &'static str, cases: usize, residual: f64, tolerance: f64) -> Self {
        SuiteReport {
            name,
            module,
            cases,
            residual,
            tolerance,
            bound: Bound::AtMost,
            passed: residual <= tolerance,
            extra: Vec::new(),
        }
    }

    fn at_least(name: &'static str, module: &'static str, cases: usize, value: f64, tolerance: f64) -> Self {
        SuiteReport {
            bound: Bound::AtLeast,
            passed: value >= tolerance,
            ..Self::new(name, module, cases, value, tolerance)
        }
    }

    fn with(mut self, key: &'static str, value: f64) -> Self {
        self.extra.push((key, value));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn get(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// Shared inputs of a run.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub seed: u64,
    pub cfg: QuadratureCfg,
    pub mode: Execution,
}

impl Ctx {
    /// Generator for one suite, independent of the other suites.
    fn rng(&self, name: &str) -> TestRng {
        // FNV-1a of the suite name
        let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
        random::rng(self.seed ^ h)
    }
}

pub type Suite = fn(&Ctx) -> SuiteReport;

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Every suite, in report order.
pub const SUITES: &[(&str, Suite)] = &[
    ("mul_commutative_associative", mul_commutative_associative),
    ("mul_exact_on_integers", mul_exact_on_integers),
    ("norm_multiplicative", norm_multiplicative),
    ("scalar3_symmetric", scalar3_symmetric),
    ("conj_automorphism", conj_automorphism),
    ("conj_product_real", conj_product_real),
    ("biproject_trace", biproject_trace),
    ("biproject_ray_collapse", biproject_ray_collapse),
    ("biproject_ray_collapse_binary", biproject_ray_collapse_binary),
    ("reconstruct_round_trip", reconstruct_round_trip),
    ("nonlinear_isometry", nonlinear_isometry),
    ("homothety_translation", homothety_translation),
    ("q2_constraint", q2_constraint),
    ("arclength_natural", arclength_natural),
    ("between_round_trip", between_round_trip),
    ("parallel_postulate", parallel_postulate),
    ("flatness", flatness),
    ("bingle_flat_distance", bingle_flat_distance),
    ("bingle_chart_agrees", bingle_chart_agrees),
    ("bingle_arclength", bingle_arclength),
    ("bingle_conformal", bingle_conformal),
    ("bingle_unimodular", bingle_unimodular),
    ("bingle_additivity", bingle_additivity),
    ("coplanarity_geodesic", coplanarity_geodesic),
    ("coplanarity_perturbed", coplanarity_perturbed),
    ("viete_round_trip", viete_round_trip),
    ("bingle_from_invariants", bingle_from_invariants_suite),
    ("directors_sum_product", directors_sum_product),
    ("trig_identities", trig_identities),
    ("f_symmetric_point", f_symmetric_point),
    ("f_rules_agree", f_rules_agree),
    ("cfh_f_round_trip", cfh_f_round_trip),
    ("f_derivative_sign", f_derivative_sign),
    ("psi_conformal", psi_conformal),
    ("tringle_quadrature", tringle_vs_quadrature),
    ("tringle_half", tringle_half),
    ("tringle_ray_scaling", tringle_ray_scaling),
    ("tringle_unimodular", tringle_unimodular),
    ("tringle_cyclic", tringle_cyclic),
    ("tringle_degenerate", tringle_degenerate),
    ("tringle_additivity", tringle_additivity),
    ("volume_scalar_constant", volume_scalar_constant),
    ("reduced_delta_exact", reduced_delta_exact),
    ("closed_formula_harness", closed_formula_harness),
    ("sample_geodesic_unit", sample_geodesic_unit),
    ("compactify_center", compactify_center),
];

pub fn run(ctx: &Ctx) -> SelftestReport {
    SelftestReport { seed: ctx.seed, suites: SUITES.iter().map(|(_, f)| f(ctx)).collect() }
}

pub fn run_suite(ctx: &Ctx, name: &str) -> Option<SuiteReport> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, f)| f(ctx))
}

fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

fn rel(value: f64, reference: f64) -> f64 {
    let d = (value - reference).abs();
    if reference == 0.0 {
        d
    } else {
        d / reference.abs()
    }
}

fn rel3(a: &Poly3, b: &Poly3) -> f64 {
    (0..3).map(|i| rel(a[i], b[i])).fold(0.0, max_nan)
}

/// Zero when `a == b` (so `-0 == 0`), else `|a - b|`.
fn exact_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

/// `max` that lets `NaN` win, for folding residuals.
fn max_nan(m: f64, x: f64) -> f64 {
    if x.is_nan() || m.is_nan() {
        f64::NAN
    } else {
        m.max(x)
    }
}

fn gen<T>(ctx: &Ctx, name: &str, n: usize, mut f: impl FnMut(&mut TestRng) -> T) -> Vec<T> {
    let mut rng = ctx.rng(name);
    (0..n).map(|_| f(&mut rng)).collect()
}

/// Uniform in `[lo, hi]` with a random sign.
fn signed_range(rng: &mut TestRng, lo: f64, hi: f64) -> f64 {
    let s = rng.random_range(lo..=hi);
    if rng.random_bool(0.5) {
        s
    } else {
        -s
    }
}

// --- algebra -------------------------------------------------------------

fn mul_commutative_associative(ctx: &Ctx) -> SuiteReport {
    let name = "mul_commutative_associative";
    let cases = gen(ctx, name, 1000, |r| [0; 3].map(|_| random::nondegenerate(r, 3.0)));
    let res = max_of(ctx.mode, &cases, |[a, b, c]| {
        rel3(&(*a * *b), &(*b * *a)).max(rel3(&((*a * *b) * *c), &(*a * (*b * *c))))
    });
    SuiteReport::new(name, "poly-algebra", cases.len(), res, 1e-12)
}

fn mul_exact_on_integers(ctx: &Ctx) -> SuiteReport {
    let name = "mul_exact_on_integers";
    let cases =
        gen(ctx, name, 1000, |r| [0; 3].map(|_| Poly3([0; 3].map(|_| f64::from(r.random_range(-1000i32..=1000))))));
    let res = max_of(ctx.mode, &cases, |[a, b, c]| {
        let comm = (*a * *b).0.iter().zip((*b * *a).0).map(|(x, y)| exact_diff(*x, y)).fold(0.0, max_nan);
        let assoc =
            ((*a * *b) * *c).0.iter().zip((*a * (*b * *c)).0).map(|(x, y)| exact_diff(*x, y)).fold(0.0, max_nan);
        comm.max(assoc)
    });
    SuiteReport::new(name, "poly-algebra", cases.len(), res, 0.0)
}

fn norm_multiplicative(ctx: &Ctx) -> SuiteReport {
    let name = "norm_multiplicative";
    let cases = gen(ctx, name, 1000, |r| (random::nondegenerate(r, 3.0), random::nondegenerate(r, 3.0)));
    let res = max_of(ctx.mode, &cases, |(a, b)| rel((*a * *b).norm(), a.norm() * b.norm()));
    SuiteReport::new(name, "poly-algebra", cases.len(), res, 1e-12)
}

fn scalar3_symmetric(ctx: &Ctx) -> SuiteReport {
    let name = "scalar3_symmetric";
    let cases = gen(ctx, name, 1000, |r| [0; 3].map(|_| random::nondegenerate(r, 3.0)));
    let res = max_of(ctx.mode, &cases, |[a, b, c]| {
        let s = scalar3(a, b, c);
        [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
            .iter()
            .map(|(x, y, z)| exact_diff(scalar3(x, y, z), s))
            .fold(0.0, max_nan)
    });
    SuiteReport::new(name, "poly-algebra", cases.len(), res, 0.0)
}

fn conj_automorphism(ctx: &Ctx) -> SuiteReport {
    let name = "conj_automorphism";
    let cases = gen(ctx, name, 1000, |r| (random::nondegenerate(r, 3.0), random::nondegenerate(r, 3.0)));
    let res = max_of(ctx.mode, &cases, |(a, b)| {
        [Conjugation::Dagger, Conjugation::Ddagger]
            .iter()
            .flat_map(|&k| {
                let lhs = (*a * *b).conj(k);
                let rhs = a.conj(k) * b.conj(k);
                (0..3).map(move |i| exact_diff(lhs[i], rhs[i]))
            })
            .fold(0.0, max_nan)
    });
    SuiteReport::new(name, "poly-algebra", cases.len(), res, 0.0)
}

fn conj_product_real(ctx: &Ctx) -> SuiteReport {
    let name = "conj_product_real";
    let cases = gen(ctx, name, 1000, |r| random::nondegenerate(r, 3.0));
    let res = max_of(ctx.mode, &cases, |a| {
        let p = *a * a.conj(Conjugation::Dagger) * a.conj(Conjugation::Ddagger);
        rel(p[1], p[0]).max(rel(p[2], p[0]))
    });
    SuiteReport::new(name, "poly-algebra", cases.len(), res, 1e-12)
}

// --- bi-space -------------------------------------------------------------

fn biproject_trace(ctx: &Ctx) -> SuiteReport {
    let name = "biproject_trace";
    let cases = gen(ctx, name, 1000, |r| (random::first_octant(r, 5.0), random::first_octant(r, 5.0)));
    let res = max_of(ctx.mode, &cases, |(a, b)| {
        let (pa, pb) = match (biproject(a), biproject(b)) {
            (Ok(pa), Ok(pb)) => (pa, pb),
            _ => return f64::NAN,
        };
        pa.trace().abs().max(pb.trace().abs()).max((pa - pb).trace().abs())
    });
    SuiteReport::new(name, "bi-space", cases.len(), res, 1e-12)
}

fn biproject_ray_collapse(ctx: &Ctx) -> SuiteReport {
    let name = "biproject_ray_collapse";
    let cases = gen(ctx, name, 1000, |r| (random::first_octant(r, 3.0), r.random_range(-5.0f64..5.0).exp()));
    let res = max_of(ctx.mode, &cases, |(a, lam)| match (biproject(&a.scale(*lam)), biproject(a)) {
        (Ok(x), Ok(y)) => (x - y).components().iter().map(|d| d.abs()).fold(0.0, max_nan),
        _ => f64::NAN,
    });
    SuiteReport::new(name, "bi-space", cases.len(), res, 1e-12)
}

/// Scaling by a power of two leaves the bi-projection bitwise unchanged.
fn biproject_ray_collapse_binary(ctx: &Ctx) -> SuiteReport {
    let name = "biproject_ray_collapse_binary";
    let cases = gen(ctx, name, 1000, |r| (random::first_octant(r, 3.0), 2f64.powi(r.random_range(-30..=30))));
    let res = max_of(ctx.mode, &cases, |(a, lam)| match (biproject(&a.scale(*lam)), biproject(a)) {
        (Ok(x), Ok(y)) => (0..3).map(|i| exact_diff(x.components()[i], y.components()[i])).fold(0.0, max_nan),
        _ => f64::NAN,
    });
    SuiteReport::new(name, "bi-space", cases.len(), res, 0.0)
}

fn reconstruct_round_trip(ctx: &Ctx) -> SuiteReport {
    let name = "reconstruct_round_trip";
    let cases = gen(ctx, name, 1000, |r| random::first_octant(r, 5.0));
    let res = max_of(ctx.mode, &cases, |a| match biproject(a).and_then(|u| reconstruct(a.norm(), &u)) {
        Ok(back) => rel3(&back, a),
        Err(_) => f64::NAN,
    });
    SuiteReport::new(name, "bi-space", cases.len(), res, 1e-10)
}

/// Componentwise factors with unit product, orthogonal to `u`.
fn orthogonal_unimodular(rng: &mut TestRng, u: [f64; 3]) -> Option<[f64; 3]> {
    // l2 solves u2 l2² + l1 u1 l2 + u3 / l1 = 0, then l3 = 1 / (l1 l2)
    let l1 = rng.random_range(-1.5f64..1.5).exp() * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let (a, b, c) = (u[1], l1 * u[0], u[2] / l1);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 || a == 0.0 {
        return None;
    }
    let root = if b >= 0.0 { -b - disc.sqrt() } else { -b + disc.sqrt() };
    let l2 = if rng.random_bool(0.5) { root / (2.0 * a) } else { 2.0 * c / root };
    let l3 = 1.0 / (l1 * l2);
    (l2.is_finite() && l3.is_finite() && l2 != 0.0).then_some([l1, l2, l3])
}

fn nonlinear_isometry(ctx: &Ctx) -> SuiteReport {
    let name = "nonlinear_isometry";
    let cases = gen(ctx, name, 1000, |r| loop {
        let u = random::bingle_vec(r, 2.0);
        if let Some(lam) = orthogonal_unimodular(r, u.components()) {
            break (u, lam);
        }
    });
    let res = max_of(ctx.mode, &cases, |(u, lam)| match apply_nonlinear(u, *lam) {
        Ok(v) => rel(bm_norm_flat(&v), bm_norm_flat(u)),
        Err(_) => f64::NAN,
    });
    SuiteReport::new(name, "bi-space", cases.len(), res, 1e-12)
}

fn homothety_translation(ctx: &Ctx) -> SuiteReport {
    let name = "homothety_translation";
    let cases = gen(ctx, name, 1000, |r| random::first_octant(r, 3.0));
    let res = max_of(ctx.mode, &cases, |a| match (homothety_to_translation(a), biproject(a)) {
        (Ok(x), Ok(y)) => (0..3).map(|i| exact_diff(x.components()[i], y.components()[i])).fold(0.0, max_nan),
        _ => f64::NAN,
    });
    SuiteReport::new(name, "bi-space", cases.len(), res, 0.0)
}

// --- extremals ------------------------------------------------------------

fn q2_constraint(ctx: &Ctx) -> SuiteReport {
    let grid: Vec<f64> = linspace(-3.0, 3.0, 200).into_iter().map(|t| 10f64.powf(t)).collect();
    let res = max_of(ctx.mode, &grid, |&q1| or_nan(q2_principal(q1).map(|q2| (q1 * q2 * (q1 + q2) - 1.0).abs())));
    SuiteReport::new("q2_constraint", "indicatrix-geodesics", grid.len(), res, 1e-12)
}

fn arclength_natural(ctx: &Ctx) -> SuiteReport {
    let name = "arclength_natural";
    let geodesics = gen(ctx, name, 100, |r| random::geodesic(r, 1.0, 5.0));
    let cases: Vec<(Geodesic, f64)> = geodesics.iter().flat_map(|g| [0.1, 1.0, 5.0].map(|s| (*g, s))).collect();
    let res = max_of(ctx.mode, &cases, |(g, s)| or_nan(arclength_numeric(g, 0.0, *s, &ctx.cfg).map(|l| (l - s).abs())));
    SuiteReport::new(name, "indicatrix-geodesics", cases.len(), res, 1e-8)
}

fn between_round_trip(ctx: &Ctx) -> SuiteReport {
    let name = "between_round_trip";
    let cases = gen(ctx, name, 1000, |r| (random::geodesic(r, 1.0, 5.0), signed_range(r, 0.05, 3.0)));
    let res = max_of(ctx.mode, &cases, |(g, s)| {
        or_nan(geodesic_between(&g.base(), &geodesic_eval(g, *s)).map(|(_, s_star)| (s_star - s).abs()))
    });
    SuiteReport::new(name, "indicatrix-geodesics", cases.len(), res, 1e-10)
}

fn parallel_postulate(ctx: &Ctx) -> SuiteReport {
    let name = "parallel_postulate";
    let cases = gen(ctx, name, 100, |r| {
        let g = random::geodesic(r, 1.0, 5.0);
        let on = geodesic_eval(&g, r.random_range(-2.0..2.0));
        // step off g across its log-chart direction
        let (q1, q2) = g.exponents();
        let k = signed_range(r, 0.1, 1.0);
        let [x1, x2, _] = on.components();
        let p = UnitPoint::from_log_chart(x1.ln() - k * q2, x2.ln() + k * q1).expect("finite");
        (g, p)
    });
    let hits = map_with(ctx.mode, &cases, |(g, p)| {
        let (q1, q2) = g.exponents();
        let (a1, a2) = p.chart();
        match Geodesic::new(a1, a2, q1, q2) {
            Ok(h) => !matches!(intersect(g, &h), Intersection::Parallel),
            Err(_) => true,
        }
    });
    let failures = hits.iter().filter(|&&h| h).count();
    SuiteReport::new(name, "indicatrix-geodesics", cases.len(), failures as f64, 0.0)
}

fn flatness(ctx: &Ctx) -> SuiteReport {
    let name = "flatness";
    let cases = gen(ctx, name, 100, |r| {
        let g = random::geodesic(r, 1.0, 5.0);
        let t = random::bingle_vec(r, 1.0).components();
        (g, t, r.random_range(0.1..1.0))
    });
    let res = max_of(ctx.mode, &cases, |(g, t, s)| {
        let (q1, q2) = g.exponents();
        let [x1, x2, _] = g.base().components();
        let moved = UnitPoint::from_log_chart(x1.ln() + t[0], x2.ln() + t[1]).and_then(|b| {
            let (a1, a2) = b.chart();
            Geodesic::new(a1, a2, q1, q2)
        });
        match (moved, arclength_numeric(g, 0.0, *s, &ctx.cfg)) {
            (Ok(h), Ok(l)) => or_nan(arclength_numeric(&h, 0.0, *s, &ctx.cfg).map(|lh| (lh - l).abs())),
            _ => f64::NAN,
        }
    });
    SuiteReport::new(name, "indicatrix-geodesics", cases.len(), res, 1e-9)
}

// --- bingles --------------------------------------------------------------

fn pairs(ctx: &Ctx, name: &str, n: usize, spread: f64) -> Vec<(Poly3, Poly3)> {
    gen(ctx, name, n, |r| (random::first_octant(r, spread), random::first_octant(r, spread)))
}

fn bingle_flat_distance(ctx: &Ctx) -> SuiteReport {
    let name = "bingle_flat_distance";
    let cases = pairs(ctx, name, 1000, 3.0);
    let res = max_of(ctx.mode, &cases, |(a, b)| match (biproject(a), biproject(b), reciprocal_bingle(a, b)) {
        (Ok(pa), Ok(pb), Ok(phi)) => exact_diff(phi, bm_norm_flat(&(pa - pb))),
        _ => f64::NAN,
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 0.0)
}

/// Smallest bi-space separation component relative to the size of the points.
///
/// Both bingle formulas lose about `eps / conditioning` relative accuracy when
/// this is small: near a null direction, or for nearly coincident rays.
pub fn separation_conditioning(a: &Poly3, b: &Poly3) -> f64 {
    match (biproject(a), biproject(b)) {
        (Ok(x), Ok(y)) => {
            let scale = x.components().iter().chain(y.components().iter()).fold(1.0f64, |m, v| m.max(v.abs()));
            let lo = (x - y).components().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
            lo / scale
        }
        _ => f64::NAN,
    }
}

/// Pairs with conditioning below this are held to the absolute bound only.
pub const WELL_CONDITIONED: f64 = 1e-3;

fn bingle_chart_agrees(ctx: &Ctx) -> SuiteReport {
    let name = "bingle_chart_agrees";
    let cases = pairs(ctx, name, 1000, 2.0);
    let errs = map_with(ctx.mode, &cases, |(a, b)| match (bingle_chart(a, b), reciprocal_bingle(a, b)) {
        (Ok(c), Ok(phi)) => {
            (rel(c.abs(), phi), (c.abs() - phi).abs(), separation_conditioning(a, b) >= WELL_CONDITIONED)
        }
        _ => (f64::NAN, f64::NAN, true),
    });
    let rel_max = errs.iter().filter(|e| e.2).map(|e| e.0).fold(0.0, max_nan);
    let abs_max = errs.iter().map(|e| e.1).fold(0.0, max_nan);
    let excluded = errs.iter().filter(|e| !e.2).count();
    let mut report = SuiteReport::new(name, "bingles", cases.len(), rel_max, 1e-12)
        .with("abs_max", abs_max)
        .with("ill_conditioned_pairs", excluded as f64);
    report.passed = report.passed && abs_max <= 1e-12;
    report
}

fn bingle_arclength(ctx: &Ctx) -> SuiteReport {
    let name = "bingle_arclength";
    let cases = gen(ctx, name, 100, |r| (random::geodesic(r, 1.0, 5.0), signed_range(r, 0.0, 3.0)));
    let res = max_of(ctx.mode, &cases, |(g, s)| {
        or_nan(reciprocal_bingle(&g.base().to_poly(), &geodesic_eval(g, *s).to_poly()).map(|phi| (phi - s.abs()).abs()))
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 1e-9)
}

fn bingle_conformal(ctx: &Ctx) -> SuiteReport {
    let name = "bingle_conformal";
    let cases = gen(ctx, name, 1000, |r| {
        let (a, b) = (random::first_octant(r, 3.0), random::first_octant(r, 3.0));
        (a, b, r.random_range(-5.0f64..5.0).exp(), r.random_range(-5.0f64..5.0).exp())
    });
    let res = max_of(ctx.mode, &cases, |(a, b, l, m)| {
        match (reciprocal_bingle(&a.scale(*l), &b.scale(*m)), reciprocal_bingle(a, b)) {
            (Ok(x), Ok(y)) => (x - y).abs(),
            _ => f64::NAN,
        }
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 1e-12)
}

fn bingle_unimodular(ctx: &Ctx) -> SuiteReport {
    let name = "bingle_unimodular";
    let cases = gen(ctx, name, 1000, |r| {
        (random::first_octant(r, 3.0), random::first_octant(r, 3.0), random::unimodular(r, 2.0))
    });
    let res = max_of(ctx.mode, &cases, |(a, b, s)| {
        match (reciprocal_bingle(&(*s * *a), &(*s * *b)), reciprocal_bingle(a, b)) {
            (Ok(x), Ok(y)) => (x - y).abs(),
            _ => f64::NAN,
        }
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 1e-12)
}

fn ordered_triple(r: &mut TestRng) -> (Geodesic, [f64; 3]) {
    let g = random::geodesic(r, 1.0, 5.0);
    let mut s = [0; 3].map(|_| r.random_range(-2.0..2.0));
    s.sort_by(f64::total_cmp);
    (g, s)
}

fn bingle_additivity(ctx: &Ctx) -> SuiteReport {
    let name = "bingle_additivity";
    let cases = gen(ctx, name, 100, ordered_triple);
    let res = max_of(ctx.mode, &cases, |(g, s)| {
        let [a, b, c] = s.map(|t| geodesic_eval(g, t).to_poly());
        or_nan(check_additivity(&a, &b, &c).map(f64::abs))
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 1e-9)
}

fn coplanarity_geodesic(ctx: &Ctx) -> SuiteReport {
    let name = "coplanarity_geodesic";
    let cases = gen(ctx, name, 100, |r| loop {
        let (g, s) = ordered_triple(r);
        // keep the three points distinct
        if s[1] - s[0] > 0.05 && s[2] - s[1] > 0.05 {
            break (g, s);
        }
    });
    let res = max_of(ctx.mode, &cases, |(g, s)| {
        let [a, b, c] = s.map(|t| geodesic_eval(g, t).to_poly());
        or_nan(coplanarity_residual(&a, &b, &c))
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 1e-12)
}

/// Geodesic triples with the middle point moved by `e^0.01` in one coordinate,
/// then carried by a random unimodular dilation and coordinate permutation.
pub fn perturbed_triples(ctx: &Ctx, n: usize) -> Vec<[Poly3; 3]> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
    gen(ctx, "coplanarity_perturbed", n, |r| {
        let g = Geodesic::principal(&random::unit_point(r, 1.0), r.random_range(0.2..2.5)).expect("positive q1");
        let mut pts = [0.0, r.random_range(0.1..0.9), 1.0].map(|s| geodesic_eval(&g, s).to_poly());
        pts[1].0[0] *= 0.01f64.exp();
        let sigma = random::unimodular(r, 1.0);
        let perm = PERMS[r.random_range(0..6)];
        pts.map(|p| (sigma * p).permute(perm))
    })
}

fn coplanarity_perturbed(ctx: &Ctx) -> SuiteReport {
    let cases = perturbed_triples(ctx, 100);
    let values = map_with(ctx.mode, &cases, |[a, b, c]| or_nan(coplanarity_residual(a, b, c)));
    let min = values.iter().fold(f64::INFINITY, |m, &v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.min(v) });
    SuiteReport::at_least("coplanarity_perturbed", "bingles", cases.len(), min, 1e-3)
}

fn sorted3(mut x: [f64; 3]) -> [f64; 3] {
    x.sort_by(f64::total_cmp);
    x
}

fn viete_round_trip(ctx: &Ctx) -> SuiteReport {
    let name = "viete_round_trip";
    let cases = pairs(ctx, name, 1000, 2.0);
    let res = max_of(ctx.mode, &cases, |(a, b)| {
        let xi = sorted3([b[0] / a[0], b[1] / a[1], b[2] / a[2]]);
        match invariants(a, b).and_then(|inv| xi_from_invariants(&inv)) {
            Ok(back) => (0..3).map(|i| rel(back[i], xi[i])).fold(0.0, max_nan),
            Err(_) => f64::NAN,
        }
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 1e-9)
}

fn bingle_from_invariants_suite(ctx: &Ctx) -> SuiteReport {
    let name = "bingle_from_invariants";
    let cases = pairs(ctx, name, 1000, 2.0);
    let res = max_of(ctx.mode, &cases, |(a, b)| {
        match (invariants(a, b).and_then(|inv| bingle_from_invariants(&inv)), reciprocal_bingle(a, b)) {
            (Ok(x), Ok(y)) => (x - y).abs(),
            _ => f64::NAN,
        }
    });
    SuiteReport::new(name, "bingles", cases.len(), res, 1e-9)
}

// --- relative bingles -----------------------------------------------------

fn directors_sum_product(ctx: &Ctx) -> SuiteReport {
    let name = "directors_sum_product";
    let cases = pairs(ctx, name, 1000, 3.0);
    let res = max_of(ctx.mode, &cases, |(a, b)| match directors(a, b) {
        Ok(d) => (d.q[0] + d.q[1] + d.q[2]).abs().max((d.q[0] * d.q[1] * d.q[2] + 1.0).abs()),
        Err(_) => f64::NAN,
    });
    SuiteReport::new(name, "relative-bingles", cases.len(), res, 1e-10)
}

fn trig_identities(ctx: &Ctx) -> SuiteReport {
    let name = "trig_identities";
    let cases = pairs(ctx, name, 1000, 3.0);
    let res = max_of(ctx.mode, &cases, |(a, b)| {
        let t = match cfh_triple_from_pair(a, b).and_then(|c| trig(c[0], c[1], c[2])) {
            Ok(t) => t,
            Err(_) => return f64::NAN,
        };
        let prod = |x: [f64; 3]| x[0] * x[1] * x[2];
        let mut worst =
            [prod(t.cfh), prod(t.sfh), prod(t.tfh), prod(t.ctfh)].iter().map(|p| (p - 1.0).abs()).fold(0.0, max_nan);
        for i in 0..3 {
            let c = t.cfh[i];
            for v in [t.sfh[i] * c, c * c * t.tfh[i], t.sfh[i] * t.sfh[i] * t.ctfh[i]] {
                worst = max_nan(worst, (v - 1.0).abs());
            }
        }
        worst
    });
    SuiteReport::new(name, "relative-bingles", cases.len(), res, 1e-12)
}

fn f_symmetric_point(ctx: &Ctx) -> SuiteReport {
    let res = or_nan(f_integral(symmetric_point(), &ctx.cfg).map(|v| exact_diff(v, 0.0)));
    SuiteReport::new("f_symmetric_point", "relative-bingles", 1, res, 0.0)
}

fn f_rules_agree(ctx: &Ctx) -> SuiteReport {
    let grid: Vec<f64> = linspace(0.1f64.ln(), 10f64.ln(), 40).into_iter().map(f64::exp).collect();
    let res = max_of(ctx.mode, &grid, |&x| {
        match (f_integral_with(x, &ctx.cfg, Rule::GaussKronrod), f_integral_with(x, &ctx.cfg, Rule::TanhSinh)) {
            (Ok(a), Ok(b)) => (a - b).abs(),
            _ => f64::NAN,
        }
    });
    SuiteReport::new("f_rules_agree", "relative-bingles", grid.len(), res, 1e-10)
}

fn cfh_f_round_trip(ctx: &Ctx) -> SuiteReport {
    let c = symmetric_point();
    let xs = linspace(c, 10.0, 30);
    let top = or_nan(f_integral(10.0, &ctx.cfg));
    let psis = linspace(0.0, top, 30);
    let forward = max_of(ctx.mode, &xs, |&x| {
        or_nan(f_integral(x, &ctx.cfg).and_then(|p| cfh(p, &ctx.cfg)).map(|y| (y - x).abs()))
    });
    let backward = max_of(ctx.mode, &psis, |&p| {
        or_nan(cfh(p, &ctx.cfg).and_then(|x| f_integral(x, &ctx.cfg)).map(|q| (q - p).abs()))
    });
    SuiteReport::new("cfh_f_round_trip", "relative-bingles", xs.len() + psis.len(), forward.max(backward), 1e-8)
        .with("cfh_of_f", forward)
        .with("f_of_cfh", backward)
}

fn f_derivative_sign(ctx: &Ctx) -> SuiteReport {
    let c = symmetric_point();
    let grid: Vec<f64> =
        linspace(0.05f64.ln(), 10f64.ln(), 60).into_iter().map(f64::exp).filter(|x| (x - c).abs() > 0.02).collect();
    let mismatches = map_with(ctx.mode, &grid, |&x| {
        let h = 1e-4 * x;
        match (f_integral(x + h, &ctx.cfg), f_integral(x - h, &ctx.cfg)) {
            (Ok(hi), Ok(lo)) => {
                let d = (hi - lo) / (2.0 * h);
                // F' = -cbrt(rate), so F'³ has the sign of -rate
                d.powi(3).signum() != (-circle_rate(x)).signum()
            }
            _ => true,
        }
    });
    let n = mismatches.iter().filter(|&&m| m).count();
    SuiteReport::new("f_derivative_sign", "relative-bingles", grid.len(), n as f64, 0.0)
}

fn psi_conformal(ctx: &Ctx) -> SuiteReport {
    let name = "psi_conformal";
    let cases = gen(ctx, name, 100, |r| {
        let (a, b) = (random::first_octant(r, 1.5), random::first_octant(r, 1.5));
        (a, b, r.random_range(-5.0f64..5.0).exp(), r.random_range(-5.0f64..5.0).exp())
    });
    let res = max_of(ctx.mode, &cases, |(a, b, l, m)| {
        match (psi(&a.scale(*l), &b.scale(*m), &ctx.cfg), psi(a, b, &ctx.cfg)) {
            (Ok(x), Ok(y)) if x.component == y.component => (x.value - y.value).abs(),
            _ => f64::NAN,
        }
    });
    SuiteReport::new(name, "relative-bingles", cases.len(), res, 1e-9)
}

// --- tringles ---------------------------------------------------------------

pub fn random_triangles(ctx: &Ctx, name: &str, n: usize) -> Vec<[Poly3; 3]> {
    gen(ctx, name, n, |r| random::triangle(r, 1.5, 3.0, 0.01))
}

fn tringle_vs_quadrature(ctx: &Ctx) -> SuiteReport {
    let name = "tringle_quadrature";
    let cases = random_triangles(ctx, name, 100);
    let res = max_of(ctx.mode, &cases, |[a, b, c]| match (tringle(a, b, c), tringle_quadrature(a, b, c, &ctx.cfg)) {
        (Ok(x), Ok(y)) => (x - y).abs(),
        _ => f64::NAN,
    });
    SuiteReport::new(name, "tringles-volumes", cases.len(), res, 1e-6)
}

fn tringle_half(_ctx: &Ctx) -> SuiteReport {
    let [a, b, c] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]].map(|[u1, u2]| Poly3::new(u1, u2, -u1 - u2).exp());
    let res = or_nan(tringle(&a, &b, &c).map(|v| exact_diff(v, 0.5)));
    SuiteReport::new("tringle_half", "tringles-volumes", 1, res, 0.0)
}

fn tringle_ray_scaling(ctx: &Ctx) -> SuiteReport {
    let name = "tringle_ray_scaling";
    let tris = random_triangles(ctx, name, 1000);
    let mut r = ctx.rng("tringle_ray_scaling_factors");
    let cases: Vec<([Poly3; 3], [f64; 3], [f64; 3])> = tris
        .into_iter()
        .map(|t| {
            let binary = [0; 3].map(|_| 2f64.powi(r.random_range(-30..=30)));
            let general = [0; 3].map(|_| r.random_range(-5.0f64..5.0).exp());
            (t, binary, general)
        })
        .collect();
    let both = map_with(ctx.mode, &cases, |([a, b, c], k, l)| {
        let base = tringle(a, b, c);
        let bin = tringle(&a.scale(k[0]), &b.scale(k[1]), &c.scale(k[2]));
        let gen = tringle(&a.scale(l[0]), &b.scale(l[1]), &c.scale(l[2]));
        match (base, bin, gen) {
            (Ok(v), Ok(x), Ok(y)) => (exact_diff(x, v), (y - v).abs()),
            _ => (f64::NAN, f64::NAN),
        }
    });
    let fold = |f: fn(&(f64, f64)) -> f64| both.iter().map(f).fold(0.0, max_nan);
    let binary = fold(|p| p.0);
    let general = fold(|p| p.1);
    let mut report =
        SuiteReport::new(name, "tringles-volumes", cases.len(), binary, 0.0).with("general_scaling", general);
    report.passed = report.passed && general <= 1e-12;
    report
}

fn tringle_unimodular(ctx: &Ctx) -> SuiteReport {
    let name = "tringle_unimodular";
    let tris = random_triangles(ctx, name, 1000);
    let mut r = ctx.rng("tringle_unimodular_maps");
    let cases: Vec<([Poly3; 3], Poly3)> = tris.into_iter().map(|t| (t, random::unimodular(&mut r, 2.0))).collect();
    let res = max_of(ctx.mode, &cases, |([a, b, c], s)| {
        match (tringle(&(*s * *a), &(*s * *b), &(*s * *c)), tringle(a, b, c)) {
            (Ok(x), Ok(y)) => (x - y).abs(),
            _ => f64::NAN,
        }
    });
    SuiteReport::new(name, "tringles-volumes", cases.len(), res, 1e-12)
}

fn tringle_cyclic(ctx: &Ctx) -> SuiteReport {
    let name = "tringle_cyclic";
    let cases = random_triangles(ctx, name, 1000);
    let res = max_of(ctx.mode, &cases, |[a, b, c]| match (tringle(a, b, c), tringle(b, c, a), tringle(c, a, b)) {
        (Ok(x), Ok(y), Ok(z)) => exact_diff(x, y).max(exact_diff(x, z)),
        _ => f64::NAN,
    });
    SuiteReport::new(name, "tringles-volumes", cases.len(), res, 0.0)
}

fn tringle_degenerate(ctx: &Ctx) -> SuiteReport {
    let name = "tringle_degenerate";
    let cases = gen(ctx, name, 100, ordered_triple);
    let res = max_of(ctx.mode, &cases, |(g, s)| {
        let [a, b, c] = s.map(|t| geodesic_eval(g, t).to_poly());
        or_nan(tringle(&a, &b, &c))
    });
    SuiteReport::new(name, "tringles-volumes", cases.len(), res, 1e-12)
}

/// Triangle plus a fourth vertex on the log-chart extension of edge `ac`.
pub fn additivity_quadruples(ctx: &Ctx, n: usize) -> Vec<[Poly3; 4]> {
    let name = "tringle_additivity";
    let tris = random_triangles(ctx, name, n);
    let mut r = ctx.rng("tringle_additivity_offsets");
    tris.into_iter()
        .map(|[a, b, c]| {
            let t = r.random_range(1.2..2.0);
            let (ua, uc) = (a.ln().expect("first octant"), c.ln().expect("first octant"));
            let d = Poly3([0, 1, 2].map(|i| (ua[i] + t * (uc[i] - ua[i])).exp()));
            [a, b, c, d]
        })
        .collect()
}

fn tringle_additivity(ctx: &Ctx) -> SuiteReport {
    let cases = additivity_quadruples(ctx, 100);
    let res = max_of(ctx.mode, &cases, |[a, b, c, d]| or_nan(check_tringle_additivity(a, b, c, d).map(f64::abs)));
    SuiteReport::new("tringle_additivity", "tringles-volumes", cases.len(), res, 1e-9)
}

fn volume_scalar_constant(ctx: &Ctx) -> SuiteReport {
    let name = "volume_scalar_constant";
    let points = gen(ctx, name, 100, |r| random::unit_point(r, 3.0));
    let values = map_with(ctx.mode, &points, |p| {
        let [x1, x2, _] = p.components();
        relative_scalar_v(&induced_cubic_form(x1, x2)) * x1 * x2
    });
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let res = if values.iter().any(|v| !v.is_finite()) { f64::NAN } else { (hi - lo) / mean.abs() };
    SuiteReport::new(name, "tringles-volumes", points.len(), res, 1e-12).with("mean", mean)
}

fn reduced_delta_exact(ctx: &Ctx) -> SuiteReport {
    let name = "reduced_delta_exact";
    let cases =
        gen(ctx, name, 1000, |r| (f64::from(r.random_range(-999i32..=999)), f64::from(r.random_range(-999i32..=999))));
    let res = max_of(ctx.mode, &cases, |&(g112, g122)| {
        let g = CubicForm2 { g111: 0.0, g112, g122, g222: 0.0 };
        exact_diff(cubic_delta(&g), g112 * g112 * g122 * g122)
    });
    SuiteReport::new(name, "tringles-volumes", cases.len(), res, 0.0)
}

fn closed_formula_harness(ctx: &Ctx) -> SuiteReport {
    let name = "closed_formula_harness";
    let cases = random_triangles(ctx, name, 100);
    let results = compare_closed_batch(ctx.mode, &cases, &ctx.cfg);
    let unclassified = results.iter().filter(|r| r.is_err()).count();
    let agree = results.iter().filter(|r| matches!(r, Ok(c) if c.class == Agreement::Agree)).count();
    let max_rel = results.iter().filter_map(|r| r.as_ref().ok().and_then(|c| c.rel_diff)).fold(0.0, max_nan);
    SuiteReport::new(name, "tringles-volumes", cases.len(), unclassified as f64, 0.0)
        .with("agree", agree as f64)
        .with("disagree", (cases.len() - agree - unclassified) as f64)
        .with("max_rel_diff", max_rel)
}

// --- sampling ---------------------------------------------------------------

fn sample_geodesic_unit(ctx: &Ctx) -> SuiteReport {
    let name = "sample_geodesic_unit";
    let cases =
        gen(ctx, name, 100, |r| (random::geodesic(r, 1.0, 5.0), r.random_range(-3.0..0.0), r.random_range(0.0..3.0)));
    let res = max_of(ctx.mode, &cases, |(g, s0, s1)| match sample_geodesic(g, *s0, *s1, 17, false) {
        Ok(rows) => {
            let ends = exact_diff(rows[0][0], *s0).max(exact_diff(rows[16][0], *s1));
            if ends > 0.0 {
                return f64::INFINITY;
            }
            rows.iter().map(|r| (r[1] * r[2] * r[3] - 1.0).abs()).fold(0.0, max_nan)
        }
        Err(_) => f64::NAN,
    });
    SuiteReport::new(name, "cli", cases.len(), res, 1e-12)
}

fn compactify_center(_ctx: &Ctx) -> SuiteReport {
    SuiteReport::new("compactify_center", "cli", 1, (compactify(1.0) - 0.5).abs(), 1e-15)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(mode: Execution) -> Ctx {
        Ctx { seed: 7, cfg: QuadratureCfg::default(), mode }
    }

    #[test]
    fn suite_names_are_unique_and_match() {
        for (i, (n, _)) in SUITES.iter().enumerate() {
            assert!(SUITES[i + 1..].iter().all(|(m, _)| m != n), "duplicate {n}");
        }
        let c = ctx(Execution::Sequential);
        for name in ["tringle_half", "compactify_center", "q2_constraint"] {
            assert_eq!(run_suite(&c, name).unwrap().name, name);
        }
    }

    #[test]
    fn cheap_suites_pass_in_both_modes() {
        for mode in [Execution::Sequential, Execution::Parallel] {
            let c = ctx(mode);
            for name in ["norm_multiplicative", "scalar3_symmetric", "tringle_cyclic", "reduced_delta_exact"] {
                let r = run_suite(&c, name).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn modes_give_identical_reports() {
        let names = ["bingle_conformal", "tringle_unimodular", "closed_formula_harness"];
        let seq: Vec<_> = names.iter().map(|n| run_suite(&ctx(Execution::Sequential), n)).collect();
        let par: Vec<_> = names.iter().map(|n| run_suite(&ctx(Execution::Parallel), n)).collect();
        assert_eq!(seq, par);
    }

    #[test]
    fn nan_residual_fails() {
        let r = SuiteReport::new("x", "m", 1, f64::NAN, 1.0);
        assert!(!r.passed);
        let r = SuiteReport::at_least("x", "m", 1, f64::NAN, 1.0);
        assert!(!r.passed);
    }
}
