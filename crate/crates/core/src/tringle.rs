//! Tringles: invariant areas of geodesic triangles on the indicatrix.
//!
//! The area form `dX1 ∧ dX2 / (X1 X2)` becomes `du1 ∧ du2` in the log chart
//! `u = ln X`, where extremals are straight lines. A tringle is therefore the
//! Euclidean area of the triangle spanned by the bi-projections in the
//! `(χ1, χ2)` plane. The other evaluations here exist to cross-check that.

use crate::bingles::{coplanarity_residual, reciprocal_bingle, COPLANAR_TOL};
use crate::bispace::biproject;
use crate::error::{Error, Result};
use crate::geodesic::{q2_principal, unit_point};
use crate::poly::Poly3;
use crate::quad::{integrate, integrate_gk_with, QuadratureCfg};
use crate::relative::{cfh_triple_from_pair, directors};

/// Independent components of a symmetric cubic form in two variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicForm2 {
    pub g111: f64,
    pub g112: f64,
    pub g122: f64,
    pub g222: f64,
}

impl CubicForm2 {
    pub const ZERO: CubicForm2 = CubicForm2 { g111: 0.0, g112: 0.0, g122: 0.0, g222: 0.0 };

    /// `G_ijk` for indices in `{1, 2}`.
    pub fn component(&self, i: usize, j: usize, k: usize) -> f64 {
        match [i, j, k].iter().filter(|&&x| x == 2).count() {
            0 => self.g111,
            1 => self.g112,
            2 => self.g122,
            _ => self.g222,
        }
    }

    /// `Σ G_ijk v_i v_j v_k`.
    pub fn eval(&self, v1: f64, v2: f64) -> f64 {
        self.g111 * v1 * v1 * v1
            + 3.0 * self.g112 * v1 * v1 * v2
            + 3.0 * self.g122 * v1 * v2 * v2
            + self.g222 * v2 * v2 * v2
    }

    pub fn scale(&self, k: f64) -> CubicForm2 {
        CubicForm2 { g111: k * self.g111, g112: k * self.g112, g122: k * self.g122, g222: k * self.g222 }
    }
}

/// Determinant of the cubic matrix `(H_i, H_j)` with `(H_i)_ab = G_iab`:
/// `Σ_{σ,τ ∈ S2} sgn σ sgn τ (H_i)_{σ1 τ1} (H_j)_{σ2 τ2}`.
pub fn cubic_pair_det(g: &CubicForm2, i: usize, j: usize) -> f64 {
    let h = |m: usize, a: usize, b: usize| g.component(m, a, b);
    h(i, 1, 1) * h(j, 2, 2) - h(i, 1, 2) * h(j, 2, 1) - h(i, 2, 1) * h(j, 1, 2) + h(i, 2, 2) * h(j, 1, 1)
}

/// `det(H1, H2) = G111 G222 - G112 G221 + G122 G211 - G121 G212`.
pub fn cubic_det2(g: &CubicForm2) -> f64 {
    cubic_pair_det(g, 1, 2)
}

/// Determinant of the 2×2 matrix of pairwise cubic determinants.
pub fn cubic_delta_raw(g: &CubicForm2) -> f64 {
    let d = |i, j| cubic_pair_det(g, i, j);
    d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1)
}

/// Relative scalar of weight -6, normalized so that `G111 = G222 = 0` gives
/// `G112² G122²` (the raw determinant carries a factor 3 there).
pub fn cubic_delta(g: &CubicForm2) -> f64 {
    cubic_delta_raw(g) / 3.0
}

/// `|Δ|^(1/6)`, a relative scalar of weight -1; the sign of `Δ` is [`cubic_delta`]'s.
pub fn relative_scalar_v(g: &CubicForm2) -> f64 {
    cubic_delta(g).abs().powf(1.0 / 6.0)
}

/// Cubic form of the indicatrix metric at chart point `(x1, x2)`.
pub fn induced_cubic_form(x1: f64, x2: f64) -> CubicForm2 {
    CubicForm2 { g111: 0.0, g112: 1.0 / (3.0 * x1 * x1 * x2), g122: 1.0 / (3.0 * x1 * x2 * x2), g222: 0.0 }
}

/// Density of the invariant area form in the `(X1, X2)` chart.
pub fn area_density(x1: f64, x2: f64) -> f64 {
    1.0 / (x1 * x2)
}

fn log_chart(a: &Poly3) -> Result<(f64, f64)> {
    let [u1, u2, _] = biproject(a)?.components();
    Ok((u1, u2))
}

/// Tringle by the shoelace formula in the log chart.
///
/// The three shoelace terms are summed by increasing magnitude, so cyclic
/// permutations of the arguments give bitwise-identical results, and so do
/// transpositions unless two terms have equal magnitude and opposite signs.
pub fn tringle(a: &Poly3, b: &Poly3, c: &Poly3) -> Result<f64> {
    let (pa, pb, pc) = (log_chart(a)?, log_chart(b)?, log_chart(c)?);
    let mut terms = [pa.0 * (pb.1 - pc.1), pb.0 * (pc.1 - pa.1), pc.0 * (pa.1 - pb.1)];
    terms.sort_by(|x, y| x.abs().total_cmp(&y.abs()).then(x.total_cmp(y)));
    Ok(0.5 * (terms[0] + terms[1] + terms[2]).abs())
}

/// Tringle by nested adaptive quadrature of `1 / (X1 X2)` in the original chart.
///
/// The region is swept in `X1`; each edge is the power curve
/// `X2 = X2_P (X1 / X1_P)^k` through its endpoints.
pub fn tringle_quadrature(a: &Poly3, b: &Poly3, c: &Poly3, cfg: &QuadratureCfg) -> Result<f64> {
    let mut v = [unit_point(a)?.chart(), unit_point(b)?.chart(), unit_point(c)?.chart()];
    v.sort_by(|p, q| p.0.total_cmp(&q.0));
    let [lo, mid, hi] = v;

    // Curve through p and q, as a function of X1 strictly between them.
    let edge = |p: (f64, f64), q: (f64, f64)| {
        let k = (q.1 / p.1).ln() / (q.0 / p.0).ln();
        move |x: f64| p.1 * (x / p.0).powf(k)
    };
    let section = |x0: f64, x1: f64, e1: &dyn Fn(f64) -> f64, e2: &dyn Fn(f64) -> f64| -> Result<f64> {
        if !(x1 > x0) {
            return Ok(0.0);
        }
        integrate_gk_with(
            |x| {
                let (y1, y2) = (e1(x), e2(x));
                let (ylo, yhi) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
                integrate(|y| area_density(x, y), ylo, yhi, cfg)
            },
            x0,
            x1,
            cfg,
        )
    };

    let long = edge(lo, hi);
    let left = section(lo.0, mid.0, &long, &edge(lo, mid))?;
    let right = section(mid.0, hi.0, &long, &edge(mid, hi))?;
    Ok(left + right)
}

/// Intersection parameter of a pencil ray with the opposite edge, as printed:
///
/// `s(q) = φ (c2[BC] c1[AB] - c1[BC] c2[AB]) / (c2[BC] q - c1[BC] q̄)`.
///
/// The expression is homogeneous of degree zero in the `[B,C]` pair. With
/// directors and a signed `φ` it reproduces the exact ray parameter.
pub fn s_of_q(q: f64, qbar: f64, phi_ab: f64, cfh_bc: (f64, f64), cfh_ab: (f64, f64)) -> Result<f64> {
    let den = cfh_bc.1 * q - cfh_bc.0 * qbar;
    let scale = cfh_bc.0.hypot(cfh_bc.1) * q.hypot(qbar);
    if den.abs() <= 1e-14 * scale || den == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(phi_ab * (cfh_bc.1 * cfh_ab.0 - cfh_bc.0 * cfh_ab.1) / den)
}

/// `(sqrt(x⁴ + 4x) - x²) / (2x)` in rationalized form.
fn printed_qbar(x: f64) -> f64 {
    2.0 / ((x * x * x * x + 4.0 * x).sqrt() + x * x)
}

/// The printed closed-form tringle, evaluated literally with `cfh = -q`:
///
/// ```text
/// 3/2 φ²[A,B] (p c1[A,B] - p̄ c2[A,B])² ∫_{c1[A,B]}^{c1[A,C]} dx /
///     ( sqrt(x⁴ + 4x) (x/p - (sqrt(x⁴ + 4x) - x²) / (2x p̄))² )
/// ```
///
/// with `(p, p̄)` the cfh pair of `[B,C]`. The result is signed.
pub fn tringle_closed(a: &Poly3, b: &Poly3, c: &Poly3, cfg: &QuadratureCfg) -> Result<f64> {
    let phi = reciprocal_bingle(a, b)?;
    let ab = cfh_triple_from_pair(a, b)?;
    let ac = cfh_triple_from_pair(a, c)?;
    let bc = cfh_triple_from_pair(b, c)?;
    let (p, pbar) = (bc[0], bc[1]);
    let (x0, x1) = (ab[0], ac[0]);
    // collinear vertices give a degenerate interval up to rounding
    if (x0 - x1).abs() <= 1e-12 * x0.abs().max(1.0) {
        return Ok(0.0);
    }
    let forbidden = -(4f64.cbrt());
    let (lo, hi) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
    if hi >= forbidden && lo <= 0.0 {
        return Err(Error::DomainError(format!(
            "integration interval [{lo}, {hi}] meets [-4^(1/3), 0] where sqrt(x^4 + 4x) is not real"
        )));
    }
    let pref = 1.5 * phi * phi * (p * ab[0] - pbar * ab[1]).powi(2);
    let integral = integrate(
        |x| {
            let r = (x * x * x * x + 4.0 * x).sqrt();
            let d = x / p - printed_qbar(x) / pbar;
            1.0 / (r * d * d)
        },
        x0,
        x1,
        cfg,
    )?;
    Ok(pref * integral)
}

/// Pencil integral from vertex `a`:
/// `|3/2 ∫ s(q)² / sqrt(q⁴ + 4q) dq|` with `s(q) = s*[A,B] (d1 p̄ - d2 p) / (q p̄ - q̄ p)`,
/// `d` the directors of `[A,B]` and `(p, p̄)` those of `[B,C]`.
///
/// Valid when the directors of `[A,B]` and `[A,C]` have positive first two
/// components and `s*` of equal sign, so the pencil stays on one principal
/// branch; otherwise `DomainError`.
pub fn tringle_pencil(a: &Poly3, b: &Poly3, c: &Poly3, cfg: &QuadratureCfg) -> Result<f64> {
    let ab = directors(a, b)?;
    let ac = directors(a, c)?;
    let bc = directors(b, c)?;
    let principal = |q: &[f64; 3]| q[0] > 0.0 && q[1] > 0.0;
    if !principal(&ab.q) || !principal(&ac.q) || ab.s_star.signum() != ac.s_star.signum() {
        return Err(Error::DomainError("edges from the vertex leave the principal branch".into()));
    }
    let (p, pbar) = (bc.q[0], bc.q[1]);
    let (d1, d2) = (ab.q[0], ab.q[1]);
    let v = integrate_gk_with(
        |q| {
            let qbar = q2_principal(q)?;
            let s = s_of_q(q, qbar, ab.s_star, (p, pbar), (d1, d2))?;
            Ok(s * s / (q * q * q * q + 4.0 * q).sqrt())
        },
        ab.q[0],
        ac.q[0],
        cfg,
    )?;
    Ok((1.5 * v).abs())
}

/// Which collinearity the additivity check used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdditivityVariant {
    /// `a, c, d` collinear: `Σ(ABC) + Σ(BCD) - Σ(ABD)`.
    Ac,
    /// `a, b, d` collinear: `Σ(ABC) + Σ(BCD) - Σ(ACD)`.
    Ab,
}

fn collinear(a: &Poly3, b: &Poly3, c: &Poly3) -> Result<Option<f64>> {
    match coplanarity_residual(a, b, c) {
        Ok(r) => Ok(Some(r)),
        Err(Error::DegeneratePair) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Additivity residual of the tringle for a fourth vector `d` on the
/// extension of edge `ac` or `ab`.
pub fn check_tringle_additivity_variant(
    a: &Poly3,
    b: &Poly3,
    c: &Poly3,
    d: &Poly3,
) -> Result<(f64, AdditivityVariant)> {
    let r_ac = collinear(a, c, d)?;
    let r_ab = collinear(a, b, d)?;
    let abc_bcd = tringle(a, b, c)? + tringle(b, c, d)?;
    match (r_ac, r_ab) {
        (Some(r), _) if r <= COPLANAR_TOL => Ok((abc_bcd - tringle(a, b, d)?, AdditivityVariant::Ac)),
        (_, Some(r)) if r <= COPLANAR_TOL => Ok((abc_bcd - tringle(a, c, d)?, AdditivityVariant::Ab)),
        _ => Err(Error::NotCoplanar(r_ac.into_iter().chain(r_ab).fold(f64::INFINITY, f64::min))),
    }
}

pub fn check_tringle_additivity(a: &Poly3, b: &Poly3, c: &Poly3, d: &Poly3) -> Result<f64> {
    check_tringle_additivity_variant(a, b, c, d).map(|(r, _)| r)
}

/// Outcome of comparing the closed formula with the definitional tringle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
}

/// Relative difference at or below which the closed formula counts as agreeing.
pub const AGREE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct TringleComparison {
    pub inputs: [Poly3; 3],
    pub definitional: f64,
    /// Signed value of the printed closed formula, if it could be evaluated.
    pub closed: Option<f64>,
    /// Corrected pencil integral, when some vertex admits it.
    pub pencil: Option<f64>,
    /// `| |closed| - definitional | / definitional`.
    pub rel_diff: Option<f64>,
    pub class: Agreement,
    pub note: Option<String>,
}

fn rel_diff(value: f64, reference: f64) -> f64 {
    let d = (value - reference).abs();
    if reference == 0.0 {
        d
    } else {
        d / reference
    }
}

/// Pencil integral from the first vertex and coordinate order that admits it.
pub fn tringle_pencil_any(a: &Poly3, b: &Poly3, c: &Poly3, cfg: &QuadratureCfg) -> Option<f64> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
    let vertices = [(a, b, c), (b, c, a), (c, a, b)];
    for perm in PERMS {
        for (x, y, z) in vertices {
            if let Ok(v) = tringle_pencil(&x.permute(perm), &y.permute(perm), &z.permute(perm), cfg) {
                return Some(v);
            }
        }
    }
    None
}

/// Evaluates the closed formula against the shoelace tringle for one triangle.
pub fn compare_closed(a: &Poly3, b: &Poly3, c: &Poly3, cfg: &QuadratureCfg) -> Result<TringleComparison> {
    let definitional = tringle(a, b, c)?;
    let pencil = tringle_pencil_any(a, b, c, cfg);
    let (closed, note) = match tringle_closed(a, b, c, cfg) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(format!("{}: {e}", e.kind()))),
    };
    let rel = closed.map(|v| rel_diff(v.abs(), definitional));
    let class = match rel {
        Some(r) if r <= AGREE_TOL => Agreement::Agree,
        _ => Agreement::Disagree,
    };
    Ok(TringleComparison { inputs: [*a, *b, *c], definitional, closed, pencil, rel_diff: rel, class, note })
}
