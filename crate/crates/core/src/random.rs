//! Seeded generators of random test configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bispace::{bm_norm_flat, BingleVec};
use crate::geodesic::{Geodesic, UnitPoint};
use crate::poly::Poly3;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// First-octant vector with log-components uniform in `[-spread, spread]`.
pub fn first_octant<R: Rng>(rng: &mut R, spread: f64) -> Poly3 {
    Poly3([0; 3].map(|_| rng.random_range(-spread..=spread).exp()))
}

/// Non-degenerate vector with random signs and magnitudes in `[e^-spread, e^spread]`.
pub fn nondegenerate<R: Rng>(rng: &mut R, spread: f64) -> Poly3 {
    let a = first_octant(rng, spread);
    Poly3(a.0.map(|c| if rng.random_bool(0.5) { c } else { -c }))
}

/// Trace-free triple with components of magnitude up to about `spread`.
pub fn bingle_vec<R: Rng>(rng: &mut R, spread: f64) -> BingleVec {
    BingleVec::from_free([0; 3].map(|_| rng.random_range(-spread..=spread)))
}

/// Componentwise scaling with unit product.
pub fn unimodular<R: Rng>(rng: &mut R, spread: f64) -> Poly3 {
    Poly3(bingle_vec(rng, spread).components().map(f64::exp))
}

pub fn unit_point<R: Rng>(rng: &mut R, spread: f64) -> UnitPoint {
    let u1 = rng.random_range(-spread..=spread);
    let u2 = rng.random_range(-spread..=spread);
    UnitPoint::from_log_chart(u1, u2).expect("finite log coordinates")
}

/// Extremal with a uniformly random direction in the log chart, on any branch.
///
/// Directions close to the null lines are rejected so that `|qi| <= max_q`.
pub fn geodesic<R: Rng>(rng: &mut R, spread: f64, max_q: f64) -> Geodesic {
    let base = unit_point(rng, spread);
    loop {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let (l1, l2) = (theta.cos(), theta.sin());
        let s = (l1 * l2 * (l1 + l2)).cbrt();
        let (q1, q2) = (l1 / s, l2 / s);
        if s != 0.0 && q1.abs().max(q2.abs()).max((q1 + q2).abs()) <= max_q {
            let (a1, a2) = base.chart();
            return Geodesic::new(a1, a2, q1, q2).expect("constraint holds by construction");
        }
    }
}

/// Triangle whose vertices lie within `spread` in the log chart, with every
/// edge bingle at most `max_edge` and area at least `min_area`.
pub fn triangle<R: Rng>(rng: &mut R, spread: f64, max_edge: f64, min_area: f64) -> [Poly3; 3] {
    loop {
        let u = [0; 3].map(|_| {
            let p = unit_point(rng, spread).components();
            [p[0].ln(), p[1].ln()]
        });
        let edge = |i: usize, j: usize| {
            let d = [u[i][0] - u[j][0], u[i][1] - u[j][1]];
            bm_norm_flat(&BingleVec::from_free([d[0], d[1], -d[0] - d[1]]))
        };
        let area = 0.5 * ((u[1][0] - u[0][0]) * (u[2][1] - u[0][1]) - (u[2][0] - u[0][0]) * (u[1][1] - u[0][1])).abs();
        if edge(0, 1) <= max_edge && edge(1, 2) <= max_edge && edge(0, 2) <= max_edge && area >= min_area {
            return u.map(|[a, b]| Poly3::new(a, b, -a - b).exp());
        }
    }
}
