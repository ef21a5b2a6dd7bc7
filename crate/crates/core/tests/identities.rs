use bm3_core::bingles::{
    bingle_chart, bingle_from_invariants, check_additivity, invariants, reciprocal_bingle, xi_from_invariants,
};
use bm3_core::bispace::{biproject, bm_norm_flat, homothety_to_translation, reconstruct};
use bm3_core::geodesic::Sign;
use bm3_core::geodesic::{geodesic_between, geodesic_eval, intersect, q2_principal, Geodesic, Intersection, UnitPoint};
use bm3_core::poly::{scalar3, Conjugation, Poly3};
use bm3_core::quad::QuadratureCfg;
use bm3_core::relative::{cfh_triple_from_pair, circle_point, directors, psi, trig, Component};
use bm3_core::sampling::sample_geodesic;
use bm3_core::selftest::{separation_conditioning, WELL_CONDITIONED};
use bm3_core::tringle::{check_tringle_additivity, induced_cubic_form, relative_scalar_v, tringle};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn positive() -> impl Strategy<Value = Poly3> {
    [-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64].prop_map(|u| Poly3(u.map(f64::exp)))
}

fn nondegenerate() -> impl Strategy<Value = Poly3> {
    (positive(), [any::<bool>(), any::<bool>(), any::<bool>()])
        .prop_map(|(a, s)| Poly3([0, 1, 2].map(|i| if s[i] { a[i] } else { -a[i] })))
}

fn unimodular() -> impl Strategy<Value = Poly3> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(t1, t2)| Poly3::new(t1, t2, -t1 - t2).exp())
}

/// Extremal through a point near `(1,1,1)` with a random direction, away from the null lines.
fn geodesic() -> impl Strategy<Value = Geodesic> {
    (-1.0..1.0f64, -1.0..1.0f64, 0.0..std::f64::consts::TAU).prop_filter_map(
        "direction too close to a null line",
        |(u1, u2, theta)| {
            let (l1, l2) = (theta.cos(), theta.sin());
            let s = (l1 * l2 * (l1 + l2)).cbrt();
            let (q1, q2) = (l1 / s, l2 / s);
            if s == 0.0 || q1.abs().max(q2.abs()).max((q1 + q2).abs()) > 5.0 {
                return None;
            }
            let (a1, a2) = UnitPoint::from_log_chart(u1, u2).ok()?.chart();
            Geodesic::new(a1, a2, q1, q2).ok()
        },
    )
}

/// Log-chart triangle with area bounded away from zero.
fn triangle() -> impl Strategy<Value = [Poly3; 3]> {
    [[-1.5..1.5f64, -1.5..1.5f64], [-1.5..1.5f64, -1.5..1.5f64], [-1.5..1.5f64, -1.5..1.5f64]]
        .prop_filter("nearly degenerate", |u| {
            ((u[1][0] - u[0][0]) * (u[2][1] - u[0][1]) - (u[2][0] - u[0][0]) * (u[1][1] - u[0][1])).abs() > 1e-3
        })
        .prop_map(|u| u.map(|[a, b]| Poly3::new(a, b, -a - b).exp()))
}

proptest! {
    #[test]
    fn product_commutes_and_associates(a in nondegenerate(), b in nondegenerate(), c in nondegenerate()) {
        prop_assert_eq!(a * b, b * a);
        let (l, r) = ((a * b) * c, a * (b * c));
        for i in 0..3 {
            prop_assert!(rel(l[i], r[i]) <= 1e-12);
        }
    }

    #[test]
    fn division_undoes_product(a in nondegenerate(), b in nondegenerate()) {
        let back = (a * b).div(&b).unwrap();
        for i in 0..3 {
            prop_assert!(rel(back[i], a[i]) <= 1e-15);
        }
    }

    #[test]
    fn norm_is_multiplicative(a in nondegenerate(), b in nondegenerate()) {
        prop_assert!(rel((a * b).norm(), a.norm() * b.norm()) <= 1e-12);
    }

    #[test]
    fn permanent_is_symmetric(a in nondegenerate(), b in nondegenerate(), c in nondegenerate()) {
        let s = scalar3(&a, &b, &c);
        for v in [scalar3(&a, &c, &b), scalar3(&b, &a, &c), scalar3(&b, &c, &a), scalar3(&c, &a, &b), scalar3(&c, &b, &a)] {
            prop_assert_eq!(v, s);
        }
    }

    #[test]
    fn conjugation_is_an_automorphism(a in nondegenerate(), b in nondegenerate()) {
        for k in [Conjugation::Dagger, Conjugation::Ddagger] {
            prop_assert_eq!((a * b).conj(k), a.conj(k) * b.conj(k));
        }
        let p = a * a.conj(Conjugation::Dagger) * a.conj(Conjugation::Ddagger);
        prop_assert!(rel(p[1], p[0]) <= 1e-12 && rel(p[2], p[0]) <= 1e-12);
    }

    #[test]
    fn biprojection_forgets_the_ray(a in positive(), t in -5.0..5.0f64) {
        let u = biproject(&a).unwrap();
        let v = biproject(&a.scale(t.exp())).unwrap();
        prop_assert!(u.trace().abs() <= 1e-12);
        for (x, y) in u.components().iter().zip(v.components()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        prop_assert_eq!(homothety_to_translation(&a).unwrap(), u);
    }

    #[test]
    fn binary_scaling_is_exact(a in positive(), k in -40i32..40) {
        prop_assert_eq!(biproject(&a.scale(2f64.powi(k))).unwrap(), biproject(&a).unwrap());
    }

    #[test]
    fn reconstruct_inverts_biprojection(a in positive()) {
        let back = reconstruct(a.norm(), &biproject(&a).unwrap()).unwrap();
        for i in 0..3 {
            prop_assert!(rel(back[i], a[i]) <= 1e-10);
        }
    }

    #[test]
    fn principal_exponent_satisfies_constraint(t in -3.0..3.0f64) {
        let q1 = 10f64.powf(t);
        let q2 = q2_principal(q1).unwrap();
        prop_assert!(q2 > 0.0);
        prop_assert!((q1 * q2 * (q1 + q2) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn extremal_stays_on_indicatrix(g in geodesic(), s in -4.0..4.0f64) {
        let [x1, x2, x3] = geodesic_eval(&g, s).components();
        prop_assert!((x1 * x2 * x3 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn between_recovers_parameter(g in geodesic(), s in 0.05..3.0f64, flip in any::<bool>()) {
        let s = if flip { -s } else { s };
        let (_, s_star) = geodesic_between(&g.base(), &geodesic_eval(&g, s)).unwrap();
        prop_assert!((s_star - s).abs() <= 1e-10);
    }

    #[test]
    fn same_exponents_never_meet(g in geodesic(), s in -2.0..2.0f64, k in 0.05..1.0f64) {
        let (q1, q2) = g.exponents();
        let [x1, x2, _] = geodesic_eval(&g, s).components();
        let p = UnitPoint::from_log_chart(x1.ln() - k * q2, x2.ln() + k * q1).unwrap();
        let (a1, a2) = p.chart();
        let h = Geodesic::new(a1, a2, q1, q2).unwrap();
        prop_assert_eq!(intersect(&g, &h), Intersection::Parallel);
    }

    #[test]
    fn distinct_exponents_meet_on_both(g in geodesic(), h in geodesic()) {
        if let Intersection::Point { s } = intersect(&g, &h) {
            // meeting point in log coordinates, which stay finite when the point itself overflows
            let [g1, g2, _] = g.base().components();
            let (q1, q2) = g.exponents();
            let (m1, m2) = (g1.ln() + s * q1, g2.ln() + s * q2);
            let [h1, h2, _] = h.base().components();
            let (p1, p2) = h.exponents();
            let (d1, d2) = (m1 - h1.ln(), m2 - h2.ln());
            prop_assert!((d1 * p2 - d2 * p1).abs() <= 1e-9 * (1.0 + d1.hypot(d2)) * p1.hypot(p2));
        }
    }

    #[test]
    fn bingle_is_conformal(a in positive(), b in positive(), l in -5.0..5.0f64, m in -5.0..5.0f64) {
        let phi = reciprocal_bingle(&a, &b).unwrap();
        prop_assert!((reciprocal_bingle(&a.scale(l.exp()), &b.scale(m.exp())).unwrap() - phi).abs() <= 1e-12);
        prop_assert_eq!(phi, bm_norm_flat(&(biproject(&a).unwrap() - biproject(&b).unwrap())));
        prop_assert!((reciprocal_bingle(&b, &a).unwrap() - phi).abs() <= 1e-15);
    }

    #[test]
    fn bingle_survives_unimodular_dilation(a in positive(), b in positive(), s in unimodular()) {
        let phi = reciprocal_bingle(&a, &b).unwrap();
        prop_assert!((reciprocal_bingle(&(s * a), &(s * b)).unwrap() - phi).abs() <= 1e-12);
    }

    #[test]
    fn chart_bingle_matches(a in positive(), b in positive()) {
        let phi = reciprocal_bingle(&a, &b).unwrap();
        let chart = bingle_chart(&a, &b).unwrap().abs();
        prop_assert!((chart - phi).abs() <= 1e-12);
        if separation_conditioning(&a, &b) >= WELL_CONDITIONED {
            prop_assert!(rel(chart, phi) <= 1e-12);
        }
    }

    #[test]
    fn bingle_measures_arclength(g in geodesic(), s in -3.0..3.0f64) {
        let phi = reciprocal_bingle(&g.base().to_poly(), &geodesic_eval(&g, s).to_poly()).unwrap();
        prop_assert!((phi - s.abs()).abs() <= 1e-9);
    }

    #[test]
    fn bingles_add_along_extremals(g in geodesic(), mut s in [-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64]) {
        s.sort_by(f64::total_cmp);
        let [a, b, c] = s.map(|t| geodesic_eval(&g, t).to_poly());
        prop_assert!(check_additivity(&a, &b, &c).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn invariants_recover_ratios(a in positive(), b in positive()) {
        let inv = invariants(&a, &b).unwrap();
        let mut xi = [0, 1, 2].map(|i| b[i] / a[i]);
        xi.sort_by(f64::total_cmp);
        let back = xi_from_invariants(&inv).unwrap();
        for i in 0..3 {
            prop_assert!(rel(back[i], xi[i]) <= 1e-9);
        }
        prop_assert!((bingle_from_invariants(&inv).unwrap() - reciprocal_bingle(&a, &b).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn directors_sum_to_zero_with_product_minus_one(a in positive(), b in positive()) {
        prop_assume!(reciprocal_bingle(&a, &b).unwrap() > 1e-6);
        let d = directors(&a, &b).unwrap();
        prop_assert!((d.q.iter().sum::<f64>()).abs() <= 1e-10);
        prop_assert!((d.q[0] * d.q[1] * d.q[2] + 1.0).abs() <= 1e-10);
    }

    #[test]
    fn trigonometric_identities(a in positive(), b in positive()) {
        prop_assume!(reciprocal_bingle(&a, &b).unwrap() > 1e-6);
        let c = cfh_triple_from_pair(&a, &b).unwrap();
        let t = trig(c[0], c[1], c[2]).unwrap();
        let prod = |x: [f64; 3]| x[0] * x[1] * x[2];
        for p in [prod(t.cfh), prod(t.sfh), prod(t.tfh), prod(t.ctfh)] {
            prop_assert!((p - 1.0).abs() <= 1e-12);
        }
        for i in 0..3 {
            prop_assert!((t.sfh[i] * t.cfh[i] - 1.0).abs() <= 1e-12);
            prop_assert!((t.cfh[i] * t.cfh[i] * t.tfh[i] - 1.0).abs() <= 1e-12);
            prop_assert!((t.sfh[i] * t.sfh[i] * t.ctfh[i] - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn tringle_symmetries(t in triangle(), s in unimodular(), k in [-30i32..30, -30i32..30, -30i32..30]) {
        let [a, b, c] = t;
        let v = tringle(&a, &b, &c).unwrap();
        prop_assert_eq!(tringle(&b, &c, &a).unwrap(), v);
        prop_assert_eq!(tringle(&c, &a, &b).unwrap(), v);
        prop_assert_eq!(tringle(&b, &a, &c).unwrap(), v);
        let scaled = [a, b, c].iter().zip(k).map(|(p, e)| p.scale(2f64.powi(e))).collect::<Vec<_>>();
        prop_assert_eq!(tringle(&scaled[0], &scaled[1], &scaled[2]).unwrap(), v);
        prop_assert!((tringle(&(s * a), &(s * b), &(s * c)).unwrap() - v).abs() <= 1e-12);
    }

    #[test]
    fn tringle_adds_over_a_split_edge(t in triangle(), x in 1.1..2.5f64) {
        let [a, b, c] = t;
        let (ua, uc) = (a.ln().unwrap(), c.ln().unwrap());
        let d = Poly3([0, 1, 2].map(|i| (ua[i] + x * (uc[i] - ua[i])).exp()));
        prop_assert!(check_tringle_additivity(&a, &b, &c, &d).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn collinear_tringle_vanishes(g in geodesic(), s in [-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64]) {
        let [a, b, c] = s.map(|t| geodesic_eval(&g, t).to_poly());
        prop_assert!(tringle(&a, &b, &c).unwrap() <= 1e-12);
    }

    #[test]
    fn volume_scalar_scales_inversely(u1 in -3.0..3.0f64, u2 in -3.0..3.0f64) {
        let [x1, x2, _] = UnitPoint::from_log_chart(u1, u2).unwrap().components();
        let v = relative_scalar_v(&induced_cubic_form(x1, x2)) * x1 * x2;
        prop_assert!(rel(v, 9f64.powf(-1.0 / 3.0)) <= 1e-12);
    }

    #[test]
    fn sampled_rows_hit_the_ends(g in geodesic(), s0 in -3.0..0.0f64, s1 in 0.0..3.0f64, n in 2usize..40) {
        let rows = sample_geodesic(&g, s0, s1, n, false).unwrap();
        prop_assert_eq!(rows.len(), n);
        prop_assert_eq!(rows[0][0], s0);
        prop_assert_eq!(rows[n - 1][0], s1);
        for r in rows {
            prop_assert!((r[1] * r[2] * r[3] - 1.0).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relative_bingle_is_conformal(a in positive(), b in positive(), l in -5.0..5.0f64, m in -5.0..5.0f64) {
        let cfg = QuadratureCfg::default();
        prop_assume!(reciprocal_bingle(&a, &b).unwrap() > 1e-3);
        if let Ok(x) = psi(&a, &b, &cfg) {
            let y = psi(&a.scale(l.exp()), &b.scale(m.exp()), &cfg).unwrap();
            prop_assert_eq!(x.component, y.component);
            prop_assert!((x.value - y.value).abs() <= 1e-9);
        }
    }

    #[test]
    fn circle_points_are_read_back(index in 1u8..=3, plus in any::<bool>(), t in -2.0..2.5f64) {
        let xi = t.exp();
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let component = Component { index, sign };
        let p = circle_point(component, xi).unwrap();
        prop_assert!((reciprocal_bingle(&Poly3::ONE, &p.to_poly()).unwrap() - 1.0).abs() <= 1e-12);
        let r = psi(&Poly3::ONE, &p.to_poly(), &QuadratureCfg::default()).unwrap();
        prop_assert_eq!(r.component, component);
        prop_assert!(rel(r.param, xi) <= 1e-12);
    }
}
