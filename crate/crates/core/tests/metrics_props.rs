mod common;

use std::f64::consts::PI;

use imagearc::geodesics::{adaptive_integrate, QuadConfig};
use imagearc::maps::MapExpr;
use imagearc::metrics::{chordal, density, deriv_norm, distance, MetricId, MobiusTransform, SpherePoint};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn q() -> QuadConfig {
    QuadConfig::new(1e-13, 1e-12, 40).unwrap()
}

/// Length of `t ↦ T(γ(t))` in `metric`, where `γ` is the straight segment
/// from `a` to `b`.
fn path_length(metric: MetricId, t: &MobiusTransform, a: Complex64, b: Complex64) -> f64 {
    let d = t.determinant();
    adaptive_integrate(
        |s| {
            let z = a + (b - a) * s;
            let den = t.c * z + t.d;
            let w = t.apply(z.into());
            density(metric, w).unwrap() * (d / (den * den)).norm() * (b - a).norm()
        },
        0.0,
        1.0,
        &q(),
    )
    .unwrap()
    .value
}

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.9f64, 0.0..(2.0 * PI)).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn disc_distance_matches_density_along_moved_radius(z0 in disc_point(), theta in 0.0..(2.0 * PI), r in 0.01..0.95f64) {
        let t = MobiusTransform::disc_automorphism(z0, 1.0).unwrap();
        let end = Complex64::from_polar(r, theta);
        let quad = path_length(MetricId::HyperbolicDisc, &t, c(0.0, 0.0), end);
        let exact = distance(MetricId::HyperbolicDisc, t.apply(c(0.0, 0.0).into()), t.apply(end.into())).unwrap();
        prop_assert!((quad - exact).abs() <= 1e-9 * exact.max(1.0), "{quad} vs {exact}");
    }

    #[test]
    fn half_plane_vertical_lines(x in -5.0..5.0f64, a in 0.01..10.0f64, b in 0.01..10.0f64) {
        let quad = path_length(MetricId::HyperbolicHalfPlane, &MobiusTransform::identity(), c(x, a), c(x, b));
        let exact = distance(MetricId::HyperbolicHalfPlane, c(x, a).into(), c(x, b).into()).unwrap();
        prop_assert!((quad - exact).abs() <= 1e-9 * exact.max(1.0));
        prop_assert!((exact - (b / a).ln().abs()).abs() <= 1e-12 * exact.max(1.0));
    }

    #[test]
    fn half_plane_orthogonal_circles(x0 in -3.0..3.0f64, radius in 0.1..5.0f64, t0 in 0.05..3.0f64, t1 in 0.05..3.0f64) {
        // the half circle |z − x0| = radius, parametrized by angle
        let pt = |t: f64| c(x0, 0.0) + Complex64::from_polar(radius, t);
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        let quad = adaptive_integrate(|t| radius / pt(t).im, lo, hi, &q()).unwrap().value;
        let exact = distance(MetricId::HyperbolicHalfPlane, pt(lo).into(), pt(hi).into()).unwrap();
        prop_assert!((quad - exact).abs() <= 1e-9 * exact.max(1.0), "{quad} vs {exact}");
    }

    #[test]
    fn sphere_distance_along_rotated_meridian(w in disc_point(), phi in 0.0..(2.0 * PI), r in 0.0..20.0f64) {
        // z ↦ (z + w)/(1 − conj(w) z) is a rotation of the sphere
        let t = MobiusTransform::new(c(1.0, 0.0), w, -w.conj(), c(1.0, 0.0)).unwrap();
        let dir = Complex64::from_polar(1.0, phi);
        let quad = path_length(MetricId::Spherical, &t, c(0.0, 0.0), dir * r);
        let exact = distance(MetricId::Spherical, t.apply(c(0.0, 0.0).into()), t.apply((dir * r).into())).unwrap();
        prop_assert!((quad - exact).abs() <= 1e-9 * exact.max(1.0), "{quad} vs {exact}");
        prop_assert!((exact - 2.0 * r.atan()).abs() <= 1e-12);
    }

    #[test]
    fn euclidean_lines(a in (-10.0..10.0f64, -10.0..10.0f64), b in (-10.0..10.0f64, -10.0..10.0f64)) {
        let (a, b) = (c(a.0, a.1), c(b.0, b.1));
        let quad = path_length(MetricId::Euclidean, &MobiusTransform::identity(), a, b);
        prop_assert!((quad - (a - b).norm()).abs() <= 1e-10 * quad.max(1.0));
    }

    #[test]
    fn chordal_is_twice_sine_of_half_distance(a in (-50.0..50.0f64, -50.0..50.0f64), b in (-50.0..50.0f64, -50.0..50.0f64), inf in any::<bool>()) {
        let p = SpherePoint::Finite(c(a.0, a.1));
        let q = if inf { SpherePoint::Infinity } else { SpherePoint::Finite(c(b.0, b.1)) };
        let d = distance(MetricId::Spherical, p, q).unwrap();
        prop_assert!((chordal(p, q) - 2.0 * (0.5 * d).sin()).abs() <= 1e-13);
    }

    #[test]
    fn deriv_norm_invariant_under_disc_automorphisms(seed in any::<u64>(), z in disc_point(), z0 in disc_point(), phi in 0.0..(2.0 * PI)) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let f = common::tame_tree(&mut rng, 2);
        prop_assume!(f.domain() == MetricId::HyperbolicDisc);
        let rot = MobiusTransform::new(Complex64::from_polar(1.0, phi), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let t = MobiusTransform::disc_automorphism(z0, 1.0).unwrap().compose(&rot);
        let g = f.clone().compose(MapExpr::mobius(t)).unwrap();
        let w = t.apply(z.into()).finite().unwrap();
        for target in [MetricId::Spherical, f.codomain()] {
            let (Ok(lhs), Ok(rhs)) = (deriv_norm(&g, z, target), deriv_norm(&f, w, target)) else { continue };
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0), "{target:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn cayley_is_an_isometry(x in -20.0..20.0f64, y in 0.01..20.0f64, z in disc_point()) {
        let n = deriv_norm(&MapExpr::cayley(), c(x, y), MetricId::HyperbolicDisc).unwrap();
        prop_assert!((n - 1.0).abs() <= 1e-12);
        let n = deriv_norm(&MapExpr::inverse_cayley(), z, MetricId::HyperbolicHalfPlane).unwrap();
        prop_assert!((n - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn distances_to_infinity_on_the_sphere() {
    let d = distance(MetricId::Spherical, SpherePoint::Finite(c(0.0, 0.0)), SpherePoint::Infinity).unwrap();
    assert!((d - PI).abs() < 1e-15);
    assert!((chordal(SpherePoint::Finite(c(0.0, 0.0)), SpherePoint::Infinity) - 2.0).abs() < 1e-15);
}
