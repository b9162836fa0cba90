mod common;

use std::f64::consts::PI;

use imagearc::geodesics::{area, arc_length, arc_length_between, length_profile, QuadConfig, RadialArc};
use imagearc::maps::MapExpr;
use imagearc::metrics::{MetricId, MobiusTransform};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn disc_self_map(zeros: &[(f64, f64)], centre: (f64, f64)) -> MapExpr {
    let b = MapExpr::blaschke_disc(zeros.iter().map(|(r, t)| Complex64::from_polar(*r, *t)).collect()).unwrap();
    let t = MobiusTransform::disc_automorphism(Complex64::from_polar(centre.0, centre.1), 1.0).unwrap();
    MapExpr::mobius(t).compose(b).unwrap()
}

fn zeros() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..0.9f64, 0.0..(2.0 * PI)), 1..4)
}

fn centre() -> impl Strategy<Value = (f64, f64)> {
    (0.0..0.8f64, 0.0..(2.0 * PI))
}

fn rotation(phi: f64) -> MapExpr {
    MapExpr::scale(Complex64::from_polar(1.0, phi)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn length_is_additive(z in zeros(), w in centre(), theta in 0.0..(2.0 * PI), r1 in 0.1..4.0f64, r2 in 0.1..4.0f64) {
        let f = disc_self_map(&z, w);
        let q = QuadConfig::lengths();
        let arc = RadialArc::disc(theta, r1 + r2).unwrap();
        for target in [MetricId::HyperbolicDisc, MetricId::Spherical, MetricId::Euclidean] {
            let whole = arc_length(&f, &arc, target, &q).unwrap();
            let first = arc_length(&f, &arc.with_rho_max(r1).unwrap(), target, &q).unwrap();
            let rest = arc_length_between(&f, &arc, r1, r1 + r2, target, &q).unwrap();
            prop_assert!((first + rest - whole).abs() <= 1e-8 * whole.max(1.0), "{target:?}: {first} + {rest} vs {whole}");
        }
    }

    #[test]
    fn disc_self_maps_contract(z in zeros(), w in centre(), theta in 0.0..(2.0 * PI), rho in 0.1..8.0f64) {
        let f = disc_self_map(&z, w);
        let q = QuadConfig::lengths();
        let l = arc_length(&f, &RadialArc::disc(theta, rho).unwrap(), MetricId::HyperbolicDisc, &q).unwrap();
        prop_assert!(l <= rho * (1.0 + 1e-9), "{l} > {rho}");
        let a = area(&f, rho.min(4.0), MetricId::HyperbolicDisc, &QuadConfig::areas()).unwrap().value;
        let ball = 4.0 * PI * (0.5 * rho.min(4.0)).sinh().powi(2);
        prop_assert!(a <= ball * (1.0 + 1e-7), "{a} > {ball}");
    }

    #[test]
    fn profiles_are_nondecreasing(seed in any::<u64>(), theta in 0.0..(2.0 * PI)) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = common::tame_tree(&mut rng, 2);
        let arc = match f.domain() {
            MetricId::HyperbolicDisc => RadialArc::disc(theta, 6.0).unwrap(),
            _ => RadialArc::half_plane(c(theta - PI, 0.0), 6.0).unwrap(),
        };
        let rhos: Vec<f64> = (1..=12).map(|k| 0.5 * k as f64).collect();
        if let Ok(samples) = length_profile(&f, &arc, &rhos, MetricId::Spherical, &QuadConfig::lengths()) {
            prop_assert!(samples.windows(2).all(|p| p[0].length <= p[1].length));
            prop_assert!(samples[0].length >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn area_is_rotation_invariant(z in zeros(), w in centre(), phi in 0.0..(2.0 * PI), rho in 0.5..4.0f64) {
        let f = disc_self_map(&z, w);
        let g = f.clone().compose(rotation(phi)).unwrap();
        let q = QuadConfig::new(1e-11, 1e-11, 40).unwrap();
        for target in [MetricId::HyperbolicDisc, MetricId::Spherical] {
            let a = area(&f, rho, target, &q).unwrap().value;
            let b = area(&g, rho, target, &q).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-8 * a.max(1.0), "{target:?}: {a} vs {b}");
        }
    }

    #[test]
    fn area_is_monotone_in_rho(z in zeros(), w in centre(), r1 in 0.2..3.0f64, dr in 0.01..2.0f64) {
        let f = disc_self_map(&z, w);
        let q = QuadConfig::areas();
        for target in [MetricId::HyperbolicDisc, MetricId::Spherical, MetricId::Euclidean] {
            let a = area(&f, r1, target, &q).unwrap().value;
            let b = area(&f, r1 + dr, target, &q).unwrap().value;
            prop_assert!(a <= b, "{target:?}: A({r1}) = {a} > A({}) = {b}", r1 + dr);
        }
    }
}

#[test]
fn half_plane_rays_see_the_same_lengths_after_cayley() {
    // a ray of the half-plane through i is carried by the Cayley map onto a
    // disc radius, and lengths are isometry invariant
    let f = MapExpr::blaschke_disc(vec![c(0.3, 0.4), c(-0.5, 0.1)]).unwrap();
    let g = f.clone().compose(MapExpr::cayley()).unwrap();
    let q = QuadConfig::lengths();
    let disc = arc_length(&f, &RadialArc::disc(0.0, 5.0).unwrap(), MetricId::Spherical, &q).unwrap();
    let hp = arc_length(&g, &RadialArc::half_plane(c(0.0, 0.0), 5.0).unwrap(), MetricId::Spherical, &q).unwrap();
    assert!((disc - hp).abs() < 1e-8, "{disc} vs {hp}");
}
