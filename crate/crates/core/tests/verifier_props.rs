mod common;

use std::f64::consts::PI;

use imagearc::geodesics::{GrowthSample, QuadConfig};
use imagearc::maps::MapExpr;
use imagearc::metrics::MetricId;
use imagearc::verifier::{
    check_area_derivative_bound, check_localized_bound, check_spherical_bound, growth_fit, probe_grid,
    scenario_annulus, scenario_symmetric_blaschke, GrowthModel,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn rotation(k: u32) -> MapExpr {
    MapExpr::scale(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 64.0)).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..6)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn area_derivative_bound_is_rotation_invariant(a in coeffs(), k in 0u32..64) {
        let f = MapExpr::power_series(a).unwrap();
        let g = f.clone().compose(rotation(k)).unwrap();
        let grid = probe_grid(8, 64, 6.0);
        let q = QuadConfig::areas();
        let rf = check_area_derivative_bound(&f, MetricId::Euclidean, &grid, &q).unwrap();
        let rg = check_area_derivative_bound(&g, MetricId::Euclidean, &grid, &q).unwrap();
        prop_assert_eq!(rf.status, rg.status);
        prop_assert!(close(rf.worst_ratio, rg.worst_ratio, 1e-9), "{} vs {}", rf.worst_ratio, rg.worst_ratio);
    }

    #[test]
    fn verdicts_are_deterministic(a in coeffs(), z0 in (0.0..0.8f64, 0.0..(2.0 * PI)), delta in 0.2..3.0f64) {
        let f = MapExpr::power_series(a).unwrap();
        let z0 = Complex64::from_polar(z0.0, z0.1);
        let q = QuadConfig::lengths();
        let first = check_localized_bound(&f, z0, delta, &q).unwrap();
        let second = check_localized_bound(&f, z0, delta, &q).unwrap();
        prop_assert_eq!(first.line(), second.line());
        prop_assert_eq!(first, second);
    }

    #[test]
    fn power_laws_are_recovered(alpha in -3.0..3.0f64, c in 0.01..100.0f64, rho0 in 0.1..5.0f64, n in 4usize..50) {
        let samples: Vec<GrowthSample> =
            (0..n).map(|k| rho0 * (1.0 + k as f64)).map(|rho| GrowthSample { rho, length: c * rho.powf(alpha) }).collect();
        let fit = growth_fit(&samples, GrowthModel::PowerLaw).unwrap();
        prop_assert!((fit.exponent - alpha).abs() <= 1e-6, "{} vs {alpha}", fit.exponent);
        prop_assert!((fit.constant - c.ln()).abs() <= 1e-6);
        prop_assert!(fit.residual <= 1e-6);
    }

    #[test]
    fn exponentials_are_recovered(beta in -2.0..2.0f64, c in 0.01..100.0f64, n in 4usize..50) {
        let samples: Vec<GrowthSample> =
            (1..=n).map(|k| 0.5 * k as f64).map(|rho| GrowthSample { rho, length: c * (beta * rho).exp() }).collect();
        let fit = growth_fit(&samples, GrowthModel::Exponential).unwrap();
        prop_assert!((fit.exponent - beta).abs() <= 1e-6, "{} vs {beta}", fit.exponent);
        prop_assert!(fit.residual <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn spherical_bound_is_rotation_invariant(zeros in prop::collection::vec((0.0..0.8f64, 0.0..(2.0 * PI)), 1..3), k in 0u32..64) {
        let b = MapExpr::blaschke_disc(zeros.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect()).unwrap();
        let f = MapExpr::scale(Complex64::new(0.3, 0.0)).unwrap().compose(b).unwrap();
        let g = f.clone().compose(rotation(k)).unwrap();
        let grid = probe_grid(6, 64, 5.0);
        let q = QuadConfig::areas();
        let rf = check_spherical_bound(&f, &grid, &q).unwrap();
        let rg = check_spherical_bound(&g, &grid, &q).unwrap();
        prop_assert_eq!(rf.status, rg.status);
        prop_assert!(close(rf.worst_ratio, rg.worst_ratio, 1e-6), "{} vs {}", rf.worst_ratio, rg.worst_ratio);
    }
}

#[test]
fn growth_fit_rejects_bad_samples() {
    let s = |rho, length| GrowthSample { rho, length };
    assert!(growth_fit(&[s(1.0, 1.0), s(2.0, 2.0), s(3.0, 3.0)], GrowthModel::PowerLaw).is_err());
    assert!(growth_fit(&[s(1.0, 1.0), s(2.0, 2.0), s(2.0, 3.0), s(4.0, 4.0)], GrowthModel::PowerLaw).is_err());
    assert!(growth_fit(&[s(1.0, 1.0), s(2.0, 0.0), s(3.0, 3.0), s(4.0, 4.0)], GrowthModel::PowerLaw).is_err());
}

#[test]
fn scenario_lengths_are_nondecreasing() {
    let q = QuadConfig::default();
    let annulus = scenario_annulus(3.0, 20.0, &q).unwrap();
    assert!(annulus.samples.windows(2).all(|w| w[0].length <= w[1].length));
    let symmetric = scenario_symmetric_blaschke(16, 3.0, &q).unwrap();
    assert!(symmetric.samples.windows(2).all(|w| w[0].length <= w[1].length));
}

#[test]
fn annulus_length_grows_with_the_modulus() {
    // a thinner annulus has a longer core geodesic, so the cover winds slower
    let q = QuadConfig::default();
    let thin = scenario_annulus(1.5, 10.0, &q).unwrap();
    let thick = scenario_annulus(10.0, 10.0, &q).unwrap();
    assert!(thin.period > thick.period, "{} vs {}", thin.period, thick.period);
}
