use std::f64::consts::PI;

use num_complex::Complex64;

use super::{growth_fit, GrowthFit, GrowthModel, Status, VerdictReport};
use crate::error::{Error, Result};
use crate::geodesics::{arc_length, length_profile, GrowthSample, QuadConfig, RadialArc};
use crate::maps::{quotient_tail_bound, symmetry_check, truncate_blaschke, Heights, MapExpr};
use crate::metrics::{MetricId, SpherePoint};

fn i(y: f64) -> Complex64 {
    Complex64::new(0.0, y)
}

fn linspace(rho_max: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| rho_max * k as f64 / n as f64).collect()
}

/// Covering map of `{1/R < |w| < R}` by the upper half-plane,
/// `exp(iβ(Log z − iπ/2))` with `β = 2 log R/π`. Sends the imaginary axis
/// onto the unit circle.
pub fn annulus_cover_map(r: f64) -> Result<(MapExpr, f64)> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::Argument(format!("annulus radius {r} must exceed 1")));
    }
    let beta = 2.0 * r.ln() / PI;
    let affine = MapExpr::shift(Complex64::new(0.5 * beta * PI, 0.0))?.compose(MapExpr::scale(i(beta))?)?;
    let map = MapExpr::exp().compose(affine)?.compose(MapExpr::log())?.on_domain(MetricId::HyperbolicHalfPlane)?;
    Ok((map, beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusReport {
    pub samples: Vec<GrowthSample>,
    pub fit: GrowthFit,
    pub beta: f64,
    /// Hyperbolic length of one circuit, `2π/β`.
    pub period: f64,
    /// `L_S` over one period.
    pub circuit_length: f64,
    /// `max_n |L_S(nP) − n L_S(P)|` over the whole periods inside `rho_max`.
    pub periodicity_residual: f64,
}

/// Spherical length of the image of the imaginary axis, from `i`, under the
/// annulus cover.
pub fn scenario_annulus(r: f64, rho_max: f64, q: &QuadConfig) -> Result<AnnulusReport> {
    let (map, beta) = annulus_cover_map(r)?;
    let arc = RadialArc::half_plane(Complex64::new(0.0, 0.0), rho_max)?;
    let samples = length_profile(&map, &arc, &linspace(rho_max, 40), MetricId::Spherical, q)?;
    let fit = growth_fit(&samples, GrowthModel::PowerLaw)?;
    let period = 2.0 * PI / beta;
    let circuit_length = arc_length(&map, &arc.with_rho_max(period)?, MetricId::Spherical, q)?;
    let circuits = (rho_max / period).floor() as usize;
    let mut periodicity_residual = 0.0f64;
    if circuits >= 1 {
        let rhos: Vec<f64> = (1..=circuits).map(|n| n as f64 * period).collect();
        for (n, s) in length_profile(&map, &arc, &rhos, MetricId::Spherical, q)?.iter().enumerate() {
            periodicity_residual = periodicity_residual.max((s.length - (n + 1) as f64 * circuit_length).abs());
        }
    }
    Ok(AnnulusReport { samples, fit, beta, period, circuit_length, periodicity_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricReport {
    pub samples: Vec<GrowthSample>,
    pub fit: GrowthFit,
    pub tail_bound: f64,
    pub symmetry_deviation: f64,
    /// `max |Im B(iy)|` along the sampled arc.
    pub axis_imaginary_part: f64,
    pub verdict: VerdictReport,
}

/// Truncation of the product with zeros `2ⁿ i`, `|n| ≤ N`, where factors
/// with `n < 0` carry a sign `−1`.
pub fn symmetric_blaschke_map(n: usize) -> Result<MapExpr> {
    let n = n as i32;
    let heights = (-n..=n).map(|k| 2f64.powi(k)).collect();
    let signs = (-n..=n).map(|k| if k < 0 { -1 } else { 1 }).collect();
    MapExpr::blaschke_half_plane(heights, signs)
}

/// Bound on `|B_N/B − 1|` along `{i y : 1 ≤ y ≤ R}`.
fn symmetric_tail_bound(n: usize, radius: f64) -> Result<f64> {
    let first = 2f64.powi(n as i32 + 1);
    if first <= 2.0 * radius {
        return Err(Error::Resolution { samples: n, tail: f64::INFINITY });
    }
    // dropped upper factors: |1 − b| ≤ 2|z|/(y − |z|); lower ones: ≤ 2y/(|z| − y)
    let mut sum = 0.0;
    for k in n as i32 + 1..n as i32 + 200 {
        let y = 2f64.powi(k);
        sum += 2.0 * radius / (y - radius) + 2.0 / y / (1.0 - 1.0 / y);
    }
    Ok(sum.exp_m1())
}

/// The symmetric product measured along the imaginary axis.
///
/// Passes when the symmetry and realness deviations are below `1e−10` and
/// the power-law exponent of `L_S` lies in `[0.95, 1.05]`.
pub fn scenario_symmetric_blaschke(n: usize, rho_max: f64, q: &QuadConfig) -> Result<SymmetricReport> {
    if n < 8 {
        return Err(Error::Argument(format!("truncation {n} must be at least 8")));
    }
    let tail_bound = symmetric_tail_bound(n, rho_max.exp())?;
    if tail_bound > 1e-3 {
        return Err(Error::Resolution { samples: n, tail: tail_bound });
    }
    let map = symmetric_blaschke_map(n)?;
    let arc = RadialArc::half_plane(Complex64::new(0.0, 0.0), rho_max)?;
    let samples = length_profile(&map, &arc, &linspace(rho_max, 40), MetricId::Spherical, q)?;
    let fit = growth_fit(&samples, GrowthModel::PowerLaw)?;
    let probes: Vec<Complex64> = (0..64)
        .map(|k| Complex64::new((k as f64 * 0.37).sin() * 3.0, (0.2 * k as f64 - 4.0).exp()))
        .collect();
    let symmetry_deviation = symmetry_check(&map, &probes)?;
    let mut axis_imaginary_part = 0.0f64;
    for k in 0..=100 {
        let y = (rho_max * k as f64 / 100.0).exp();
        match map.evaluate(i(y))?.value {
            SpherePoint::Finite(v) => axis_imaginary_part = axis_imaginary_part.max(v.im.abs()),
            SpherePoint::Infinity => {}
        }
    }
    let exponent_gap = (fit.exponent - 1.0).abs() / 0.05;
    let ok = symmetry_deviation < 1e-10 && axis_imaginary_part < 1e-10 && exponent_gap <= 1.0;
    let verdict = VerdictReport {
        name: "symmetric_blaschke".into(),
        status: if ok { Status::Pass } else { Status::Fail },
        worst_ratio: exponent_gap.max(symmetry_deviation / 1e-10).max(axis_imaginary_part / 1e-10),
        witness: format!("N={n}"),
        details: vec![
            format!("exponent {:.16e}", fit.exponent),
            format!("symmetry {symmetry_deviation:.3e}"),
            format!("axis imaginary part {axis_imaginary_part:.3e}"),
            format!("tail bound {tail_bound:.3e}"),
        ],
    };
    Ok(SymmetricReport { samples, fit, tail_bound, symmetry_deviation, axis_imaginary_part, verdict })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientReport {
    pub samples: Vec<GrowthSample>,
    /// Number of factors kept in `B`.
    pub truncation: usize,
    pub tail_bound: f64,
    /// `max ||f(iy)| − 1|` over 100 sampled heights.
    pub modulus_error: f64,
    /// `(n, L_S(log y_n)/(2πn))` for the top eleven `n`.
    pub normalized: Vec<(usize, f64)>,
    pub fit: GrowthFit,
    pub verdict: VerdictReport,
}

fn square(n: usize) -> f64 {
    (n * n) as f64
}

/// `B(z + 1)/B(z − 1)` where `B` has zeros `i n²`, truncated so that the
/// certified tail on `{|z| ≤ radius}` is below `1e−3`.
pub fn blaschke_quotient_map(radius: f64) -> Result<(MapExpr, usize, f64)> {
    let rule: &dyn Fn(usize) -> f64 = &square;
    let mut n = ((2.0 * (radius + 1.0)).sqrt().ceil() as usize).max(1);
    let bound = loop {
        let b = quotient_tail_bound(Heights::Rule(rule), n, radius)?;
        if b < 1e-3 {
            break b;
        }
        n += (n / 8).max(1);
        if n > 1_000_000 {
            return Err(Error::Resolution { samples: n, tail: b });
        }
    };
    let b = truncate_blaschke(Heights::Rule(rule), n, radius + 1.0)?.product;
    let top = b.clone().compose(MapExpr::shift(Complex64::new(1.0, 0.0))?)?;
    let bottom = b.compose(MapExpr::shift(Complex64::new(-1.0, 0.0))?)?;
    Ok((top.over(bottom)?, n, bound))
}

/// The quotient `B(z+1)/B(z−1)` with `y_n = n²`, measured along the
/// imaginary axis from `i` at `ρ = log y_n`, `n = 2 … n_max`.
///
/// Passes when `|f(iy)| = 1` to `1e−8`, `L_S(log y_n)/(2πn) ∈ [0.85, 1.15]`
/// for the top eleven `n`, and the exponential rate lies in `[0.45, 0.55]`.
pub fn scenario_blaschke_quotient(n_max: usize, q: &QuadConfig) -> Result<QuotientReport> {
    if n_max < 10 {
        return Err(Error::Argument(format!("n_max {n_max} must be at least 10")));
    }
    let rho_max = square(n_max).ln();
    let (map, truncation, tail_bound) = blaschke_quotient_map(square(n_max))?;
    let mut modulus_error = 0.0f64;
    for k in 0..100 {
        let y = (rho_max * k as f64 / 99.0).exp();
        let m = match map.evaluate(i(y))?.value {
            SpherePoint::Finite(v) => v.norm(),
            SpherePoint::Infinity => f64::INFINITY,
        };
        modulus_error = modulus_error.max((m - 1.0).abs());
    }
    let arc = RadialArc::half_plane(Complex64::new(0.0, 0.0), rho_max)?;
    let rhos: Vec<f64> = (2..=n_max).map(|n| square(n).ln()).collect();
    let samples = length_profile(&map, &arc, &rhos, MetricId::Spherical, q)?;
    let normalized: Vec<(usize, f64)> = (n_max - 10..=n_max)
        .map(|n| (n, samples[n - 2].length / (2.0 * PI * n as f64)))
        .collect();
    let fit = growth_fit(&samples[samples.len() / 2..], GrowthModel::Exponential)?;

    let band = normalized.iter().map(|(_, r)| (r - 1.0).abs() / 0.15).fold(0.0, f64::max);
    let rate = (fit.exponent - 0.5).abs() / 0.05;
    let modulus = modulus_error / 1e-8;
    let worst = band.max(rate).max(modulus);
    let verdict = VerdictReport {
        name: "blaschke_quotient".into(),
        status: if band <= 1.0 && rate <= 1.0 && modulus <= 1.0 { Status::Pass } else { Status::Fail },
        worst_ratio: worst,
        witness: format!("n_max={n_max}"),
        details: vec![
            format!("truncation {truncation} tail bound {tail_bound:.3e}"),
            format!("modulus error {modulus_error:.3e}"),
            format!("exponential rate {:.16e}", fit.exponent),
        ]
        .into_iter()
        .chain(normalized.iter().map(|(n, r)| format!("n {n} ratio {r:.16e}")))
        .collect(),
    };
    Ok(QuotientReport { samples, truncation, tail_bound, modulus_error, normalized, fit, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_single_circuit() {
        let q = QuadConfig::default();
        let r = scenario_annulus(std::f64::consts::E, 12.0, &q).unwrap();
        assert!((r.circuit_length - 2.0 * PI).abs() < 1e-9);
        assert!(r.periodicity_residual < 1e-8);
        assert!((r.fit.exponent - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_product_on_the_axis() {
        let r = scenario_symmetric_blaschke(40, 12.0, &QuadConfig::default()).unwrap();
        assert!(r.symmetry_deviation < 1e-10);
        assert!(r.axis_imaginary_part < 1e-10);
        assert!(r.samples.windows(2).all(|w| w[1].length >= w[0].length));
    }

    #[test]
    fn symmetric_tail_too_large() {
        assert!(matches!(
            scenario_symmetric_blaschke(8, 12.0, &QuadConfig::default()),
            Err(Error::Resolution { .. })
        ));
    }
}
