//! Radial geodesics, image arc lengths and image areas.

mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

pub use quadrature::{adaptive_integrate, integrate_endpoint_singular, try_adaptive_integrate, Estimate, QuadConfig};

use crate::error::{Error, Result};
use crate::maps::MapExpr;
use crate::metrics::{stretch, ComplexPoint, MetricId};

/// Beyond this hyperbolic radius `tanh(t/2)` is no longer distinguishable
/// from 1 at double precision.
pub const MAX_DISC_RHO: f64 = 35.0;

/// A unit-speed hyperbolic ray.
///
/// Disc rays start at 0 with argument `theta`; half-plane rays are
/// `base + i·e^t`, starting at `base + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialArc {
    domain: MetricId,
    theta: f64,
    base: ComplexPoint,
    rho_max: f64,
}

impl RadialArc {
    pub fn disc(theta: f64, rho_max: f64) -> Result<Self> {
        check_rho(rho_max)?;
        if !theta.is_finite() {
            return Err(Error::Argument(format!("angle {theta} must be finite")));
        }
        Ok(RadialArc { domain: MetricId::HyperbolicDisc, theta, base: Complex64::new(0.0, 0.0), rho_max })
    }

    pub fn half_plane(base_offset: ComplexPoint, rho_max: f64) -> Result<Self> {
        check_rho(rho_max)?;
        if !(base_offset.re.is_finite() && base_offset.im.is_finite()) || base_offset.im <= -1.0 {
            return Err(Error::Argument("base offset must be finite with Im > −1".into()));
        }
        Ok(RadialArc { domain: MetricId::HyperbolicHalfPlane, theta: 0.0, base: base_offset, rho_max })
    }

    pub fn domain(&self) -> MetricId {
        self.domain
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn base_offset(&self) -> ComplexPoint {
        self.base
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn with_rho_max(self, rho_max: f64) -> Result<Self> {
        check_rho(rho_max)?;
        Ok(RadialArc { rho_max, ..self })
    }

    /// `|γ′(t)|`, computed from `t` directly.
    fn euclidean_speed(&self, t: f64) -> f64 {
        match self.domain {
            MetricId::HyperbolicDisc => {
                let c = (0.5 * t).cosh();
                0.5 / (c * c)
            }
            _ => t.exp(),
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("rho_max {rho} must be positive and finite")))
    }
}

/// Point at parameter `t` along the arc.
pub fn radial_point(arc: &RadialArc, t: f64) -> Result<ComplexPoint> {
    if !(0.0..=arc.rho_max).contains(&t) {
        return Err(Error::Argument(format!("t = {t} outside [0, {}]", arc.rho_max)));
    }
    Ok(point_unchecked(arc, t))
}

fn point_unchecked(arc: &RadialArc, t: f64) -> ComplexPoint {
    match arc.domain {
        MetricId::HyperbolicDisc => Complex64::from_polar((0.5 * t).tanh(), arc.theta),
        _ => arc.base + Complex64::new(0.0, t.exp()),
    }
}

/// A pair `(ρ, L(ρ))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthSample {
    pub rho: f64,
    pub length: f64,
}

fn check_arc_domain(f: &MapExpr, arc: &RadialArc) -> Result<()> {
    if f.domain() != arc.domain {
        return Err(Error::Argument(format!(
            "map has domain {:?} but the arc lives in {:?}",
            f.domain(),
            arc.domain
        )));
    }
    if arc.domain == MetricId::HyperbolicDisc && arc.rho_max > MAX_DISC_RHO {
        return Err(Error::Argument(format!("disc arcs are limited to rho ≤ {MAX_DISC_RHO}")));
    }
    Ok(())
}

/// Image speed of `f∘γ` at `t` in the target metric.
fn image_speed(f: &MapExpr, arc: &RadialArc, target: MetricId, t: f64) -> Result<f64> {
    let z = point_unchecked(arc, t);
    let jet = f.evaluate_projective(z)?;
    // |f′|·λ_B(f)·|γ′|; equals the derivative norm for unit-speed arcs
    stretch(&jet, 1.0 / arc.euclidean_speed(t), target)
}

/// `∫_{t0}^{t1} ‖f′(γ(t))‖_{H→B} dt`.
pub fn arc_length_between(
    f: &MapExpr,
    arc: &RadialArc,
    t0: f64,
    t1: f64,
    target: MetricId,
    q: &QuadConfig,
) -> Result<f64> {
    check_arc_domain(f, arc)?;
    if !(0.0 <= t0 && t0 <= t1 && t1 <= arc.rho_max) {
        return Err(Error::Argument(format!("[{t0}, {t1}] is not inside [0, {}]", arc.rho_max)));
    }
    Ok(try_adaptive_integrate(|t| image_speed(f, arc, target, t), t0, t1, q)?.value)
}

/// `L_B(ρ_max) = ∫_0^{ρ_max} ‖f′(γ(t))‖_{H→B} dt`.
pub fn arc_length(f: &MapExpr, arc: &RadialArc, target: MetricId, q: &QuadConfig) -> Result<f64> {
    arc_length_between(f, arc, 0.0, arc.rho_max, target, q)
}

/// `L_B(ρ)` at each of the increasing radii `rhos`, accumulated segment by
/// segment so the profile is nondecreasing.
pub fn length_profile(
    f: &MapExpr,
    arc: &RadialArc,
    rhos: &[f64],
    target: MetricId,
    q: &QuadConfig,
) -> Result<Vec<GrowthSample>> {
    if rhos.windows(2).any(|w| w[0] >= w[1]) || rhos.first().is_some_and(|r| *r <= 0.0) {
        return Err(Error::Argument("radii must be positive and strictly increasing".into()));
    }
    let Some(&last) = rhos.last() else { return Ok(Vec::new()) };
    let arc = arc.with_rho_max(last)?;
    check_arc_domain(f, &arc)?;
    // segments are independent; sum them in order afterwards
    let starts: Vec<f64> = std::iter::once(0.0).chain(rhos[..rhos.len() - 1].iter().copied()).collect();
    let pieces: Vec<Result<f64>> = starts
        .par_iter()
        .zip(rhos.par_iter())
        .map(|(a, b)| Ok(try_adaptive_integrate(|t| image_speed(f, &arc, target, t), *a, *b, q)?.value))
        .collect();
    let mut total = 0.0;
    let mut out = Vec::with_capacity(rhos.len());
    for (rho, piece) in rhos.iter().zip(pieces) {
        total += piece?;
        out.push(GrowthSample { rho: *rho, length: total });
    }
    Ok(out)
}

/// Serialize samples as `rho,length` CSV with 17 significant digits.
pub fn growth_csv(samples: &[GrowthSample], header: bool) -> String {
    let mut s = String::new();
    if header {
        s.push_str("rho,length\n");
    }
    for g in samples {
        s.push_str(&format!("{:.16e},{:.16e}\n", g.rho, g.length));
    }
    s
}

/// Periodic trapezoid rule in θ, doubled until two levels agree.
pub(crate) fn angular_integral<F>(g: F, q: &QuadConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    const START: usize = 16;
    const MAX_PANELS: usize = 1 << 16;
    let sample = |n: usize, offset: f64| -> Result<f64> {
        let h = 2.0 * PI / n as f64;
        let vals: Vec<Result<f64>> = if n >= 64 {
            (0..n).into_par_iter().map(|k| g((k as f64 + offset) * h)).collect()
        } else {
            (0..n).map(|k| g((k as f64 + offset) * h)).collect()
        };
        let mut sum = 0.0;
        for v in vals {
            sum += v?;
        }
        Ok(sum * h)
    };
    let mut n = START;
    let mut current = sample(n, 0.0)?;
    loop {
        // midpoints of the current panels refine the rule to 2n panels
        let refined = 0.5 * (current + sample(n, 0.5)?);
        n *= 2;
        let gap = (refined - current).abs();
        current = refined;
        if gap <= q.rel_tol * current.abs() || gap <= 1e-3 * q.abs_tol {
            return Ok(current);
        }
        if n >= MAX_PANELS {
            return Err(Error::Precision { estimate: current, error_bound: gap });
        }
    }
}

/// `d/dt` of the image area at hyperbolic radius `t`: the angular integral
/// of `‖f′‖² sinh t`, written in Euclidean form to avoid overflow.
fn area_density(f: &MapExpr, target: MetricId, t: f64, q: &QuadConfig) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let r = (0.5 * t).tanh();
    let c = (0.5 * t).cosh();
    // r · dr/dt
    let weight = r * 0.5 / (c * c);
    angular_integral(
        |theta| {
            let z = Complex64::from_polar(r, theta);
            let s = stretch(&f.eval_unchecked(z)?, 1.0, target)?;
            Ok(s * s * weight)
        },
        q,
    )
}

fn disc_version(f: &MapExpr) -> Result<MapExpr> {
    match f.domain() {
        MetricId::HyperbolicDisc => Ok(f.clone()),
        MetricId::HyperbolicHalfPlane => f.clone().compose(MapExpr::inverse_cayley()),
        d => Err(Error::Argument(format!("area needs a disc or half-plane map, not {d:?}"))),
    }
}

fn area_segment(f: &MapExpr, a: f64, b: f64, target: MetricId, q: &QuadConfig) -> Result<Estimate> {
    try_adaptive_integrate(|t| area_density(f, target, t, q), a, b, q)
}

/// Ratio of an unresolved ring's estimate to the area inside it beyond
/// which the limit is declared divergent.
const RUNAWAY: f64 = 1e6;

/// Image area of the ring `a < d_H(0, z) < b`.
pub(crate) fn area_between(f: &MapExpr, a: f64, b: f64, target: MetricId, q: &QuadConfig) -> Result<Estimate> {
    area_segment(&disc_version(f)?, a, b, target, q)
}

/// Image area of the hyperbolic ball `B_H(0, ρ)` in the target metric,
/// counting multiplicity. `rho = f64::INFINITY` takes the limit over
/// `ρ = 5, 10, 15, …` and stops once an increment falls below `abs_tol`.
pub fn area(f: &MapExpr, rho: f64, target: MetricId, q: &QuadConfig) -> Result<Estimate> {
    let g = disc_version(f)?;
    if rho.is_finite() {
        if !(rho > 0.0 && rho <= MAX_DISC_RHO) {
            return Err(Error::Argument(format!("rho {rho} must lie in (0, {MAX_DISC_RHO}] or be infinite")));
        }
        return area_segment(&g, 0.0, rho, target, q);
    }
    if rho != f64::INFINITY {
        return Err(Error::Argument(format!("rho {rho} is not a valid radius")));
    }
    let step = 5.0;
    let mut total = area_segment(&g, 0.0, step, target, q)?;
    let mut previous = f64::INFINITY;
    let mut start = step;
    while start < MAX_DISC_RHO {
        let inc = match area_segment(&g, start, start + step, target, q) {
            Ok(e) => e,
            // a ring that cannot be resolved and already dwarfs everything inside it
            Err(Error::Precision { estimate, .. }) if estimate > RUNAWAY * total.value.abs().max(q.abs_tol) => {
                return Err(Error::Divergence { partial: total.value + estimate })
            }
            Err(e) => return Err(e),
        };
        total.value += inc.value;
        total.error_bound += inc.error_bound;
        if inc.value.abs() < q.abs_tol {
            total.error_bound += inc.value.abs();
            return Ok(total);
        }
        if inc.value >= previous {
            return Err(Error::Divergence { partial: total.value });
        }
        previous = inc.value;
        start += step;
    }
    Err(Error::Precision { estimate: total.value, error_bound: previous })
}

/// `π Σ n|a_n|² r^{2n}`: Euclidean area of the image of `{|z| < r}` under
/// a polynomial.
pub fn area_from_coefficients(coeffs: &[Complex64], r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Argument(format!("radius {r} must lie in (0, 1]")));
    }
    let r2 = r * r;
    let mut power = 1.0;
    let mut sum = 0.0;
    for (n, a) in coeffs.iter().enumerate().skip(1) {
        power *= r2;
        sum += n as f64 * a.norm_sqr() * power;
    }
    Ok(PI * sum)
}

/// Hyperbolic radius of the disc `{|z| < r}`.
pub fn rho_of_radius(r: f64) -> f64 {
    (2.0 * r / (1.0 - r)).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn radial_points() {
        let arc = RadialArc::disc(0.0, 5.0).unwrap();
        assert_eq!(radial_point(&arc, 0.0).unwrap(), c(0.0, 0.0));
        assert!((radial_point(&arc, 1.0).unwrap() - c(0.5f64.tanh(), 0.0)).norm() < 1e-16);
        let hp = RadialArc::half_plane(c(-1.0, 0.0), 2.0).unwrap();
        assert!((radial_point(&hp, 4f64.ln()).unwrap() - c(-1.0, 4.0)).norm() < 1e-15);
        assert!(radial_point(&arc, 6.0).is_err());
    }

    #[test]
    fn identity_lengths() {
        let q = QuadConfig::lengths();
        let id = MapExpr::identity();
        let arc = RadialArc::disc(0.3, 7.0).unwrap();
        assert!((arc_length(&id, &arc, MetricId::HyperbolicDisc, &q).unwrap() - 7.0).abs() < 1e-9);
        let e = arc_length(&id, &arc, MetricId::Euclidean, &q).unwrap();
        assert!((e - 3.5f64.tanh()).abs() < 1e-9);
    }

    #[test]
    fn koebe_negative_radius() {
        let q = QuadConfig::lengths();
        let arc = RadialArc::disc(PI, 5.0).unwrap();
        let r = 2.5f64.tanh();
        let l = arc_length(&MapExpr::koebe(), &arc, MetricId::Euclidean, &q).unwrap();
        assert!((l - r / (1.0 + r).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn profile_matches_direct_lengths() {
        let q = QuadConfig::lengths();
        let f = MapExpr::koebe().compose(MapExpr::scale(c(0.9, 0.0)).unwrap()).unwrap();
        let arc = RadialArc::disc(1.0, 1.0).unwrap();
        let prof = length_profile(&f, &arc, &[1.0, 2.0, 4.0], MetricId::Spherical, &q).unwrap();
        let direct = arc_length(&f, &arc.with_rho_max(4.0).unwrap(), MetricId::Spherical, &q).unwrap();
        assert!((prof[2].length - direct).abs() < 1e-8);
        assert!(prof.windows(2).all(|w| w[0].length <= w[1].length));
    }

    #[test]
    fn identity_euclidean_area() {
        let q = QuadConfig::areas();
        let a = area(&MapExpr::identity(), 3.0, MetricId::Euclidean, &q).unwrap();
        assert!((a.value - PI * 1.5f64.tanh().powi(2)).abs() < 1e-7);
        let a = area(&MapExpr::identity(), f64::INFINITY, MetricId::Euclidean, &q).unwrap();
        assert!((a.value - PI).abs() < 1e-6);
    }

    #[test]
    fn divergent_area() {
        let q = QuadConfig::areas();
        let err = area(&MapExpr::identity(), f64::INFINITY, MetricId::HyperbolicDisc, &q).unwrap_err();
        assert!(matches!(err, Error::Divergence { .. }));
    }

    #[test]
    fn coefficient_area() {
        assert!((area_from_coefficients(&[c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap() - PI).abs() < 1e-15);
        assert!((area_from_coefficients(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!(area_from_coefficients(&[c(1.0, 0.0)], 1.5).is_err());
    }

    #[test]
    fn csv_format() {
        let s = growth_csv(&[GrowthSample { rho: 1.0, length: 0.5 }], true);
        assert_eq!(s, "rho,length\n1.0000000000000000e0,5.0000000000000000e-1\n");
        assert!(!growth_csv(&[], false).contains("rho"));
    }
}
