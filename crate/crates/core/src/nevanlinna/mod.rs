//! Ahlfors–Shimizu characteristic, the origin form of the first main
//! theorem, and quotient decompositions of bounded-characteristic maps.

mod fatou;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use fatou::{
    fatou_decompose, fatou_decompose_auto, uniform_characteristic_delta, uniform_characteristic_delta_pair,
    Decomposition,
};

use crate::error::{fmt_point, Error, Result};
use crate::geodesics::{angular_integral, area, rho_of_radius, try_adaptive_integrate, QuadConfig};
use crate::maps::{zeros_and_poles, MapExpr, ZerosPoles};
use crate::metrics::{chordal, stretch, MetricId, SpherePoint};

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("radius {r} must lie in (0, 1)")))
    }
}

fn check_disc(f: &MapExpr) -> Result<()> {
    if f.domain() != MetricId::HyperbolicDisc {
        return Err(Error::Argument(format!("expected a map on the disc, got domain {:?}", f.domain())));
    }
    Ok(())
}

/// `S(r) = A_S(f({|z| < r}))/4π`.
pub fn shimizu_s(f: &MapExpr, r: f64, q: &QuadConfig) -> Result<f64> {
    check_radius(r)?;
    check_disc(f)?;
    Ok(area(f, rho_of_radius(r), MetricId::Spherical, q)?.value / (4.0 * PI))
}

/// Angular integral of `|f′|² λ_S(f)²` over the circle of radius `s`.
fn spherical_ring(f: &MapExpr, s: f64, q: &QuadConfig) -> Result<f64> {
    angular_integral(
        |theta| {
            let v = stretch(&f.eval_unchecked(Complex64::from_polar(s, theta))?, 1.0, MetricId::Spherical)?;
            Ok(v * v)
        },
        q,
    )
}

/// `T(r) = ∫_0^r S(t)/t dt`, evaluated as
/// `(1/4π) ∫∫_{|z|<r} |f′|² λ_S(f)² log(r/|z|) dA`.
pub fn shimizu_t(f: &MapExpr, r: f64, q: &QuadConfig) -> Result<f64> {
    check_radius(r)?;
    check_disc(f)?;
    let est = try_adaptive_integrate(
        |s| {
            if s == 0.0 {
                return Ok(0.0);
            }
            Ok(spherical_ring(f, s, q)? * s * (r / s).ln())
        },
        0.0,
        r,
        q,
    )?;
    Ok(est.value / (4.0 * PI))
}

/// Samples of `S` and `T` at increasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicCurve {
    pub radii: Vec<f64>,
    pub s_values: Vec<f64>,
    pub t_values: Vec<f64>,
}

impl CharacteristicCurve {
    pub fn compute(f: &MapExpr, radii: &[f64], q: &QuadConfig) -> Result<Self> {
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument("radii must be strictly increasing".into()));
        }
        let mut s_values = Vec::with_capacity(radii.len());
        let mut t_values = Vec::with_capacity(radii.len());
        for r in radii {
            s_values.push(shimizu_s(f, *r, q)?);
            t_values.push(shimizu_t(f, *r, q)?);
        }
        Ok(CharacteristicCurve { radii: radii.to_vec(), s_values, t_values })
    }

    /// `r,S,T` CSV with 17 significant digits.
    pub fn to_csv(&self, header: bool) -> String {
        let mut out = String::new();
        if header {
            out.push_str("r,S,T\n");
        }
        for ((r, s), t) in self.radii.iter().zip(&self.s_values).zip(&self.t_values) {
            out.push_str(&format!("{r:.16e},{s:.16e},{t:.16e}\n"));
        }
        out
    }
}

/// Distance from the unit circle below which a zero or pole is rejected.
pub(crate) const BOUNDARY_MARGIN: f64 = 1e-6;

/// Zeros and poles of `f` inside the disc, after checking that none sit on
/// the circle and that `f(0)` is finite and nonzero.
pub(crate) fn interior_divisor(f: &MapExpr) -> Result<(ZerosPoles, Complex64)> {
    check_disc(f)?;
    let zp = zeros_and_poles(f)?;
    if let Some(p) = zp.zeros.iter().chain(&zp.poles).find(|p| (p.norm() - 1.0).abs() < BOUNDARY_MARGIN) {
        return Err(Error::BoundarySingularity { point: fmt_point(*p) });
    }
    let f0 = match f.eval_unchecked(Complex64::new(0.0, 0.0))?.to_jet().value {
        SpherePoint::Finite(v) if v != Complex64::new(0.0, 0.0) => v,
        other => return Err(Error::Normalization { value: other.to_string() }),
    };
    let inside = |v: &Vec<Complex64>| v.iter().copied().filter(|p| p.norm() < 1.0).collect();
    Ok((ZerosPoles { zeros: inside(&zp.zeros), poles: inside(&zp.poles) }, f0))
}

pub(crate) fn boundary_value(f: &MapExpr, zeta: Complex64) -> Result<SpherePoint> {
    Ok(f.eval_unchecked(zeta)?.to_jet().value)
}

/// `T(1) = N(1;0) + m(1;0)` with the proximity term as an `m`-point
/// trapezoid rule on the circle.
pub fn origin_identity_t(f: &MapExpr, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::Argument("need at least two boundary samples".into()));
    }
    let (divisor, f0) = interior_divisor(f)?;
    let counting: f64 = divisor.zeros.iter().map(|a| -a.norm().ln()).sum();
    let origin = SpherePoint::Finite(Complex64::new(0.0, 0.0));
    let k0 = chordal(SpherePoint::Finite(f0), origin);
    let mut proximity = 0.0;
    for j in 0..m {
        let zeta = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
        let k = chordal(boundary_value(f, zeta)?, origin);
        proximity += (k0 / k).ln();
    }
    Ok(counting + proximity / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constants_have_zero_characteristic() {
        let q = QuadConfig::areas();
        let f = MapExpr::constant(c(0.3, 0.2)).unwrap();
        assert_eq!(shimizu_s(&f, 0.5, &q).unwrap(), 0.0);
        assert_eq!(shimizu_t(&f, 0.5, &q).unwrap(), 0.0);
        assert!(origin_identity_t(&MapExpr::constant(c(1.0, 0.0)).unwrap(), 64).unwrap().abs() < 1e-15);
    }

    #[test]
    fn identity_closed_forms() {
        let q = QuadConfig::new(1e-12, 1e-10, 40).unwrap();
        let f = MapExpr::identity();
        for r in [0.2, 0.5, 0.9] {
            let s = shimizu_s(&f, r, &q).unwrap();
            assert!((s - r * r / (1.0 + r * r)).abs() < 1e-9, "S({r}) = {s}");
            let t = shimizu_t(&f, r, &q).unwrap();
            assert!((t - 0.5 * (r * r).ln_1p()).abs() < 1e-10, "T({r}) = {t}");
        }
    }

    #[test]
    fn normalization_and_boundary_errors() {
        assert!(matches!(origin_identity_t(&MapExpr::identity(), 64), Err(Error::Normalization { .. })));
        let b = MapExpr::blaschke_disc(vec![c(0.9999999, 0.0)]).unwrap();
        assert!(matches!(origin_identity_t(&b, 64), Err(Error::BoundarySingularity { .. })));
    }

    #[test]
    fn csv_layout() {
        let curve = CharacteristicCurve { radii: vec![0.5], s_values: vec![0.25], t_values: vec![0.125] };
        assert_eq!(curve.to_csv(true), "r,S,T\n5.0000000000000000e-1,2.5000000000000000e-1,1.2500000000000000e-1\n");
    }
}
