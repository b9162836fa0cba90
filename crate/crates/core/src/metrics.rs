//! The four conformal metrics used throughout the crate, the chordal metric on
//! the Riemann sphere, Möbius transformations, and the derivative norm
//! `||f'(z)||_{A→B} = |f'(z)| λ_B(f(z)) / λ_A(z)`.
//!
//! Normalizations: the disc carries `2/(1-|z|²)`, the upper half-plane
//! `1/Im z` (both curvature −1), the sphere `2/(1+|z|²)` (curvature +1) and the
//! plane the constant density 1.

use std::fmt;

use num_complex::Complex64;

use crate::error::{fmt_point, Error, Result};
use crate::maps::{MapExpr, ProjectiveJet};

/// A finite point of the complex plane.
pub type ComplexPoint = Complex64;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(ComplexPoint),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<ComplexPoint> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// Normalized homogeneous coordinates `(a, b)` with `|a|² + |b|² = 1` and
    /// `w = a / b`. Points with `|w| > 1` go through `1/w` so nothing overflows.
    fn unit_lift(self) -> (Complex64, Complex64) {
        match self {
            SpherePoint::Infinity => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            SpherePoint::Finite(w) => {
                let m = w.norm();
                if m <= 1.0 {
                    let s = (1.0 + m * m).sqrt();
                    (w / s, Complex64::new(1.0 / s, 0.0))
                } else {
                    let inv = w.inv();
                    let mi = 1.0 / m;
                    let s = (1.0 + mi * mi).sqrt();
                    (Complex64::new(1.0 / s, 0.0), inv / s)
                }
            }
        }
    }
}

impl From<ComplexPoint> for SpherePoint {
    fn from(z: ComplexPoint) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{}", fmt_point(*z)),
            SpherePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Selects a density and its distance function. Also used as the domain and
/// codomain tag of a [`MapExpr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricId {
    Euclidean,
    HyperbolicDisc,
    HyperbolicHalfPlane,
    Spherical,
}

impl MetricId {
    pub fn contains(self, z: SpherePoint) -> bool {
        match (self, z) {
            (MetricId::Spherical, _) => true,
            (_, SpherePoint::Infinity) => false,
            (MetricId::Euclidean, SpherePoint::Finite(z)) => z.re.is_finite() && z.im.is_finite(),
            (MetricId::HyperbolicDisc, SpherePoint::Finite(z)) => z.norm_sqr() < 1.0,
            (MetricId::HyperbolicHalfPlane, SpherePoint::Finite(z)) => z.im > 0.0 && z.re.is_finite(),
        }
    }

    /// Set inclusion of the underlying spaces: disc and half-plane sit inside
    /// the plane, which sits inside the sphere.
    pub fn is_subset_of(self, other: MetricId) -> bool {
        self == other
            || other == MetricId::Spherical
            || (other == MetricId::Euclidean
                && matches!(self, MetricId::HyperbolicDisc | MetricId::HyperbolicHalfPlane))
    }

    fn check(self, z: SpherePoint) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::Domain { metric: self, point: z.to_string() })
        }
    }
}

/// Density `λ(z)` of the metric at `z`.
pub fn density(metric: MetricId, z: SpherePoint) -> Result<f64> {
    metric.check(z)?;
    let w = match z {
        SpherePoint::Infinity => return Ok(0.0),
        SpherePoint::Finite(w) => w,
    };
    Ok(match metric {
        MetricId::Euclidean => 1.0,
        MetricId::HyperbolicDisc => {
            let m = w.norm();
            2.0 / ((1.0 - m) * (1.0 + m))
        }
        MetricId::HyperbolicHalfPlane => 1.0 / w.im,
        MetricId::Spherical => spherical_density(w),
    })
}

pub(crate) fn spherical_density(w: Complex64) -> f64 {
    let m = w.norm();
    if m <= 1.0 {
        2.0 / (1.0 + m * m)
    } else {
        let s = 1.0 / m;
        2.0 * s * s / (1.0 + s * s)
    }
}

/// Chordal distance between stereographic images on the unit sphere in ℝ³.
pub fn chordal(w1: SpherePoint, w2: SpherePoint) -> f64 {
    let (a1, b1) = w1.unit_lift();
    let (a2, b2) = w2.unit_lift();
    2.0 * (a1 * b2 - a2 * b1).norm()
}

/// Geodesic distance in the chosen metric.
pub fn distance(metric: MetricId, z1: SpherePoint, z2: SpherePoint) -> Result<f64> {
    metric.check(z1)?;
    metric.check(z2)?;
    if metric == MetricId::Spherical {
        let (a1, b1) = z1.unit_lift();
        let (a2, b2) = z2.unit_lift();
        let sin_half = (a1 * b2 - a2 * b1).norm();
        let cos_half = (a1 * a2.conj() + b1 * b2.conj()).norm();
        return Ok(2.0 * sin_half.atan2(cos_half));
    }
    // Finite-only metrics; both points were checked above.
    let (p, q) = (z1.finite().unwrap_or_default(), z2.finite().unwrap_or_default());
    Ok(match metric {
        MetricId::Euclidean => (p - q).norm(),
        MetricId::HyperbolicDisc => {
            let denom = (Complex64::new(1.0, 0.0) - q.conj() * p).norm();
            let u = (p - q).norm() / denom;
            // 1 - u² computed without cancellation.
            let one_minus_u2 = (1.0 - p.norm_sqr()) * (1.0 - q.norm_sqr()) / (denom * denom);
            2.0 * u.ln_1p() - one_minus_u2.ln()
        }
        MetricId::HyperbolicHalfPlane => {
            let denom = (p - q.conj()).norm();
            let u = (p - q).norm() / denom;
            let one_minus_u2 = 4.0 * p.im * q.im / (denom * denom);
            2.0 * u.ln_1p() - one_minus_u2.ln()
        }
        MetricId::Spherical => unreachable!(),
    })
}

/// Derivative norm `||f'(z)||_{A→B}` where `A` is the domain tag of `f` and
/// `B = target`. At or near a pole the spherical target is evaluated in the
/// chart of `1/f`, which the inversion invariance of the spherical metric
/// makes equivalent.
pub fn deriv_norm(f: &MapExpr, z: ComplexPoint, target: MetricId) -> Result<f64> {
    let source = density(f.domain(), z.into())?;
    let jet = f.evaluate_projective(z)?;
    stretch(&jet, source, target)
}

/// `|f'| λ_B(f) / source_density` from a projective jet.
pub(crate) fn stretch(jet: &ProjectiveJet, source_density: f64, target: MetricId) -> Result<f64> {
    if target == MetricId::Spherical {
        return Ok(jet.spherical_derivative() / source_density);
    }
    let (value, deriv) = match jet.finite_value() {
        Some(vd) => vd,
        None => {
            return Err(Error::Range { metric: target, value: "inf".into() });
        }
    };
    let lambda = match target {
        MetricId::Euclidean => 1.0,
        MetricId::HyperbolicDisc => {
            let m = value.norm();
            if m >= 1.0 {
                return Err(Error::Range { metric: target, value: fmt_point(value) });
            }
            2.0 / ((1.0 - m) * (1.0 + m))
        }
        MetricId::HyperbolicHalfPlane => {
            if value.im <= 0.0 {
                return Err(Error::Range { metric: target, value: fmt_point(value) });
            }
            1.0 / value.im
        }
        MetricId::Spherical => unreachable!(),
    };
    Ok(deriv.norm() * lambda / source_density)
}

/// `z ↦ (az + b)/(cz + d)` with `ad − bc ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusTransform {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusTransform {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = (a * d).norm() + (b * c).norm();
        if [a, b, c, d].iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::Construction("Möbius coefficients must be finite".into()));
        }
        if det.norm() <= 1e-14 * scale || det.norm() == 0.0 {
            return Err(Error::Construction("degenerate Möbius transformation (ad - bc = 0)".into()));
        }
        Ok(MobiusTransform { a, b, c, d })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MobiusTransform { a: one, b: zero, c: zero, d: one }
    }

    /// `z ↦ (r₀ z + z₀)/(1 + conj(z₀) r₀ z)`: maps the unit disc onto the
    /// hyperbolic ball about `z₀` of Euclidean-at-origin radius `r₀ = tanh(ρ₀/2)`.
    pub fn disc_automorphism(z0: ComplexPoint, r0: f64) -> Result<Self> {
        if z0.norm() >= 1.0 {
            return Err(Error::Construction(format!("centre {} must lie in the unit disc", fmt_point(z0))));
        }
        if !(r0 > 0.0 && r0 <= 1.0) {
            return Err(Error::Construction(format!("radius {r0} must lie in (0, 1]")));
        }
        Self::new(Complex64::new(r0, 0.0), z0, z0.conj() * r0, Complex64::new(1.0, 0.0))
    }

    /// Upper half-plane onto the unit disc, `z ↦ (z − i)/(z + i)`, sending `i ↦ 0`.
    pub fn cayley() -> Self {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        MobiusTransform { a: one, b: -i, c: one, d: i }
    }

    /// `z ↦ i(1 + z)/(1 − z)`, the inverse of [`MobiusTransform::cayley`].
    pub fn inverse_cayley() -> Self {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        MobiusTransform { a: i, b: i, c: -one, d: one }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => {
                if self.c == Complex64::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == Complex64::new(0.0, 0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MobiusTransform) -> MobiusTransform {
        let m = MobiusTransform {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        };
        m.normalized()
    }

    pub fn inverse(&self) -> MobiusTransform {
        MobiusTransform { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Rescale the coefficient matrix to unit max-modulus entry.
    fn normalized(self) -> Self {
        let s = [self.a, self.b, self.c, self.d].iter().map(|x| x.norm()).fold(0.0, f64::max);
        if s == 0.0 || !s.is_finite() {
            return self;
        }
        MobiusTransform { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
    }

    /// Whether the image of the open unit disc lies inside the closed unit disc.
    pub fn maps_disc_into_disc(&self) -> bool {
        let gap = self.d.norm_sqr() - self.c.norm_sqr();
        if gap <= 0.0 {
            return false;
        }
        let centre = (self.b * self.d.conj() - self.a * self.c.conj()) / gap;
        let radius = self.determinant().norm() / gap;
        centre.norm() + radius <= 1.0 + 1e-12
    }

    /// Whether the transformation preserves the upper half-plane.
    pub fn maps_half_plane_into_half_plane(&self) -> bool {
        let coeffs = [self.a, self.b, self.c, self.d];
        let big = coeffs.iter().copied().fold(Complex64::new(0.0, 0.0), |acc, x| {
            if x.norm() > acc.norm() {
                x
            } else {
                acc
            }
        });
        let rot = big.conj() / big.norm();
        let scale = big.norm();
        let real: Vec<Complex64> = coeffs.iter().map(|x| x * rot).collect();
        if real.iter().any(|x| x.im.abs() > 1e-12 * scale) {
            return false;
        }
        let det = real[0].re * real[3].re - real[1].re * real[2].re;
        det > 0.0
    }

    /// Pole `−d/c`, if finite.
    pub fn pole(&self) -> Option<Complex64> {
        if self.c == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(-self.d / self.c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> SpherePoint {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    #[test]
    fn densities_at_reference_points() {
        assert_eq!(density(MetricId::HyperbolicDisc, c(0.0, 0.0)).unwrap(), 2.0);
        assert_eq!(density(MetricId::Spherical, c(0.0, 0.0)).unwrap(), 2.0);
        assert_eq!(density(MetricId::Euclidean, c(3.0, 4.0)).unwrap(), 1.0);
        assert_eq!(density(MetricId::HyperbolicHalfPlane, c(0.0, 1.0)).unwrap(), 1.0);
        assert_eq!(density(MetricId::Spherical, SpherePoint::Infinity).unwrap(), 0.0);
    }

    #[test]
    fn density_rejects_points_outside_the_domain() {
        assert!(matches!(density(MetricId::HyperbolicDisc, c(1.0, 0.0)), Err(Error::Domain { .. })));
        assert!(matches!(density(MetricId::HyperbolicHalfPlane, c(2.0, 0.0)), Err(Error::Domain { .. })));
        assert!(density(MetricId::Euclidean, SpherePoint::Infinity).is_err());
    }

    #[test]
    fn spherical_density_is_continuous_across_the_inversion_switch() {
        let below = spherical_density(Complex64::new(1.0 - 1e-12, 0.0));
        let above = spherical_density(Complex64::new(1.0 + 1e-12, 0.0));
        assert!((below - above).abs() < 1e-11);
        let far = spherical_density(Complex64::new(1e150, 0.0));
        assert!((far - 2e-300).abs() < 1e-314);
    }

    #[test]
    fn reference_distances() {
        let r = (0.5f64).tanh();
        let d = distance(MetricId::HyperbolicDisc, c(0.0, 0.0), c(r, 0.0)).unwrap();
        assert!((d - 1.0).abs() < 1e-14);
        let d = distance(MetricId::Spherical, c(0.0, 0.0), SpherePoint::Infinity).unwrap();
        assert!((d - PI).abs() < 1e-15);
        let d = distance(MetricId::HyperbolicHalfPlane, c(0.0, 1.0), c(0.0, 4.0)).unwrap();
        assert!((d - 4f64.ln()).abs() < 1e-14);
        assert_eq!(distance(MetricId::Euclidean, c(0.0, 0.0), c(3.0, 4.0)).unwrap(), 5.0);
    }

    #[test]
    fn hyperbolic_distance_keeps_accuracy_near_the_boundary() {
        // d(0, 1 - ε) = log((2 - ε)/ε)
        let eps = 1e-12;
        let d = distance(MetricId::HyperbolicDisc, c(0.0, 0.0), c(1.0 - eps, 0.0)).unwrap();
        let exact = ((2.0 - eps) / eps).ln();
        assert!((d - exact).abs() / exact < 1e-4, "{d} vs {exact}");
    }

    #[test]
    fn chordal_reference_values() {
        assert!((chordal(c(0.0, 0.0), SpherePoint::Infinity) - 2.0).abs() < 1e-15);
        assert!((chordal(c(0.0, 0.0), c(1.0, 0.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(chordal(c(0.3, -0.2), c(0.3, -0.2)), 0.0);
        let w = Complex64::new(2.0, 1.0);
        let k = chordal(SpherePoint::Finite(w), SpherePoint::Infinity);
        assert!((k - 2.0 / (1.0 + w.norm_sqr()).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chordal_matches_closed_form_for_finite_points() {
        let w = Complex64::new(0.7, -2.5);
        let v = Complex64::new(-1.5, 0.25);
        let closed = 2.0 * (w - v).norm() / ((1.0 + w.norm_sqr()).sqrt() * (1.0 + v.norm_sqr()).sqrt());
        assert!((chordal(w.into(), v.into()) - closed).abs() < 1e-15);
    }

    #[test]
    fn mobius_reference_maps() {
        let z0 = Complex64::new(0.3, -0.4);
        let t = MobiusTransform::disc_automorphism(z0, 0.6).unwrap();
        assert_eq!(t.apply(c(0.0, 0.0)), SpherePoint::Finite(z0));
        assert_eq!(MobiusTransform::cayley().apply(c(0.0, 1.0)), c(0.0, 0.0));
        let w = Complex64::new(0.2, 0.5);
        let back = t.compose(&t.inverse()).apply(w.into()).finite().unwrap();
        assert!((back - w).norm() < 1e-15);
        let round = MobiusTransform::inverse_cayley().compose(&MobiusTransform::cayley());
        let p = round.apply(c(1.5, 2.0)).finite().unwrap();
        assert!((p - Complex64::new(1.5, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn mobius_poles_and_infinity() {
        let t = MobiusTransform::cayley();
        assert_eq!(t.apply(c(0.0, -1.0)), SpherePoint::Infinity);
        assert_eq!(t.apply(SpherePoint::Infinity), c(1.0, 0.0));
        assert!(MobiusTransform::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(4.0, 0.0)
        )
        .is_err());
        assert!(MobiusTransform::disc_automorphism(Complex64::new(1.0, 0.0), 0.5).is_err());
        assert!(MobiusTransform::disc_automorphism(Complex64::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn disc_and_half_plane_preservation_tests() {
        let t = MobiusTransform::disc_automorphism(Complex64::new(0.5, 0.1), 0.9).unwrap();
        assert!(t.maps_disc_into_disc());
        assert!(!MobiusTransform::cayley().maps_disc_into_disc());
        assert!(!MobiusTransform::inverse_cayley().maps_disc_into_disc());
        let real = MobiusTransform::new(
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(3.0, 0.0),
        )
        .unwrap();
        assert!(real.maps_half_plane_into_half_plane());
        assert!(!real.inverse().compose(&MobiusTransform::new(
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0)
        ).unwrap()).maps_half_plane_into_half_plane());
    }
}
