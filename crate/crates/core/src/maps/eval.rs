use num_complex::Complex64;

use super::{MapExpr, MapKind};
use crate::error::{fmt_point, Error, Result};
use crate::metrics::{MobiusTransform, SpherePoint};

/// Value and first derivative of a map at a point.
///
/// When `value` is `Infinity`, `derivative` holds the derivative of `1/f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: SpherePoint,
    pub derivative: Complex64,
}

impl Jet {
    /// The jet of `1/f` at the same point.
    pub fn reciprocal(&self) -> Jet {
        match self.value {
            SpherePoint::Infinity => Jet { value: SpherePoint::Finite(Complex64::new(0.0, 0.0)), derivative: self.derivative },
            SpherePoint::Finite(v) if v == Complex64::new(0.0, 0.0) => {
                Jet { value: SpherePoint::Infinity, derivative: self.derivative }
            }
            SpherePoint::Finite(v) => {
                let inv = v.inv();
                Jet { value: SpherePoint::Finite(inv), derivative: -self.derivative * inv * inv }
            }
        }
    }
}

/// A map written locally as `N/D` together with `N'` and `D'`.
///
/// Multiplying all four entries by one constant leaves both `N/D` and
/// `(N'D − ND')/D²` unchanged, so entries are rescaled after every operation
/// and poles need no special treatment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveJet {
    pub num: Complex64,
    pub dnum: Complex64,
    pub den: Complex64,
    pub dden: Complex64,
}

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl ProjectiveJet {
    pub fn finite(value: Complex64, derivative: Complex64) -> Self {
        ProjectiveJet { num: value, dnum: derivative, den: c1(), dden: c0() }
    }

    fn normalized(self, z: Complex64) -> Result<Self> {
        let s = self.num.norm().max(self.den.norm());
        if s == 0.0 {
            return Err(Error::Indeterminate { point: fmt_point(z) });
        }
        if !s.is_finite() {
            return Err(Error::Evaluation { point: fmt_point(z), reason: "overflow".into() });
        }
        Ok(ProjectiveJet { num: self.num / s, dnum: self.dnum / s, den: self.den / s, dden: self.dden / s })
    }

    /// `N'D − ND'`, the Wronskian-type numerator of `f'`.
    pub fn cross(&self) -> Complex64 {
        self.dnum * self.den - self.num * self.dden
    }

    /// `|f'| · 2/(1 + |f|²)`, valid at poles too.
    pub fn spherical_derivative(&self) -> f64 {
        2.0 * self.cross().norm() / (self.num.norm_sqr() + self.den.norm_sqr())
    }

    /// `(f, f')` when `f` is finite.
    pub fn finite_value(&self) -> Option<(Complex64, Complex64)> {
        if self.den == c0() {
            return None;
        }
        let v = self.num / self.den;
        let d = self.cross() / (self.den * self.den);
        if v.re.is_finite() && v.im.is_finite() && d.re.is_finite() && d.im.is_finite() {
            Some((v, d))
        } else {
            None
        }
    }

    pub fn to_jet(&self) -> Jet {
        match self.finite_value() {
            Some((v, d)) => Jet { value: SpherePoint::Finite(v), derivative: d },
            // derivative of 1/f = D/N is (D'N − DN')/N²
            None => Jet { value: SpherePoint::Infinity, derivative: -self.cross() / (self.num * self.num) },
        }
    }

    fn mobius(&self, t: &MobiusTransform) -> Self {
        ProjectiveJet {
            num: t.a * self.num + t.b * self.den,
            dnum: t.a * self.dnum + t.b * self.dden,
            den: t.c * self.num + t.d * self.den,
            dden: t.c * self.dnum + t.d * self.dden,
        }
    }

    fn times(&self, o: &Self) -> Self {
        ProjectiveJet {
            num: self.num * o.num,
            dnum: self.dnum * o.num + self.num * o.dnum,
            den: self.den * o.den,
            dden: self.dden * o.den + self.den * o.dden,
        }
    }

    fn invert(&self) -> Self {
        ProjectiveJet { num: self.den, dnum: self.dden, den: self.num, dden: self.dnum }
    }

    /// Chain rule: `self` evaluated at `g(z)`, `dg = g'(z)`.
    fn chain(&self, dg: Complex64) -> Self {
        ProjectiveJet { num: self.num, dnum: self.dnum * dg, den: self.den, dden: self.dden * dg }
    }
}

impl MapExpr {
    /// Value and derivative at `z`; `z` must lie in the domain.
    pub fn evaluate(&self, z: Complex64) -> Result<Jet> {
        Ok(self.evaluate_projective(z)?.to_jet())
    }

    /// Projective jet at `z`, checking that `z` lies in the domain.
    pub fn evaluate_projective(&self, z: Complex64) -> Result<ProjectiveJet> {
        if !self.domain().contains(SpherePoint::Finite(z)) {
            return Err(Error::Domain { metric: self.domain(), point: fmt_point(z) });
        }
        self.eval_unchecked(z)
    }

    /// Projective jet with no domain check (used when a subtree is evaluated
    /// at points its tag would reject, e.g. boundary sampling).
    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Result<ProjectiveJet> {
        if let Some(t) = self.as_mobius() {
            return ProjectiveJet::finite(z, c1()).mobius(&t).normalized(z);
        }
        let jet = match self.kind() {
            MapKind::Const(c) => ProjectiveJet::finite(*c, c0()),
            MapKind::Scale(_) => ProjectiveJet::finite(c0(), c0()),
            MapKind::PowerSeries(a) => {
                let (mut p, mut dp) = (c0(), c0());
                for coeff in a.iter().rev() {
                    dp = dp * z + p;
                    p = p * z + coeff;
                }
                ProjectiveJet::finite(p, dp)
            }
            MapKind::Koebe => {
                let w = c1() - z;
                ProjectiveJet { num: z, dnum: c1(), den: w * w, dden: -2.0 * w }
            }
            MapKind::Exp => {
                if z.re > 0.0 {
                    // e^z scaled by e^{-Re z}
                    let phase = Complex64::from_polar(1.0, z.im);
                    ProjectiveJet { num: phase, dnum: phase, den: Complex64::new((-z.re).exp(), 0.0), dden: c0() }
                } else {
                    let e = z.exp();
                    ProjectiveJet::finite(e, e)
                }
            }
            MapKind::Log => {
                if z == c0() {
                    return Err(Error::Evaluation { point: fmt_point(z), reason: "log singularity".into() });
                }
                ProjectiveJet::finite(z.ln(), z.inv())
            }
            MapKind::BlaschkeDisc(zeros) => {
                let mut acc = ProjectiveJet::finite(c1(), c0());
                for a in zeros {
                    let unit = if *a == c0() { c1() } else { unit_normalizer(*a) };
                    let factor = ProjectiveJet { num: unit * (a - z), dnum: -unit, den: c1() - a.conj() * z, dden: -a.conj() };
                    acc = acc.times(&factor).normalized(z)?;
                }
                acc
            }
            MapKind::BlaschkeHalfPlane { heights, signs } => {
                let mut acc = ProjectiveJet::finite(c1(), c0());
                for (y, s) in heights.iter().zip(signs) {
                    let iy = Complex64::new(0.0, *y);
                    let s = f64::from(*s);
                    let factor = ProjectiveJet { num: s * (iy - z), dnum: Complex64::new(-s, 0.0), den: iy + z, dden: c1() };
                    acc = acc.times(&factor).normalized(z)?;
                }
                acc
            }
            MapKind::Product(l, r) => l.eval_unchecked(z)?.times(&r.eval_unchecked(z)?),
            MapKind::Quotient(l, r) => l.eval_unchecked(z)?.times(&r.eval_unchecked(z)?.invert()),
            MapKind::Compose { outer, inner } => {
                let h = inner.eval_unchecked(z)?;
                if let Some(t) = outer.as_mobius() {
                    h.mobius(&t)
                } else if let MapKind::Const(c) = outer.kind() {
                    ProjectiveJet::finite(*c, c0())
                } else {
                    let (w, dw) = h.finite_value().ok_or_else(|| Error::Evaluation {
                        point: fmt_point(z),
                        reason: "inner map has a pole here and the outer map is not Möbius".into(),
                    })?;
                    outer.eval_unchecked(w)?.chain(dw)
                }
            }
            MapKind::Identity | MapKind::Shift(_) | MapKind::Mobius(_) | MapKind::Cayley | MapKind::InverseCayley => {
                unreachable!("Möbius leaves handled above")
            }
        };
        jet.normalized(z)
    }
}

/// `|a|/a` for `a ≠ 0`.
fn unit_normalizer(a: Complex64) -> Complex64 {
    a.norm() / a
}
