//! Expression trees for the analytic maps studied by the crate.
//!
//! Every node carries a domain and a codomain tag. Leaves such as `koebe` or
//! `blaschke_hp` have a fixed domain; the affine leaves, power series, `exp`
//! and `log` adopt whatever domain they are placed on, and their codomain is
//! worked out from their coefficients. Composition checks that the inner
//! codomain is contained in the outer domain.

mod blaschke;
mod eval;
mod rational;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::metrics::{MetricId, MobiusTransform};

pub use blaschke::{
    boundary_modulus_check, quotient_tail_bound, symmetry_check, truncate_blaschke, Heights, Truncation,
};
pub use eval::{Jet, ProjectiveJet};
pub use rational::{polynomial_roots, zeros_and_poles, ZerosPoles};

/// The node kinds of a map expression.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Identity,
    Const(Complex64),
    Scale(Complex64),
    Shift(Complex64),
    PowerSeries(Vec<Complex64>),
    Mobius(MobiusTransform),
    Koebe,
    Exp,
    /// Principal branch.
    Log,
    /// `∏ (|a|/a)(a − z)/(1 − conj(a) z)`, normalizer dropped for `a = 0`.
    BlaschkeDisc(Vec<Complex64>),
    /// `∏ s_n (i y_n − z)/(i y_n + z)` with `s_n = ±1`.
    BlaschkeHalfPlane { heights: Vec<f64>, signs: Vec<i8> },
    Cayley,
    InverseCayley,
    Product(Box<MapExpr>, Box<MapExpr>),
    Quotient(Box<MapExpr>, Box<MapExpr>),
    /// `outer ∘ inner`.
    Compose { outer: Box<MapExpr>, inner: Box<MapExpr> },
}

/// An analytic (or meromorphic) map with its source and target tags.
#[derive(Debug, Clone, PartialEq)]
pub struct MapExpr {
    kind: MapKind,
    domain: MetricId,
    codomain: MetricId,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn check_finite(label: &str, c: Complex64) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Construction(format!("{label} must be finite")))
    }
}

impl MapExpr {
    /// Build from a kind, inferring tags from the natural domain (the disc
    /// when nothing in the tree pins one).
    pub fn from_kind(kind: MapKind) -> Result<Self> {
        validate_leaf(&kind)?;
        let domain = natural_domain(&kind)?.unwrap_or(MetricId::HyperbolicDisc);
        infer(kind, domain)
    }

    pub fn identity() -> Self {
        Self::leaf(MapKind::Identity)
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        check_finite("constant", c)?;
        Ok(Self::leaf(MapKind::Const(c)))
    }

    pub fn scale(lambda: Complex64) -> Result<Self> {
        check_finite("scale factor", lambda)?;
        Ok(Self::leaf(MapKind::Scale(lambda)))
    }

    pub fn shift(c: Complex64) -> Result<Self> {
        check_finite("shift", c)?;
        Ok(Self::leaf(MapKind::Shift(c)))
    }

    pub fn power_series(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::from_kind(MapKind::PowerSeries(coeffs))
    }

    pub fn mobius(t: MobiusTransform) -> Self {
        Self::leaf(MapKind::Mobius(t))
    }

    pub fn koebe() -> Self {
        Self::leaf(MapKind::Koebe)
    }

    pub fn exp() -> Self {
        Self::leaf(MapKind::Exp)
    }

    pub fn log() -> Self {
        Self::leaf(MapKind::Log)
    }

    pub fn cayley() -> Self {
        Self::leaf(MapKind::Cayley)
    }

    pub fn inverse_cayley() -> Self {
        Self::leaf(MapKind::InverseCayley)
    }

    pub fn blaschke_disc(zeros: Vec<Complex64>) -> Result<Self> {
        Self::from_kind(MapKind::BlaschkeDisc(zeros))
    }

    pub fn blaschke_half_plane(heights: Vec<f64>, signs: Vec<i8>) -> Result<Self> {
        Self::from_kind(MapKind::BlaschkeHalfPlane { heights, signs })
    }

    /// `self ∘ inner`.
    pub fn compose(self, inner: MapExpr) -> Result<Self> {
        Self::from_kind(MapKind::Compose { outer: Box::new(self), inner: Box::new(inner) })
    }

    pub fn times(self, other: MapExpr) -> Result<Self> {
        Self::from_kind(MapKind::Product(Box::new(self), Box::new(other)))
    }

    pub fn over(self, denominator: MapExpr) -> Result<Self> {
        Self::from_kind(MapKind::Quotient(Box::new(self), Box::new(denominator)))
    }

    /// Re-tag the tree for a different source space.
    pub fn on_domain(self, domain: MetricId) -> Result<Self> {
        infer(self.kind, domain)
    }

    fn leaf(kind: MapKind) -> Self {
        // Leaves without data constraints cannot fail inference.
        Self::from_kind(kind).expect("leaf inference")
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn domain(&self) -> MetricId {
        self.domain
    }

    pub fn codomain(&self) -> MetricId {
        self.codomain
    }

    /// The map as a Möbius transformation, when it is one.
    pub fn as_mobius(&self) -> Option<MobiusTransform> {
        let one = Complex64::new(1.0, 0.0);
        match &self.kind {
            MapKind::Identity => Some(MobiusTransform::identity()),
            MapKind::Scale(l) if *l != zero() => Some(MobiusTransform { a: *l, b: zero(), c: zero(), d: one }),
            MapKind::Shift(c) => Some(MobiusTransform { a: one, b: *c, c: zero(), d: one }),
            MapKind::Mobius(t) => Some(*t),
            MapKind::Cayley => Some(MobiusTransform::cayley()),
            MapKind::InverseCayley => Some(MobiusTransform::inverse_cayley()),
            _ => None,
        }
    }

    /// Taylor coefficients at the origin when the map is a polynomial built
    /// from affine leaves, power series, products and compositions.
    pub fn polynomial_coefficients(&self) -> Option<Vec<Complex64>> {
        let one = Complex64::new(1.0, 0.0);
        let poly = match &self.kind {
            MapKind::Identity => vec![zero(), one],
            MapKind::Const(c) => vec![*c],
            MapKind::Scale(l) => vec![zero(), *l],
            MapKind::Shift(c) => vec![*c, one],
            MapKind::PowerSeries(a) => a.clone(),
            MapKind::Product(l, r) => rational::poly_mul(&l.polynomial_coefficients()?, &r.polynomial_coefficients()?),
            MapKind::Compose { outer, inner } => {
                rational::poly_compose(&outer.polynomial_coefficients()?, &inner.polynomial_coefficients()?)
            }
            _ => return None,
        };
        let len = poly.iter().rposition(|c| *c != zero()).map_or(1, |d| d + 1);
        Some(poly[..len].to_vec())
    }
}

fn validate_leaf(kind: &MapKind) -> Result<()> {
    match kind {
        MapKind::PowerSeries(a) => {
            if a.is_empty() {
                return Err(Error::Construction("power series needs at least one coefficient".into()));
            }
            a.iter().try_for_each(|c| check_finite("power series coefficient", *c))
        }
        MapKind::BlaschkeDisc(zeros) => {
            for a in zeros {
                check_finite("Blaschke zero", *a)?;
                if a.norm() >= 1.0 {
                    return Err(Error::Construction(format!("Blaschke zero {a} must lie in the open unit disc")));
                }
            }
            Ok(())
        }
        MapKind::BlaschkeHalfPlane { heights, signs } => {
            if heights.len() != signs.len() {
                return Err(Error::Construction(format!(
                    "{} heights but {} signs",
                    heights.len(),
                    signs.len()
                )));
            }
            if let Some(y) = heights.iter().find(|y| !(**y > 0.0 && y.is_finite())) {
                return Err(Error::Construction(format!("height {y} must be positive and finite")));
            }
            if let Some(s) = signs.iter().find(|s| !matches!(**s, 1 | -1)) {
                return Err(Error::Construction(format!("sign {s} must be +1 or -1")));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Domain forced by fixed-domain leaves, if any.
fn natural_domain(kind: &MapKind) -> Result<Option<MetricId>> {
    Ok(match kind {
        MapKind::Koebe | MapKind::BlaschkeDisc(_) | MapKind::InverseCayley => Some(MetricId::HyperbolicDisc),
        MapKind::BlaschkeHalfPlane { .. } | MapKind::Cayley => Some(MetricId::HyperbolicHalfPlane),
        MapKind::Compose { outer, inner } => match inner.natural() {
            Some(d) => Some(d),
            None => outer.natural(),
        },
        MapKind::Product(l, r) | MapKind::Quotient(l, r) => l.natural().or(r.natural()),
        _ => None,
    })
}

impl MapExpr {
    fn natural(&self) -> Option<MetricId> {
        natural_domain(&self.kind).ok().flatten()
    }
}

fn fixed_tags(kind: &MapKind) -> Option<(MetricId, MetricId)> {
    use MetricId::*;
    match kind {
        MapKind::Koebe => Some((HyperbolicDisc, Euclidean)),
        MapKind::BlaschkeDisc(_) => Some((HyperbolicDisc, HyperbolicDisc)),
        MapKind::BlaschkeHalfPlane { .. } => Some((HyperbolicHalfPlane, HyperbolicDisc)),
        MapKind::Cayley => Some((HyperbolicHalfPlane, HyperbolicDisc)),
        MapKind::InverseCayley => Some((HyperbolicDisc, HyperbolicHalfPlane)),
        _ => None,
    }
}

/// Tag `kind` for source space `domain`, recursively.
fn infer(kind: MapKind, domain: MetricId) -> Result<MapExpr> {
    use MetricId::*;
    if let Some((fixed_domain, codomain)) = fixed_tags(&kind) {
        if domain != fixed_domain {
            return Err(Error::Composition { outer: fixed_domain, inner: domain });
        }
        return Ok(MapExpr { kind, domain, codomain });
    }
    let widen = |d: MetricId| if d == Spherical { Spherical } else { Euclidean };
    let codomain = match &kind {
        MapKind::Identity => domain,
        MapKind::Const(c) => {
            if c.norm() < 1.0 {
                HyperbolicDisc
            } else if c.im > 0.0 {
                HyperbolicHalfPlane
            } else {
                Euclidean
            }
        }
        MapKind::Scale(l) => match domain {
            HyperbolicDisc if l.norm() <= 1.0 => HyperbolicDisc,
            HyperbolicHalfPlane if l.im == 0.0 && l.re > 0.0 => HyperbolicHalfPlane,
            d => widen(d),
        },
        MapKind::Shift(c) => match domain {
            HyperbolicDisc if *c == zero() => HyperbolicDisc,
            HyperbolicHalfPlane if c.im >= 0.0 => HyperbolicHalfPlane,
            d => widen(d),
        },
        MapKind::PowerSeries(a) => match domain {
            HyperbolicDisc => {
                let total: f64 = a.iter().map(|c| c.norm()).sum();
                if total <= 1.0 && (a.len() > 1 || a[0].norm() < 1.0) && a[0].norm() < 1.0 {
                    HyperbolicDisc
                } else {
                    Euclidean
                }
            }
            d => widen(d),
        },
        MapKind::Mobius(t) => match domain {
            HyperbolicDisc if t.maps_disc_into_disc() => HyperbolicDisc,
            HyperbolicDisc if t.pole().is_none_or(|p| p.norm() > 1.0) => Euclidean,
            HyperbolicHalfPlane if t.maps_half_plane_into_half_plane() => HyperbolicHalfPlane,
            Euclidean if t.pole().is_none() => Euclidean,
            _ => Spherical,
        },
        MapKind::Exp | MapKind::Log => Euclidean,
        MapKind::Product(..) | MapKind::Quotient(..) | MapKind::Compose { .. } => {
            return infer_compound(kind, domain);
        }
        _ => unreachable!("fixed leaves handled above"),
    };
    Ok(MapExpr { kind, domain, codomain })
}

fn infer_compound(kind: MapKind, domain: MetricId) -> Result<MapExpr> {
    use MetricId::*;
    match kind {
        MapKind::Product(l, r) => {
            let l = infer(l.kind, domain)?;
            let r = infer(r.kind, domain)?;
            let codomain = if l.codomain == HyperbolicDisc && r.codomain == HyperbolicDisc {
                HyperbolicDisc
            } else if l.codomain == Spherical || r.codomain == Spherical {
                Spherical
            } else {
                Euclidean
            };
            Ok(MapExpr { kind: MapKind::Product(Box::new(l), Box::new(r)), domain, codomain })
        }
        MapKind::Quotient(l, r) => {
            let l = infer(l.kind, domain)?;
            let r = infer(r.kind, domain)?;
            Ok(MapExpr { kind: MapKind::Quotient(Box::new(l), Box::new(r)), domain, codomain: Spherical })
        }
        MapKind::Compose { outer, inner } => {
            let inner = infer(inner.kind, domain)?;
            let outer_domain = outer.natural().unwrap_or(inner.codomain);
            if !inner.codomain.is_subset_of(outer_domain) {
                return Err(Error::Composition { outer: outer_domain, inner: inner.codomain });
            }
            let outer = infer(outer.kind, outer_domain)?;
            let codomain = outer.codomain;
            Ok(MapExpr {
                kind: MapKind::Compose { outer: Box::new(outer), inner: Box::new(inner) },
                domain,
                codomain,
            })
        }
        _ => unreachable!(),
    }
}
