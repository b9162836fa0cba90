//! Zero/pole bookkeeping for rational map expressions and small polynomial
//! helpers.

use num_complex::Complex64;

use super::{MapExpr, MapKind};
use crate::error::{Error, Result};
use crate::metrics::{MobiusTransform, SpherePoint};

/// Finite zeros and poles of a rational map, with multiplicity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZerosPoles {
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
}

impl ZerosPoles {
    /// Order of the zero at infinity (negative for a pole).
    fn order_at_infinity(&self) -> i64 {
        self.poles.len() as i64 - self.zeros.len() as i64
    }

    fn cancel(mut self) -> Self {
        let mut kept = Vec::with_capacity(self.zeros.len());
        for z in self.zeros {
            let hit = self.poles.iter().position(|p| (p - z).norm() <= 1e-12 * (1.0 + z.norm()));
            match hit {
                Some(i) => {
                    self.poles.swap_remove(i);
                }
                None => kept.push(z),
            }
        }
        self.zeros = kept;
        self
    }
}

pub(crate) fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `outer(inner(z))`.
pub(crate) fn poly_compose(outer: &[Complex64], inner: &[Complex64]) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0)];
    for c in outer.iter().rev() {
        acc = poly_mul(&acc, inner);
        acc[0] += c;
    }
    acc
}

/// Roots of `Σ a_k z^k` by the Aberth–Ehrlich iteration. Trailing zero
/// coefficients are dropped; a constant polynomial has no roots.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = match coeffs.iter().rposition(|c| c.norm() != 0.0) {
        Some(d) => d,
        None => return Err(Error::Unsupported("the zero polynomial has no isolated roots".into())),
    };
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs[..=degree].iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle.
    let radius = 1.0 + monic[..degree].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / degree as f64))
        .collect();
    let eval = |z: Complex64| {
        let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for c in monic.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..degree {
            let (p, dp) = eval(roots[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree).filter(|&j| j != i).map(|j| (roots[i] - roots[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            roots[i] -= step;
            moved = moved.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    Ok(roots)
}

fn pull_back(t: &MobiusTransform, points: &[Complex64]) -> Vec<Complex64> {
    let inv = t.inverse();
    points.iter().filter_map(|p| inv.apply(SpherePoint::Finite(*p)).finite()).collect()
}

/// Finite zeros and poles of `f` when `f` is rational (an exponential factor
/// without poles is also accepted, contributing nothing).
pub fn zeros_and_poles(f: &MapExpr) -> Result<ZerosPoles> {
    let zp = match f.kind() {
        MapKind::Const(c) => {
            if *c == Complex64::new(0.0, 0.0) {
                return Err(Error::Unsupported("identically zero map".into()));
            }
            ZerosPoles::default()
        }
        MapKind::Scale(l) if *l == Complex64::new(0.0, 0.0) => {
            return Err(Error::Unsupported("identically zero map".into()));
        }
        MapKind::PowerSeries(a) => ZerosPoles { zeros: polynomial_roots(a)?, poles: Vec::new() },
        MapKind::Koebe => ZerosPoles {
            zeros: vec![Complex64::new(0.0, 0.0)],
            poles: vec![Complex64::new(1.0, 0.0); 2],
        },
        MapKind::Exp => ZerosPoles::default(),
        MapKind::Log => return Err(Error::Unsupported("log is not rational".into())),
        MapKind::BlaschkeDisc(zeros) => ZerosPoles {
            zeros: zeros.clone(),
            poles: zeros.iter().filter(|a| a.norm() > 0.0).map(|a| a.conj().inv()).collect(),
        },
        MapKind::BlaschkeHalfPlane { heights, .. } => ZerosPoles {
            zeros: heights.iter().map(|y| Complex64::new(0.0, *y)).collect(),
            poles: heights.iter().map(|y| Complex64::new(0.0, -*y)).collect(),
        },
        MapKind::Product(l, r) => {
            let (l, r) = (zeros_and_poles(l)?, zeros_and_poles(r)?);
            ZerosPoles { zeros: [l.zeros, r.zeros].concat(), poles: [l.poles, r.poles].concat() }.cancel()
        }
        MapKind::Quotient(l, r) => {
            let (l, r) = (zeros_and_poles(l)?, zeros_and_poles(r)?);
            ZerosPoles { zeros: [l.zeros, r.poles].concat(), poles: [l.poles, r.zeros].concat() }.cancel()
        }
        MapKind::Compose { outer, inner } => {
            if let MapKind::Exp = outer.kind() {
                let inner_zp = zeros_and_poles(inner)?;
                if !inner_zp.poles.is_empty() {
                    return Err(Error::Unsupported("exp of a map with poles has essential singularities".into()));
                }
                return Ok(ZerosPoles::default());
            }
            if let MapKind::Const(_) = outer.kind() {
                return zeros_and_poles(outer);
            }
            let t = inner.as_mobius().ok_or_else(|| {
                Error::Unsupported("composition with a non-Möbius inner map is not decomposed".into())
            })?;
            let outer_zp = zeros_and_poles(outer)?;
            let order = outer_zp.order_at_infinity();
            let mut zeros = pull_back(&t, &outer_zp.zeros);
            let mut poles = pull_back(&t, &outer_zp.poles);
            // The point sent to infinity by the inner map inherits the
            // behaviour of the outer map at infinity.
            if let Some(p) = t.pole() {
                let extra = vec![p; order.unsigned_abs() as usize];
                if order > 0 {
                    zeros.extend(extra);
                } else {
                    poles.extend(extra);
                }
            }
            ZerosPoles { zeros, poles }.cancel()
        }
        _ => {
            let t = f.as_mobius().ok_or_else(|| Error::Unsupported("map kind has no zero/pole description".into()))?;
            let zeros = t.inverse().apply(SpherePoint::Finite(Complex64::new(0.0, 0.0))).finite().into_iter().collect();
            ZerosPoles { zeros, poles: t.pole().into_iter().collect() }
        }
    };
    Ok(zp)
}
