//! Truncation and sanity checks for Blaschke products.

use num_complex::Complex64;

use super::{MapExpr, MapKind};
use crate::error::{Error, Result};
use crate::metrics::SpherePoint;

/// Heights `y_1, y_2, …` of half-plane Blaschke zeros `i y_n`.
#[derive(Clone, Copy)]
pub enum Heights<'a> {
    Finite(&'a [f64]),
    /// `n ↦ y_n` for `n ≥ 1`.
    Rule(&'a dyn Fn(usize) -> f64),
}

impl Heights<'_> {
    fn get(&self, n: usize) -> Option<f64> {
        match self {
            Heights::Finite(list) => list.get(n - 1).copied(),
            Heights::Rule(rule) => Some(rule(n)),
        }
    }
}

/// A finite Blaschke product together with a bound on what was dropped.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub product: MapExpr,
    /// Bound on the log-modulus error on `{|z| ≤ R}`.
    pub tail_bound: f64,
}

const HEURISTIC_TERMS: usize = 10_000;
const EXPLICIT_TERMS: usize = 1_000_000;

fn check_height(n: usize, y: f64) -> Result<f64> {
    if y > 0.0 && !y.is_nan() {
        Ok(y)
    } else {
        Err(Error::Construction(format!("height y_{n} = {y} must be positive")))
    }
}

/// Reject rules whose reciprocal sum diverges, judged from the local growth
/// exponent of `y_n` over the first ten thousand terms.
fn growth_exponent(rule: &dyn Fn(usize) -> f64) -> Result<f64> {
    let half = check_height(HEURISTIC_TERMS / 2, rule(HEURISTIC_TERMS / 2))?;
    let full = check_height(HEURISTIC_TERMS, rule(HEURISTIC_TERMS))?;
    if full.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let p = (full / half).ln() / std::f64::consts::LN_2;
    if p.is_nan() || p < 1.1 {
        return Err(Error::Construction(format!(
            "heights grow like n^{p:.3}; the sum of 1/y_n does not converge fast enough"
        )));
    }
    Ok(p)
}

/// `Σ_{n>N} term(y_n)` for a rule, with a power-law estimate of the part
/// beyond the explicitly summed range. `term` must behave like `y^{-k}`.
fn rule_tail(rule: &dyn Fn(usize) -> f64, n: usize, k: f64, term: impl Fn(f64) -> f64) -> Result<f64> {
    let p = growth_exponent(rule)?;
    let last = EXPLICIT_TERMS.max(n + 1);
    let mut sum = 0.0;
    for m in (n + 1..=last).rev() {
        sum += term(check_height(m, rule(m))?);
    }
    let y_last = rule(last);
    if y_last.is_finite() {
        // Convex terms lie below their midpoint integrals:
        // Σ_{m>M} term(y_M)(m/M)^{-pk} ≤ term(y_M) ∫_{M+½}^∞ (x/M)^{-pk} dx
        let (pk, big_m) = (p * k, last as f64);
        sum += term(y_last) * big_m / (pk - 1.0) * ((big_m + 0.5) / big_m).powf(1.0 - pk);
    }
    Ok(sum)
}

/// Keep the first `n` factors of the half-plane product with zeros `i y_n`
/// and bound the log-modulus error of the rest on `{|z| ≤ radius}`.
///
/// Each dropped factor satisfies `|1 − b(z)| ≤ 2|z|/y` there, so the bound
/// is `Σ_{m>n} 2R/y_m`. Requires `R ≤ y_{n+1}/2`.
pub fn truncate_blaschke(heights: Heights<'_>, n: usize, radius: f64) -> Result<Truncation> {
    if n == 0 {
        return Err(Error::Argument("truncation needs at least one factor".into()));
    }
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::Argument(format!("radius {radius} must be finite and nonnegative")));
    }
    let kept = match heights {
        Heights::Finite(list) => list.iter().take(n).copied().collect::<Vec<_>>(),
        Heights::Rule(rule) => (1..=n).map(|m| check_height(m, rule(m))).collect::<Result<Vec<_>>>()?,
    };
    let tail_bound = match heights.get(n + 1) {
        None => 0.0,
        Some(next) => {
            if radius > next / 2.0 {
                return Err(Error::Argument(format!(
                    "radius {radius} exceeds half the first dropped height {next}"
                )));
            }
            match heights {
                Heights::Finite(list) => list[n..].iter().map(|y| 2.0 * radius / y).sum(),
                Heights::Rule(rule) => rule_tail(rule, n, 1.0, |y| 2.0 * radius / y)?,
            }
        }
    };
    let signs = vec![1; kept.len()];
    Ok(Truncation { product: MapExpr::blaschke_half_plane(kept, signs)?, tail_bound })
}

/// Log-modulus error bound for the quotient `B(z+1)/B(z−1)` after keeping
/// `n` factors, on `{|z| ≤ radius}`.
///
/// In the quotient the first-order part of each dropped factor pair is the
/// constant `exp(4i/y)`, a rotation that leaves `|f|` and every spherical
/// quantity unchanged. What remains is bounded by
/// `Σ_{m>n} (4/3)|w|³/(1 − |w|²)` with `|w| = (R + 1)/y_m`.
pub fn quotient_tail_bound(heights: Heights<'_>, n: usize, radius: f64) -> Result<f64> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::Argument(format!("radius {radius} must be finite and nonnegative")));
    }
    let next = match heights.get(n + 1) {
        None => return Ok(0.0),
        Some(y) => y,
    };
    if radius + 1.0 >= next {
        return Err(Error::Argument(format!("radius {radius} is too large for first dropped height {next}")));
    }
    let term = |y: f64| {
        let w = (radius + 1.0) / y;
        4.0 / 3.0 * w.powi(3) / (1.0 - w * w)
    };
    match heights {
        Heights::Finite(list) => Ok(list[n..].iter().map(|y| term(*y)).sum()),
        Heights::Rule(rule) => rule_tail(rule, n, 3.0, term),
    }
}

/// `max ||B(e^{iθ})| − 1|` over `samples` equispaced boundary points.
pub fn boundary_modulus_check(f: &MapExpr, samples: usize) -> Result<f64> {
    if !matches!(f.kind(), MapKind::BlaschkeDisc(_)) {
        return Err(Error::Argument("boundary modulus check needs a disc Blaschke product".into()));
    }
    let mut worst = 0.0f64;
    for k in 0..samples {
        let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / samples as f64);
        let modulus = match f.eval_unchecked(zeta)?.to_jet().value {
            SpherePoint::Finite(v) => v.norm(),
            SpherePoint::Infinity => f64::INFINITY,
        };
        worst = worst.max((modulus - 1.0).abs());
    }
    Ok(worst)
}

/// `max |f(−z̄) − conj(f(z))|` over the sample points.
pub fn symmetry_check(f: &MapExpr, samples: &[Complex64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in samples {
        let left = f.evaluate(-z.conj())?.value;
        let right = f.evaluate(*z)?.value;
        let gap = match (left, right) {
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => (a - b.conj()).norm(),
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        };
        worst = worst.max(gap);
    }
    Ok(worst)
}
