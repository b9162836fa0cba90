use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{fmt_witness, Status, VerdictReport};
use crate::error::{Error, Result};
use crate::geodesics::{
    area, area_between, area_from_coefficients, length_profile, try_adaptive_integrate, GrowthSample, QuadConfig,
    RadialArc, MAX_DISC_RHO,
};
use crate::maps::MapExpr;
use crate::metrics::{deriv_norm, MetricId, MobiusTransform};

fn check_source(f: &MapExpr) -> Result<()> {
    match f.domain() {
        MetricId::HyperbolicDisc | MetricId::HyperbolicHalfPlane => Ok(()),
        d => Err(Error::Argument(format!("expected a map on the disc or half-plane, got {d:?}"))),
    }
}

/// Worst `4π‖f′(z)‖² / A` over `grid`, where `A` is the image area in the
/// target metric (Euclidean or hyperbolic).
///
/// Polynomials into the plane use the coefficient formula; everything else
/// integrates to `ρ = ∞`, and a divergent area makes the bound inapplicable.
pub fn check_area_derivative_bound(
    f: &MapExpr,
    target: MetricId,
    grid: &[Complex64],
    q: &QuadConfig,
) -> Result<VerdictReport> {
    check_source(f)?;
    let polynomial = if target == MetricId::Euclidean && f.domain() == MetricId::HyperbolicDisc {
        f.polynomial_coefficients()
    } else {
        None
    };
    let a = match polynomial {
        Some(c) => area_from_coefficients(&c, 1.0)?,
        None => match area(f, f64::INFINITY, target, q) {
            Ok(e) => e.value,
            Err(Error::Divergence { partial }) => {
                return Ok(VerdictReport::inapplicable(
                    "area_derivative_bound",
                    format!("image area diverges (partial sum {partial:.6e})"),
                ))
            }
            Err(e) => return Err(e),
        },
    };
    check_area_derivative_bound_with_area(f, target, a, grid)
}

/// As [`check_area_derivative_bound`] with a caller-supplied area.
pub fn check_area_derivative_bound_with_area(
    f: &MapExpr,
    target: MetricId,
    image_area: f64,
    grid: &[Complex64],
) -> Result<VerdictReport> {
    check_source(f)?;
    if !matches!(target, MetricId::Euclidean | MetricId::HyperbolicDisc | MetricId::HyperbolicHalfPlane) {
        return Err(Error::Argument(format!("target {target:?} is not Euclidean or hyperbolic")));
    }
    if !(image_area >= 0.0) || !image_area.is_finite() {
        return Err(Error::Argument(format!("area {image_area} must be finite and nonnegative")));
    }
    if grid.is_empty() {
        return Err(Error::Argument("empty probe grid".into()));
    }
    let mut worst = (f64::NEG_INFINITY, grid[0]);
    for z in grid {
        let d = deriv_norm(f, *z, target)?;
        let ratio = match (d == 0.0, image_area == 0.0) {
            (true, _) => 0.0,
            (false, true) => f64::INFINITY,
            (false, false) => 4.0 * PI * d * d / image_area,
        };
        if ratio > worst.0 {
            worst = (ratio, *z);
        }
    }
    Ok(VerdictReport::from_ratio(
        "area_derivative_bound",
        worst.0,
        1e-9,
        fmt_witness(worst.1),
        vec![format!("area {image_area:.16e}"), format!("probes {}", grid.len())],
    ))
}

/// `tanh(δ/2)‖f′(z₀)‖_{H→E}` against `(A_E(f(B_H(z₀, δ)))/4π)^{1/2}`.
pub fn check_localized_bound(f: &MapExpr, z0: Complex64, delta: f64, q: &QuadConfig) -> Result<VerdictReport> {
    if f.domain() != MetricId::HyperbolicDisc {
        return Err(Error::Argument("localized bound needs a map on the disc".into()));
    }
    if !(delta > 0.0 && delta <= MAX_DISC_RHO) {
        return Err(Error::Argument(format!("radius {delta} must lie in (0, {MAX_DISC_RHO}]")));
    }
    let moved = f.clone().compose(MapExpr::mobius(MobiusTransform::disc_automorphism(z0, 1.0)?))?;
    let a = area(&moved, delta, MetricId::Euclidean, q)?.value;
    let lhs = (0.5 * delta).tanh() * deriv_norm(f, z0, MetricId::Euclidean)?;
    let rhs = (a / (4.0 * PI)).sqrt();
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(VerdictReport::from_ratio(
        "localized_bound",
        ratio,
        1e-6,
        fmt_witness(z0),
        vec![format!("lhs {lhs:.16e}"), format!("rhs {rhs:.16e}"), format!("area {a:.16e}")],
    ))
}

fn refine(grid: &[Complex64]) -> Vec<Complex64> {
    let mut out = grid.to_vec();
    out.extend(grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).filter(|z| z.norm() < 1.0));
    out
}

/// Empirical constant `c* = max ‖f′(z)‖_{H→S} / A_S(f(𝔻))^{1/2}` for maps
/// whose spherical image area is below `2π`.
///
/// Passes when `c*` is finite and moves by at most 1% when the grid is
/// refined with midpoints of consecutive probes.
pub fn check_spherical_bound(f: &MapExpr, grid: &[Complex64], q: &QuadConfig) -> Result<VerdictReport> {
    const NAME: &str = "spherical_bound";
    check_source(f)?;
    if grid.is_empty() {
        return Err(Error::Argument("empty probe grid".into()));
    }
    let a = match area(f, f64::INFINITY, MetricId::Spherical, q) {
        Ok(e) => e.value,
        Err(Error::Divergence { partial }) => {
            return Ok(VerdictReport::inapplicable(NAME, format!("spherical area diverges ({partial:.6e})")))
        }
        Err(e) => return Err(e),
    };
    if a >= 2.0 * PI {
        return Ok(VerdictReport::inapplicable(NAME, format!("spherical image area {a:.16e} is at least 2π")));
    }
    let cstar = |pts: &[Complex64]| -> Result<(f64, Complex64)> {
        let mut best = (0.0, pts[0]);
        for z in pts {
            let d = deriv_norm(f, *z, MetricId::Spherical)?;
            let c = if d == 0.0 { 0.0 } else { d / a.sqrt() };
            if c > best.0 {
                best = (c, *z);
            }
        }
        Ok(best)
    };
    let (c, witness) = cstar(grid)?;
    let (c_fine, _) = cstar(&refine(grid))?;
    let stable = c.is_finite() && (c_fine - c).abs() <= 1e-2 * c.max(f64::MIN_POSITIVE);
    Ok(VerdictReport {
        name: NAME.into(),
        status: if stable { Status::Pass } else { Status::Fail },
        worst_ratio: c,
        witness: fmt_witness(witness),
        details: vec![format!("area {a:.16e}"), format!("refined {c_fine:.16e}")],
    })
}

/// `‖(λ·koebe)′(0)‖_{H→S}`, which equals `|λ|`.
pub fn spherical_scaling_probe(lambda: Complex64) -> Result<f64> {
    let f = MapExpr::scale(lambda)?.compose(MapExpr::koebe())?;
    deriv_norm(&f, Complex64::new(0.0, 0.0), MetricId::Spherical)
}

/// Length samples along one ray and the ratios `L(ρ)/√ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthTrend {
    pub samples: Vec<GrowthSample>,
    pub ratios: Vec<f64>,
}

impl LengthTrend {
    pub fn strictly_decreasing(&self) -> bool {
        self.ratios.windows(2).all(|w| w[1] < w[0])
    }

    /// Verdict on strict decrease. `worst_ratio` is the largest quotient of
    /// consecutive ratios, so it passes iff below 1.
    pub fn verdict(&self, name: &str) -> VerdictReport {
        let mut worst = (0.0, 0.0);
        for (w, s) in self.ratios.windows(2).zip(&self.samples[1..]) {
            let r = w[1] / w[0];
            if r > worst.0 || worst.0 == 0.0 {
                worst = (r, s.rho);
            }
        }
        VerdictReport {
            name: name.into(),
            status: if self.strictly_decreasing() { Status::Pass } else { Status::Fail },
            worst_ratio: worst.0,
            witness: format!("rho={:.16e}", worst.1),
            details: self.ratios.iter().map(|r| format!("{r:.16e}")).collect(),
        }
    }
}

pub fn length_trend(
    f: &MapExpr,
    arc: &RadialArc,
    rhos: &[f64],
    target: MetricId,
    q: &QuadConfig,
) -> Result<LengthTrend> {
    let samples = length_profile(f, arc, rhos, target, q)?;
    let ratios = samples.iter().map(|s| s.length / s.rho.sqrt()).collect();
    Ok(LengthTrend { samples, ratios })
}

/// Classification of a tail integral from its window increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Convergent,
    Divergent,
    Inconclusive,
}

const WINDOWS: usize = 5;
const DECAY: f64 = 0.999;

fn window_edges(delta: f64, t_end: f64) -> Result<Vec<f64>> {
    let t0 = (2.0 * delta).max(1.0);
    if !(t_end >= 1.5 * t0) {
        return Err(Error::Argument(format!("tail range [{t0}, {t_end}] is too short")));
    }
    let g = (t_end / t0).powf(1.0 / WINDOWS as f64);
    Ok((0..=WINDOWS).map(|k| if k == WINDOWS { t_end } else { t0 * g.powi(k as i32) }).collect())
}

/// Integrates `(δ/tanh(δ/2)) A(t)/(t − δ)^α` over geometric windows from
/// `max(1, 2δ)` to `t_end` and classifies the tail by the ratios of
/// successive increments. Returns the class and the increments.
pub fn alpha_tail_convergence<A>(a: A, alpha: f64, delta: f64, t_end: f64, q: &QuadConfig) -> Result<(Convergence, Vec<f64>)>
where
    A: Fn(f64) -> f64,
{
    if !(alpha > 1.0) || !(delta > 0.0) || !alpha.is_finite() || !delta.is_finite() {
        return Err(Error::Argument(format!("need alpha > 1 and delta > 0, got {alpha} and {delta}")));
    }
    let edges = window_edges(delta, t_end)?;
    let factor = delta / (0.5 * delta).tanh();
    let mut increments = Vec::with_capacity(WINDOWS);
    for w in edges.windows(2) {
        let est = try_adaptive_integrate(|t| Ok(factor * a(t) / (t - delta).powf(alpha)), w[0], w[1], q)?;
        increments.push(est.value);
    }
    if increments.iter().all(|v| *v == 0.0) {
        return Ok((Convergence::Convergent, increments));
    }
    let ratios: Vec<f64> = increments.windows(2).map(|w| w[1] / w[0]).collect();
    let class = if ratios.iter().all(|r| *r < DECAY) {
        Convergence::Convergent
    } else if ratios.iter().all(|r| *r >= DECAY) {
        Convergence::Divergent
    } else {
        Convergence::Inconclusive
    };
    Ok((class, increments))
}

/// Cumulative Euclidean image areas `A(kh)` for `k = 0 … n`.
fn area_table(f: &MapExpr, h: f64, n: usize, q: &QuadConfig) -> Result<Vec<f64>> {
    let pieces: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|k| Ok(area_between(f, k as f64 * h, (k + 1) as f64 * h, MetricId::Euclidean, q)?.value))
        .collect();
    let mut table = vec![0.0];
    for p in pieces {
        let last = *table.last().expect("nonempty");
        table.push(last + p?);
    }
    Ok(table)
}

/// Checks that the area of `f(B_H(0, t))` grows slowly enough for the
/// `α`-weighted tail integral to converge, and if so that `L_E(ρ)/ρ^{α/2}`
/// decreases along eight rays over the upper half of the sampled range.
pub fn alpha_growth_check(f: &MapExpr, alpha: f64, delta: f64, q: &QuadConfig) -> Result<VerdictReport> {
    const NAME: &str = "alpha_growth";
    if f.domain() != MetricId::HyperbolicDisc {
        return Err(Error::Argument("alpha check needs a map on the disc".into()));
    }
    let t_end = MAX_DISC_RHO.min(32.0 * (2.0 * delta).max(1.0));
    let h = 0.25;
    let n = (t_end / h).ceil() as usize;
    let table = area_table(f, h, n, q)?;
    let a_of = |t: f64| {
        let x = (t / h).clamp(0.0, n as f64);
        let k = (x.floor() as usize).min(n - 1);
        let s = x - k as f64;
        table[k] * (1.0 - s) + table[k + 1] * s
    };
    let (class, increments) = alpha_tail_convergence(a_of, alpha, delta, t_end, q)?;
    let mut details: Vec<String> = increments.iter().map(|v| format!("window {v:.16e}")).collect();
    match class {
        Convergence::Divergent => {
            details.insert(0, "tail integral diverges".into());
            return Ok(VerdictReport { details, ..VerdictReport::inapplicable(NAME, String::new()) });
        }
        Convergence::Inconclusive => {
            return Ok(VerdictReport {
                name: NAME.into(),
                status: Status::Inconclusive,
                worst_ratio: f64::NAN,
                witness: "-".into(),
                details,
            });
        }
        Convergence::Convergent => {}
    }
    let rhos: Vec<f64> = (1..=8).map(|k| t_end * k as f64 / 8.0).collect();
    let mut worst = (0.0, 0.0, 0.0);
    for j in 0..8 {
        let theta = 2.0 * PI * j as f64 / 8.0;
        let arc = RadialArc::disc(theta, t_end)?;
        let samples = length_profile(f, &arc, &rhos, MetricId::Euclidean, q)?;
        let scaled: Vec<f64> = samples.iter().map(|s| s.length / s.rho.powf(0.5 * alpha)).collect();
        for (k, w) in scaled.windows(2).enumerate().skip(scaled.len() / 2 - 1) {
            let r = if w[1] == 0.0 { 0.0 } else { w[1] / w[0] };
            if r > worst.0 {
                worst = (r, theta, rhos[k + 1]);
            }
        }
    }
    details.push(format!("largest consecutive ratio {:.16e}", worst.0));
    Ok(VerdictReport {
        name: NAME.into(),
        status: if worst.0 < 1.0 { Status::Pass } else { Status::Fail },
        worst_ratio: worst.0,
        witness: format!("theta={:.16e} rho={:.16e}", worst.1, worst.2),
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::probe_grid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_sharp() {
        let grid = probe_grid(4, 8, 6.0);
        let r = check_area_derivative_bound(&MapExpr::identity(), MetricId::Euclidean, &grid, &QuadConfig::areas()).unwrap();
        assert!(r.passed());
        assert!((r.worst_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn koebe_area_is_divergent() {
        let grid = probe_grid(2, 4, 2.0);
        let r = check_area_derivative_bound(&MapExpr::koebe(), MetricId::Euclidean, &grid, &QuadConfig::areas()).unwrap();
        assert_eq!(r.status, Status::Inapplicable);
    }

    #[test]
    fn localized_identity_equality() {
        let q = QuadConfig::new(1e-12, 1e-11, 40).unwrap();
        for delta in [0.5, 2.0] {
            let r = check_localized_bound(&MapExpr::identity(), c(0.0, 0.0), delta, &q).unwrap();
            assert!((r.worst_ratio - 1.0).abs() < 1e-8, "{}", r.worst_ratio);
        }
        let r = check_localized_bound(&MapExpr::koebe(), c(0.0, 0.3), 1.0, &q).unwrap();
        assert!(r.passed() && r.worst_ratio < 1.0);
    }

    #[test]
    fn spherical_bound_small_scale() {
        let eps = 0.05;
        let f = MapExpr::scale(c(eps, 0.0)).unwrap();
        let r = check_spherical_bound(&f, &probe_grid(8, 8, 6.0), &QuadConfig::areas()).unwrap();
        assert!(r.passed());
        // max at the origin: ε / √(4πε²/(1+ε²))
        let expected = eps / (4.0 * PI * eps * eps / (1.0 + eps * eps)).sqrt();
        assert!((r.worst_ratio - expected).abs() < 1e-6 * expected);
        let k = check_spherical_bound(&MapExpr::koebe(), &probe_grid(2, 4, 2.0), &QuadConfig::areas()).unwrap();
        assert_eq!(k.status, Status::Inapplicable);
        assert!((spherical_scaling_probe(c(0.0, 10.0)).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn synthetic_tails() {
        let q = QuadConfig::default();
        let (alpha, delta) = (1.5, 0.5);
        let (div, _) = alpha_tail_convergence(|t| t.powf(alpha), alpha, delta, 32.0, &q).unwrap();
        assert_eq!(div, Convergence::Divergent);
        let (conv, inc) = alpha_tail_convergence(|t| t.powf(alpha - 2.0), alpha, delta, 32.0, &q).unwrap();
        assert_eq!(conv, Convergence::Convergent);
        assert!(inc.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn trend_verdict() {
        let t = LengthTrend {
            samples: (1..=3).map(|k| GrowthSample { rho: k as f64, length: 1.0 }).collect(),
            ratios: vec![1.0, 0.8, 0.6],
        };
        let v = t.verdict("trend");
        assert!(v.passed());
        assert!((v.worst_ratio - 0.8).abs() < 1e-15);
    }
}
