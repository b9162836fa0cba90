use num_complex::Complex64;

use super::{fmt_witness, Status, VerdictReport};
use crate::error::{Error, Result};
use crate::geodesics::{try_adaptive_integrate, QuadConfig, RadialArc, MAX_DISC_RHO};
use crate::maps::{MapExpr, ProjectiveJet};
use crate::metrics::{stretch, MetricId, SpherePoint};
use crate::nevanlinna::Decomposition;

/// A pair of bounded analytic maps `F = (f₀, f_∞)` on the disc.
pub trait CoronaPair {
    /// `(f₀, f₀′)` and `(f_∞, f_∞′)` at `z`.
    fn jets(&self, z: Complex64) -> Result<[(Complex64, Complex64); 2]>;
}

fn finite_jet(f: &MapExpr, z: Complex64) -> Result<(Complex64, Complex64)> {
    let jet = f.evaluate(z)?;
    match jet.value {
        SpherePoint::Finite(v) => Ok((v, jet.derivative)),
        SpherePoint::Infinity => Err(Error::Range { metric: MetricId::Euclidean, value: "inf".into() }),
    }
}

impl CoronaPair for (MapExpr, MapExpr) {
    fn jets(&self, z: Complex64) -> Result<[(Complex64, Complex64); 2]> {
        Ok([finite_jet(&self.0, z)?, finite_jet(&self.1, z)?])
    }
}

impl CoronaPair for Decomposition {
    fn jets(&self, z: Complex64) -> Result<[(Complex64, Complex64); 2]> {
        Ok([self.f0(z)?, self.finf(z)?])
    }
}

struct Probe {
    norm: f64,
    /// `‖(f₀/f_∞)′‖_{H→S}`
    quotient: f64,
    /// `‖F′‖ (1 − |z|²)`
    schwarz_pick: f64,
}

fn probe<P: CoronaPair + ?Sized>(pair: &P, z: Complex64) -> Result<Probe> {
    let [(a, da), (b, db)] = pair.jets(z)?;
    let jet = ProjectiveJet { num: a, dnum: da, den: b, dden: db };
    let lambda = 2.0 / (1.0 - z.norm_sqr());
    Ok(Probe {
        norm: (a.norm_sqr() + b.norm_sqr()).sqrt(),
        quotient: stretch(&jet, lambda, MetricId::Spherical)?,
        schwarz_pick: (da.norm_sqr() + db.norm_sqr()).sqrt() * (1.0 - z.norm_sqr()),
    })
}

/// Checks the uniform length bound for `f = f₀/f_∞` under the hypothesis
/// `δ ≤ ‖F‖ ≤ 1` on `grid`:
/// `‖f′‖_{H→S} ≤ 2/‖F‖ ≤ 2/δ` and `‖F′‖(1 − |z|²) ≤ 2` at every probe, and
/// `L_S(ρ) ≤ 2ρ/δ` along every arc.
///
/// `worst_ratio` is the largest left/right quotient over all four families.
pub fn check_uniform_char_length_bound<P>(
    pair: &P,
    delta: f64,
    arcs: &[RadialArc],
    grid: &[Complex64],
    q: &QuadConfig,
) -> Result<VerdictReport>
where
    P: CoronaPair + Sync + ?Sized,
{
    const NAME: &str = "uniform_char_length_bound";
    const TOL: f64 = 1e-8;
    const LENGTH_TOL: f64 = 1e-6;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Argument(format!("delta {delta} must lie in (0, 1]")));
    }
    if grid.is_empty() {
        return Err(Error::Argument("empty probe grid".into()));
    }
    if let Some(arc) = arcs.iter().find(|a| a.domain() != MetricId::HyperbolicDisc || a.rho_max() > MAX_DISC_RHO) {
        return Err(Error::Argument(format!("arc {arc:?} is not a disc ray within rho ≤ {MAX_DISC_RHO}")));
    }
    let probes: Vec<Probe> = grid.iter().map(|z| probe(pair, *z)).collect::<Result<_>>()?;
    let (lo, hi) = probes.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.norm), hi.max(p.norm)));
    if lo < delta * (1.0 - 1e-12) || hi > 1.0 + 1e-12 {
        return Ok(VerdictReport::inapplicable(
            NAME,
            format!("‖F‖ ranges over [{lo:.6e}, {hi:.6e}], outside [{delta:.6e}, 1]"),
        ));
    }
    let mut worst = (0.0f64, String::from("-"));
    let mut failed = false;
    let mut note = |ratio: f64, ok: bool, witness: String| {
        failed |= !ok;
        if ratio > worst.0 {
            worst = (ratio, witness);
        }
    };
    for (z, p) in grid.iter().zip(&probes) {
        let own = 2.0 / p.norm;
        note(p.quotient / own, p.quotient <= own + TOL, fmt_witness(*z));
        note(p.quotient / (2.0 / delta), p.quotient <= 2.0 / delta + TOL, fmt_witness(*z));
        note(p.schwarz_pick / 2.0, p.schwarz_pick <= 2.0 + TOL, fmt_witness(*z));
    }
    let mut details = vec![format!("norm range [{lo:.16e}, {hi:.16e}]")];
    for arc in arcs {
        let rho = arc.rho_max();
        let length = try_adaptive_integrate(
            |t| {
                let z = Complex64::from_polar((0.5 * t).tanh(), arc.theta());
                Ok(probe(pair, z)?.quotient)
            },
            0.0,
            rho,
            q,
        )?
        .value;
        let bound = 2.0 * rho / delta;
        details.push(format!("theta {:.16e} length {length:.16e} bound {bound:.16e}", arc.theta()));
        note(length / bound, length <= bound + LENGTH_TOL, format!("theta={:.16e} rho={rho:.16e}", arc.theta()));
    }
    Ok(VerdictReport {
        name: NAME.into(),
        status: if failed { Status::Fail } else { Status::Pass },
        worst_ratio: worst.0,
        witness: worst.1,
        details,
    })
}
