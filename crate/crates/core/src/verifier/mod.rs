//! Executable versions of the inequalities, sharpness statements, growth
//! claims and counterexample constructions.

mod bounds;
mod corona;
mod scenarios;

use std::fmt;

use num_complex::Complex64;

pub use bounds::{
    alpha_growth_check, alpha_tail_convergence, check_area_derivative_bound, check_area_derivative_bound_with_area,
    check_localized_bound, check_spherical_bound, length_trend, spherical_scaling_probe, Convergence, LengthTrend,
};
pub use corona::{check_uniform_char_length_bound, CoronaPair};
pub use scenarios::{
    annulus_cover_map, blaschke_quotient_map, scenario_annulus, scenario_blaschke_quotient, scenario_symmetric_blaschke,
    symmetric_blaschke_map, AnnulusReport, QuotientReport, SymmetricReport,
};

use crate::error::{Error, Result};
use crate::geodesics::GrowthSample;

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A hypothesis of the statement does not hold for the input.
    Inapplicable,
    /// The numerics could not decide.
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inapplicable => "INAPPLICABLE",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Result of one check, with the worst left/right ratio over the probes.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub name: String,
    pub status: Status,
    pub worst_ratio: f64,
    pub witness: String,
    pub details: Vec<String>,
}

impl VerdictReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub(crate) fn inapplicable(name: &str, reason: String) -> Self {
        VerdictReport {
            name: name.into(),
            status: Status::Inapplicable,
            worst_ratio: f64::NAN,
            witness: "-".into(),
            details: vec![reason],
        }
    }

    pub(crate) fn from_ratio(name: &str, worst_ratio: f64, tolerance: f64, witness: String, details: Vec<String>) -> Self {
        let status = if worst_ratio <= 1.0 + tolerance { Status::Pass } else { Status::Fail };
        VerdictReport { name: name.into(), status, worst_ratio, witness, details }
    }

    /// `name | STATUS | worst_ratio | witness`
    pub fn line(&self) -> String {
        format!("{} | {} | {:.16e} | {}", self.name, self.status, self.worst_ratio, self.witness)
    }
}

pub(crate) fn fmt_witness(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// Growth models for `L(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthModel {
    /// `log L = α log ρ + c`
    PowerLaw,
    /// `log L = βρ + c`
    Exponential,
}

/// Least-squares fit of a growth model in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub samples: Vec<GrowthSample>,
    pub model: GrowthModel,
    pub exponent: f64,
    pub constant: f64,
    /// RMS residual in log space.
    pub residual: f64,
    /// `L(ρ)/√ρ` for each sample.
    pub sqrt_ratios: Vec<f64>,
}

impl GrowthFit {
    /// Whether the `L/√ρ` sequence is strictly decreasing over its last
    /// `window` entries.
    pub fn eventually_decreasing(&self, window: usize) -> bool {
        let n = self.sqrt_ratios.len();
        let start = n.saturating_sub(window);
        self.sqrt_ratios[start..].windows(2).all(|w| w[1] < w[0])
    }
}

/// Fit `samples` to `model`. Needs at least four samples with strictly
/// increasing `ρ` and positive lengths.
pub fn growth_fit(samples: &[GrowthSample], model: GrowthModel) -> Result<GrowthFit> {
    if samples.len() < 4 {
        return Err(Error::Argument(format!("growth fit needs at least 4 samples, got {}", samples.len())));
    }
    if samples.windows(2).any(|w| w[1].rho <= w[0].rho) || samples[0].rho <= 0.0 {
        return Err(Error::Argument("sample radii must be positive and strictly increasing".into()));
    }
    if let Some(s) = samples.iter().find(|s| !(s.length > 0.0) || !s.length.is_finite()) {
        return Err(Error::Data(format!("length {} at rho {} is not positive", s.length, s.rho)));
    }
    let xs: Vec<f64> = samples
        .iter()
        .map(|s| match model {
            GrowthModel::PowerLaw => s.rho.ln(),
            GrowthModel::Exponential => s.rho,
        })
        .collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.length.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let constant = my - exponent * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - exponent * x - constant).powi(2)).sum::<f64>() / n).sqrt();
    Ok(GrowthFit {
        samples: samples.to_vec(),
        model,
        exponent,
        constant,
        residual,
        sqrt_ratios: samples.iter().map(|s| s.length / s.rho.sqrt()).collect(),
    })
}

/// Probe points at `radii` hyperbolically equispaced radii in `(0, rho_max]`
/// and `angles` angles, plus the origin.
pub fn probe_grid(radii: usize, angles: usize, rho_max: f64) -> Vec<Complex64> {
    let mut grid = vec![Complex64::new(0.0, 0.0)];
    for k in 1..=radii {
        let r = (0.5 * rho_max * k as f64 / radii as f64).tanh();
        for j in 0..angles {
            grid.push(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / angles as f64));
        }
    }
    grid
}

/// 32 radii × 64 angles up to `ρ = 12`.
pub fn default_probe_grid() -> Vec<Complex64> {
    probe_grid(32, 64, 12.0)
}
