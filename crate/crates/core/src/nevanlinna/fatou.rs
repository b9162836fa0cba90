//! `f = f₀/f_∞` with `|f₀|² + |f_∞|² = 1` on the circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{boundary_value, interior_divisor};
use crate::error::{Error, Result};
use crate::maps::MapExpr;
use crate::metrics::{chordal, SpherePoint};

/// Largest sample count tried by [`fatou_decompose_auto`].
const MAX_SAMPLES: usize = 1 << 20;
/// Coefficient energy allowed beyond `|n| > M/4`, relative to the total.
const TAIL_FRACTION: f64 = 1e-8;

/// Blaschke parts and boundary Fourier data of a decomposition.
///
/// Fourier lists have length `M` and hold coefficients `c_n` for
/// `n = −M/2 … M/2 − 1` in that order. `phase` is the constant added to the
/// conjugate of `u₀` so that `f₀/f_∞` reproduces `f` exactly; the conjugate
/// of `u_∞` has mean zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub b0_zeros: Vec<Complex64>,
    pub binf_poles: Vec<Complex64>,
    pub u0_fourier: Vec<Complex64>,
    pub uinf_fourier: Vec<Complex64>,
    pub boundary_samples: usize,
    pub phase: f64,
}

/// `c_0 + 2 Σ_{n≥1} c_n z^n` and its derivative.
fn analytic_completion(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let m = coeffs.len();
    let half = m / 2;
    let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for n in (1..half).rev() {
        dp = dp * z + p;
        p = p * z + coeffs[half + n];
    }
    // p = Σ_{n≥1} c_n z^{n−1}
    let value = coeffs[half] + 2.0 * z * p;
    let derivative = 2.0 * (p + z * dp);
    (value, derivative)
}

impl Decomposition {
    fn part(&self, zeros: &[Complex64], coeffs: &[Complex64], phase: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain { metric: crate::metrics::MetricId::HyperbolicDisc, point: crate::error::fmt_point(z) });
        }
        let b = MapExpr::blaschke_disc(zeros.to_vec())?.eval_unchecked(z)?;
        let (bv, bd) = b.finite_value().expect("Blaschke products are finite on the closed disc");
        let (u, du) = analytic_completion(coeffs, z);
        let e = 0.5 * (u + Complex64::new(0.0, phase)).exp();
        Ok((bv * e, e * (bd + bv * du)))
    }

    /// `f₀(z)` and `f₀′(z)` on the closed disc.
    pub fn f0(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.part(&self.b0_zeros, &self.u0_fourier, self.phase, z)
    }

    /// `f_∞(z)` and `f_∞′(z)` on the closed disc.
    pub fn finf(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.part(&self.binf_poles, &self.uinf_fourier, 0.0, z)
    }

    /// `(|f₀|² + |f_∞|²)^{1/2}` at `z`.
    pub fn norm_at(&self, z: Complex64) -> Result<f64> {
        let (a, _) = self.f0(z)?;
        let (b, _) = self.finf(z)?;
        Ok((a.norm_sqr() + b.norm_sqr()).sqrt())
    }

    /// `f₀/f_∞` at `z`.
    pub fn quotient(&self, z: Complex64) -> Result<SpherePoint> {
        let (a, _) = self.f0(z)?;
        let (b, _) = self.finf(z)?;
        if b == Complex64::new(0.0, 0.0) {
            return Ok(SpherePoint::Infinity);
        }
        Ok(SpherePoint::Finite(a / b))
    }

    /// Plain-text manifest: header counts, then zeros, poles and both
    /// coefficient lists, one entry per line with 17 significant digits.
    pub fn to_manifest(&self) -> String {
        let mut s = String::new();
        let pt = |z: &Complex64| format!("{:.16e} {:.16e}\n", z.re, z.im);
        s.push_str(&format!("boundary_samples {}\n", self.boundary_samples));
        s.push_str(&format!("phase {:.16e}\n", self.phase));
        s.push_str(&format!("b0_zeros {}\n", self.b0_zeros.len()));
        self.b0_zeros.iter().for_each(|z| s.push_str(&pt(z)));
        s.push_str(&format!("binf_poles {}\n", self.binf_poles.len()));
        self.binf_poles.iter().for_each(|z| s.push_str(&pt(z)));
        let half = self.boundary_samples as i64 / 2;
        for (label, coeffs) in [("u0_fourier", &self.u0_fourier), ("uinf_fourier", &self.uinf_fourier)] {
            s.push_str(&format!("{label} {}\n", coeffs.len()));
            for (k, c) in coeffs.iter().enumerate() {
                s.push_str(&format!("{} {:.16e} {:.16e}\n", k as i64 - half, c.re, c.im));
            }
        }
        s
    }
}

/// Fourier coefficients in index order `−M/2 … M/2 − 1`, and the fraction of
/// energy beyond `|n| > M/4`.
fn fourier(samples: &[f64]) -> (Vec<Complex64>, f64) {
    let m = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let half = m / 2;
    let mut ordered = vec![Complex64::new(0.0, 0.0); m];
    for (k, c) in buf.iter().enumerate() {
        // bin k holds index k for k < M/2 and k − M otherwise
        let idx = if k < half { k + half } else { k - half };
        ordered[idx] = c * scale;
    }
    // real data: the mean is real up to roundoff
    ordered[half].im = 0.0;
    let total: f64 = ordered.iter().map(|c| c.norm_sqr()).sum();
    let tail: f64 = ordered
        .iter()
        .enumerate()
        .filter(|(k, _)| (*k as i64 - half as i64).unsigned_abs() as usize > m / 4)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    (ordered, if total > 0.0 { tail / total } else { 0.0 })
}

/// Decompose `f` from `m` boundary samples (`m` a power of two, at least 256).
pub fn fatou_decompose(f: &MapExpr, m: usize) -> Result<Decomposition> {
    if m < 256 || !m.is_power_of_two() {
        return Err(Error::Argument(format!("boundary sample count {m} must be a power of two ≥ 256")));
    }
    let (divisor, f_origin) = interior_divisor(f)?;
    let zero = SpherePoint::Finite(Complex64::new(0.0, 0.0));
    let mut u0 = Vec::with_capacity(m);
    let mut uinf = Vec::with_capacity(m);
    for j in 0..m {
        let zeta = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
        let w = boundary_value(f, zeta)?;
        u0.push(chordal(w, zero).ln());
        uinf.push(chordal(w, SpherePoint::Infinity).ln());
    }
    let (u0_fourier, tail0) = fourier(&u0);
    let (uinf_fourier, tailinf) = fourier(&uinf);
    let tail = tail0.max(tailinf);
    if tail > TAIL_FRACTION {
        return Err(Error::Resolution { samples: m, tail });
    }
    let mut dec = Decomposition {
        b0_zeros: divisor.zeros,
        binf_poles: divisor.poles,
        u0_fourier,
        uinf_fourier,
        boundary_samples: m,
        phase: 0.0,
    };
    let origin = Complex64::new(0.0, 0.0);
    let ratio = match dec.quotient(origin)? {
        SpherePoint::Finite(v) => v,
        SpherePoint::Infinity => return Err(Error::Normalization { value: "inf".into() }),
    };
    dec.phase = (f_origin / ratio).arg();
    Ok(dec)
}

/// Decompose with `M = 4096`, doubling while the Fourier tail is too large.
pub fn fatou_decompose_auto(f: &MapExpr) -> Result<Decomposition> {
    let mut m = 4096;
    loop {
        match fatou_decompose(f, m) {
            Err(Error::Resolution { .. }) if m < MAX_SAMPLES => m *= 2,
            other => return other,
        }
    }
}

/// `min (|f₀|² + |f_∞|²)^{1/2}` over the probe points.
pub fn uniform_characteristic_delta(dec: &Decomposition, probes: &[Complex64]) -> Result<f64> {
    let mut delta = f64::INFINITY;
    for z in probes {
        delta = delta.min(dec.norm_at(*z)?);
    }
    Ok(delta)
}

/// Same as [`uniform_characteristic_delta`] for an explicitly given pair.
pub fn uniform_characteristic_delta_pair(f0: &MapExpr, finf: &MapExpr, probes: &[Complex64]) -> Result<f64> {
    let mut delta = f64::INFINITY;
    for z in probes {
        let a = finite(f0, *z)?;
        let b = finite(finf, *z)?;
        delta = delta.min((a.norm_sqr() + b.norm_sqr()).sqrt());
    }
    Ok(delta)
}

fn finite(f: &MapExpr, z: Complex64) -> Result<Complex64> {
    match f.evaluate(z)?.value {
        SpherePoint::Finite(v) => Ok(v),
        SpherePoint::Infinity => Err(Error::Range {
            metric: crate::metrics::MetricId::Euclidean,
            value: "inf".into(),
        }),
    }
}
