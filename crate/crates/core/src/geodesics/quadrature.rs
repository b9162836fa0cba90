//! Globally adaptive Gauss–Kronrod (7/15) integration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and subdivision limits for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl QuadConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: usize) -> Result<Self> {
        let ok = |t: f64| t > 0.0 && t.is_finite();
        if !ok(abs_tol) || !ok(rel_tol) {
            return Err(Error::Argument(format!("tolerances must be positive, got {abs_tol:e} and {rel_tol:e}")));
        }
        if max_depth == 0 {
            return Err(Error::Argument("max_depth must be at least 1".into()));
        }
        Ok(QuadConfig { abs_tol, rel_tol, max_depth })
    }

    /// Defaults for arc lengths.
    pub fn lengths() -> Self {
        QuadConfig { abs_tol: 1e-9, rel_tol: 1e-9, max_depth: 40 }
    }

    /// Defaults for areas.
    pub fn areas() -> Self {
        QuadConfig { abs_tol: 1e-7, ..Self::lengths() }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self::lengths()
    }
}

/// A converged integral and its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Hard cap on the number of panels, independent of depth.
const MAX_PANELS: usize = 1 << 16;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64, depth: usize) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0; 15];
    for (k, x) in XGK.iter().enumerate() {
        if k == 7 {
            fv[7] = f(centre)?;
        } else {
            fv[k] = f(centre - half * x)?;
            fv[14 - k] = f(centre + half * x)?;
        }
    }
    if let Some(bad) = fv.iter().position(|v| !v.is_finite()) {
        let x = if bad <= 7 { centre - half * XGK[bad] } else { centre + half * XGK[14 - bad] };
        return Err(Error::Evaluation { point: format!("{x}"), reason: "integrand is not finite".into() });
    }
    let pair = |k: usize| if k == 7 { fv[7] } else { fv[k] + fv[14 - k] };
    let resk: f64 = (0..8).map(|k| WGK[k] * pair(k)).sum();
    let resg: f64 = WG.iter().enumerate().map(|(j, w)| w * pair(2 * j + 1)).sum();
    let resabs: f64 = (0..15).map(|k| WGK[k.min(14 - k)] * fv[k].abs()).sum();
    let mean = 0.5 * resk;
    let resasc: f64 = (0..15).map(|k| WGK[k.min(14 - k)] * (fv[k] - mean).abs()).sum();
    let (resasc, resabs) = (resasc * half.abs(), resabs * half.abs());
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Panel { a, b, value: resk * half, error: err, depth })
}

/// Integrate a fallible integrand over `[a, b]`.
///
/// Panels with the largest error are bisected until the summed error is
/// below `max(abs_tol, rel_tol·|value|)`. Failure to get there within
/// `max_depth` bisections reports a precision error carrying the estimate.
pub fn try_adaptive_integrate<F>(mut f: F, a: f64, b: f64, q: &QuadConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Argument(format!("integration bounds [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error_bound: 0.0 });
    }
    if a > b {
        return Err(Error::Argument(format!("integration bounds [{a}, {b}] are reversed")));
    }
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&mut f, a, b, 0)?);
    let mut stuck = false;
    let (mut value, mut error) = (heap.peek().map_or(0.0, |p| p.value), heap.peek().map_or(0.0, |p| p.error));
    loop {
        if error <= q.target(value) {
            // running sums drift; confirm with fresh ones
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
            if error <= q.target(value) {
                break;
            }
        }
        let worst = heap.peek().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= q.max_depth || heap.len() >= MAX_PANELS || !(worst.a < mid && mid < worst.b) {
            stuck = true;
            break;
        }
        let worst = heap.pop().expect("nonempty heap");
        let left = kronrod(&mut f, worst.a, mid, worst.depth + 1)?;
        let right = kronrod(&mut f, mid, worst.b, worst.depth + 1)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|p, r| p.a.total_cmp(&r.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error_bound: f64 = panels.iter().map(|p| p.error).sum();
    if stuck {
        return Err(Error::Precision { estimate: value, error_bound });
    }
    Ok(Estimate { value, error_bound })
}

/// Integrate a total integrand over `[a, b]`.
pub fn adaptive_integrate<F>(f: F, a: f64, b: f64, q: &QuadConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    try_adaptive_integrate(|x| Ok(f(x)), a, b, q)
}

/// Integrate with an integrable singularity at the left endpoint.
///
/// Substitutes `x = a + (b − a)u²`, which turns `(x − a)^{-1/2}` behaviour
/// into a smooth integrand.
pub fn integrate_endpoint_singular<F>(f: F, a: f64, b: f64, q: &QuadConfig) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let w = b - a;
    try_adaptive_integrate(
        |u| Ok(if u == 0.0 { 0.0 } else { f(a + w * u * u) * 2.0 * w * u }),
        0.0,
        1.0,
        q,
    )
}
