#![allow(dead_code)]

use imagearc::maps::MapExpr;
use imagearc::metrics::MobiusTransform;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

/// A real with a wide spread of magnitudes, so that formatting edge cases
/// show up.
pub fn wild_real(rng: &mut StdRng) -> f64 {
    let sign = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
    match rng.gen_range(0..6) {
        0 => 0.0,
        1 => sign * 10f64.powi(rng.gen_range(-30..30)) * rng.gen_range(1.0..10.0),
        2 => sign * rng.gen_range(0..100) as f64,
        _ => sign * rng.gen_range(0.0..3.0),
    }
}

pub fn wild_complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(wild_real(rng), wild_real(rng))
}

pub fn in_disc(rng: &mut StdRng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Moderate values, for numerical comparisons.
pub fn tame_complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))
}

fn leaf(rng: &mut StdRng, wild: bool) -> MapExpr {
    let pick_complex = |rng: &mut StdRng| if wild { wild_complex(rng) } else { tame_complex(rng) };
    let pick_real = |rng: &mut StdRng| if wild { wild_real(rng) } else { rng.gen_range(0.0..3.0) };
    loop {
        let built = match rng.gen_range(0..13) {
            0 => Ok(MapExpr::identity()),
            1 => MapExpr::constant(pick_complex(rng)),
            2 => MapExpr::scale(pick_complex(rng)),
            3 => MapExpr::shift(pick_complex(rng)),
            4 => {
                let n = rng.gen_range(1..5);
                MapExpr::power_series((0..n).map(|_| pick_complex(rng)).collect())
            }
            5 => MobiusTransform::new(pick_complex(rng), pick_complex(rng), pick_complex(rng), pick_complex(rng))
                .map(MapExpr::mobius),
            6 => Ok(MapExpr::koebe()),
            7 => Ok(MapExpr::exp()),
            8 => Ok(MapExpr::log()),
            9 => {
                let n = rng.gen_range(0..4);
                MapExpr::blaschke_disc((0..n).map(|_| in_disc(rng, 0.99)).collect())
            }
            10 => {
                let n = rng.gen_range(1..4);
                let heights = (0..n).map(|_| pick_real(rng).abs() + 1e-3).collect();
                let signs = (0..n).map(|_| if rng.gen_bool(0.3) { -1 } else { 1 }).collect();
                MapExpr::blaschke_half_plane(heights, signs)
            }
            11 => Ok(MapExpr::cayley()),
            _ => Ok(MapExpr::inverse_cayley()),
        };
        if let Ok(f) = built {
            return f;
        }
    }
}

/// A random expression tree whose tags are consistent.
pub fn random_tree(rng: &mut StdRng, depth: usize) -> MapExpr {
    tree(rng, depth, true)
}

/// As [`random_tree`] with coefficients of moderate size.
pub fn tame_tree(rng: &mut StdRng, depth: usize) -> MapExpr {
    tree(rng, depth, false)
}

fn tree(rng: &mut StdRng, depth: usize, wild: bool) -> MapExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng, wild);
    }
    for _ in 0..20 {
        let l = tree(rng, depth - 1, wild);
        let r = tree(rng, depth - 1, wild);
        let built = match rng.gen_range(0..3) {
            0 => l.compose(r),
            1 => l.times(r),
            _ => l.over(r),
        };
        if let Ok(f) = built {
            return f;
        }
    }
    leaf(rng, wild)
}
