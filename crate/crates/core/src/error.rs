use thiserror::Error;

use crate::metrics::MetricId;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} lies outside the domain of the {metric:?} metric")]
    Domain { metric: MetricId, point: String },

    #[error("image value {value} lies outside the {metric:?} target")]
    Range { metric: MetricId, value: String },

    #[error("map is not evaluable at {point}: {reason}")]
    Evaluation { point: String, reason: String },

    #[error("indeterminate form 0/0 at {point}")]
    Indeterminate { point: String },

    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("composition mismatch: outer map expects {outer:?} but inner map lands in {inner:?}")]
    Composition { outer: MetricId, inner: MetricId },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("quadrature did not converge: best estimate {estimate:e} with error bound {error_bound:e}")]
    Precision { estimate: f64, error_bound: f64 },

    #[error("integral appears divergent; last partial value {partial:e}")]
    Divergence { partial: f64 },

    #[error("zero or pole at {point} lies on or too close to the unit circle")]
    BoundarySingularity { point: String },

    #[error("f(0) must be finite and nonzero, got {value}")]
    Normalization { value: String },

    #[error("boundary data under-resolved with {samples} samples (tail energy fraction {tail:e}); increase the sample count")]
    Resolution { samples: usize, tail: f64 },

    #[error("unsupported map: {0}")]
    Unsupported(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error(transparent)]
    Parse(#[from] crate::funcspec::ParseError),
}

pub(crate) fn fmt_point(z: num_complex::Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}
