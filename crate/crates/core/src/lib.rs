//! Numerical laboratory for analytic maps between the disc, the upper
//! half-plane, the plane and the Riemann sphere.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod error;
pub mod funcspec;
pub mod geodesics;
pub mod maps;
pub mod metrics;
pub mod nevanlinna;
pub mod verifier;

pub use error::{Error, Result};
