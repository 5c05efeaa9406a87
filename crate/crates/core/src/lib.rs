//! Uncertainty-weighted performance measurement for fuzzy-controlled robotic
//! sailing.
//!
//! The crate is layered bottom-up:
//!
//! - [`fuzzy`]: interval type-2 fuzzy PD heading controller with
//!   Karnik-Mendel type reduction (type-1 is the zero-FOU case).
//! - [`wind`]: bounded Gaussian wind process with a four-second target cadence.
//! - [`boat`]: kinematic sailing boat, courses and the closed-loop simulation.
//! - [`metrics`]: RMSE, uncertainty measure, base difficulty and relative
//!   performance computed from a run log.
//! - [`harness`]: experiment grid, seeding, aggregation and report files.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boat;
pub mod error;
pub mod fuzzy;
pub mod harness;
pub mod metrics;
pub mod wind;

pub use error::{Error, Result};

/// Wraps an angle in degrees into `[0, 360)`.
pub fn wrap_360(deg: f64) -> f64 {
    let w = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360.0 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Wraps an angle in degrees into `(-180, 180]`.
pub fn wrap_180(deg: f64) -> f64 {
    let w = wrap_360(deg);
    if w > 180.0 {
        w - 360.0
    } else {
        w
    }
}
