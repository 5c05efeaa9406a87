//! Interval type-2 fuzzy PD controller mapping bearing error and its change
//! to a rudder angle.
//!
//! Pipeline: interval memberships → minimum t-norm firing intervals →
//! Karnik-Mendel type reduction → midpoint defuzzification. A FOU size of
//! zero reproduces the type-1 controller exactly.

mod membership;
mod reduce;
mod rules;

pub use membership::{IntervalDegree, It2Set, Shoulder, TriangularSet};
pub use reduce::{defuzzify, km_type_reduce, FiringInterval, OutputInterval};
pub use rules::{default_consequents, ControllerConfig, RuleBase, RULE_COUNT, SETS_PER_INPUT};

/// FOU sizes swept by the experiment grid (total apex spread, degrees).
pub const FOU_SIZES: [u32; 6] = [0, 5, 10, 15, 20, 25];
