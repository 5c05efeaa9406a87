use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which side of a set, if any, saturates at full membership past the apex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shoulder {
    #[default]
    None,
    Left,
    Right,
}

/// A type-1 triangular fuzzy set over degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangularSet {
    left: f64,
    apex: f64,
    right: f64,
    shoulder: Shoulder,
}

impl TriangularSet {
    pub fn new(left: f64, apex: f64, right: f64) -> Result<Self> {
        Self::with_shoulder(left, apex, right, Shoulder::None)
    }

    pub fn with_shoulder(left: f64, apex: f64, right: f64, shoulder: Shoulder) -> Result<Self> {
        let finite = left.is_finite() && apex.is_finite() && right.is_finite();
        if !finite || left > apex || apex > right || left >= right {
            return Err(Error::InvalidSet(format!(
                "triangle ({left}, {apex}, {right}) must satisfy left <= apex <= right, left < right"
            )));
        }
        Ok(Self { left, apex, right, shoulder })
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn apex(&self) -> f64 {
        self.apex
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    pub fn shoulder(&self) -> Shoulder {
        self.shoulder
    }

    /// Membership grade of `x`: 1 at the apex, 0 outside the support,
    /// linear on each flank, and 1 on a saturating shoulder side.
    pub fn membership(&self, x: f64) -> f64 {
        if x == self.apex {
            return 1.0;
        }
        if x < self.apex {
            if self.shoulder == Shoulder::Left {
                1.0
            } else if x <= self.left {
                0.0
            } else {
                (x - self.left) / (self.apex - self.left)
            }
        } else if self.shoulder == Shoulder::Right {
            1.0
        } else if x >= self.right {
            0.0
        } else {
            (self.right - x) / (self.right - self.apex)
        }
    }

    /// The same triangle translated horizontally by `delta` degrees.
    fn translated(&self, delta: f64) -> Self {
        Self {
            left: self.left + delta,
            apex: self.apex + delta,
            right: self.right + delta,
            shoulder: self.shoulder,
        }
    }
}

/// Lower and upper membership grades of an interval type-2 set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalDegree {
    pub lower: f64,
    pub upper: f64,
}

/// Interval type-2 set whose footprint of uncertainty is the family of
/// the base triangle translated by every offset in `[-shift, +shift]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct It2Set {
    base: TriangularSet,
    shift: f64,
}

impl It2Set {
    /// The lower membership function must keep positive height, so the
    /// shift has to stay strictly inside both flanks.
    pub fn new(base: TriangularSet, shift: f64) -> Result<Self> {
        let left_flank = base.apex - base.left;
        let right_flank = base.right - base.apex;
        if !(shift >= 0.0) || shift >= left_flank || shift >= right_flank {
            return Err(Error::InvalidSet(format!(
                "shift {shift} must be >= 0 and below both flank widths ({left_flank}, {right_flank})"
            )));
        }
        Ok(Self { base, shift })
    }

    /// Builds the set for a named FOU size; the apex moves by half the size
    /// each way so the total apex spread equals `fou`.
    pub fn from_fou(base: TriangularSet, fou: f64) -> Result<Self> {
        Self::new(base, fou / 2.0)
    }

    pub fn type1(base: TriangularSet) -> Self {
        Self { base, shift: 0.0 }
    }

    pub fn base(&self) -> &TriangularSet {
        &self.base
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn membership(&self, x: f64) -> IntervalDegree {
        let to_left = self.base.translated(-self.shift);
        let to_right = self.base.translated(self.shift);
        let a = to_left.membership(x);
        let b = to_right.membership(x);
        let upper = if x >= to_left.apex && x <= to_right.apex {
            1.0
        } else {
            a.max(b)
        };
        IntervalDegree { lower: a.min(b), upper }
    }
}
