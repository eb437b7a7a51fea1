//! Double-well potentials.
//!
//! The standard well is `W(t) = (1 - t²)² / 4`. The extended well agrees with it
//! on `[-1, 1]` and continues with `g (|t| - 1)²` outside, where `g` is the outer
//! growth coefficient. Since `W'(±1) = 0` the two pieces join in C¹, and in C²
//! exactly when `g = 1`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WellKind {
    StandardQuartic,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWell {
    kind: WellKind,
    outer_growth: f64,
}

impl Default for DoubleWell {
    fn default() -> Self {
        Self::standard()
    }
}

impl DoubleWell {
    pub fn standard() -> Self {
        DoubleWell {
            kind: WellKind::StandardQuartic,
            outer_growth: 1.0,
        }
    }

    /// Extended well with the default outer growth `g = 1` (C² across ±1).
    pub fn extended() -> Self {
        DoubleWell {
            kind: WellKind::Extended,
            outer_growth: 1.0,
        }
    }

    pub fn extended_with_growth(outer_growth: f64) -> Result<Self> {
        if !(outer_growth >= 1.0 && outer_growth.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "outer growth must be finite and >= 1, got {outer_growth}"
            )));
        }
        Ok(DoubleWell {
            kind: WellKind::Extended,
            outer_growth,
        })
    }

    pub fn kind(&self) -> WellKind {
        self.kind
    }

    pub fn outer_growth(&self) -> f64 {
        self.outer_growth
    }

    fn outside(&self, t: f64) -> bool {
        self.kind == WellKind::Extended && t.abs() > 1.0
    }

    pub fn value(&self, t: f64) -> f64 {
        if self.outside(t) {
            let d = t.abs() - 1.0;
            self.outer_growth * d * d
        } else {
            let q = 1.0 - t * t;
            0.25 * q * q
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        if self.outside(t) {
            2.0 * self.outer_growth * (t.abs() - 1.0) * t.signum()
        } else {
            -t * (1.0 - t * t)
        }
    }

    pub fn second(&self, t: f64) -> f64 {
        if self.outside(t) {
            2.0 * self.outer_growth
        } else {
            3.0 * t * t - 1.0
        }
    }

    /// `W(to) - W(from)`, factored so that it keeps its relative accuracy when
    /// the two arguments are close.
    pub fn difference(&self, from: f64, to: f64) -> f64 {
        let d = to - from;
        match (self.outside(from), self.outside(to)) {
            (false, false) => -0.25 * d * (from + to) * (2.0 - from * from - to * to),
            (true, true) if from.signum() == to.signum() => {
                // |to| - |from| = ±d on a common side
                let dabs = d * to.signum();
                self.outer_growth * dabs * (from.abs() + to.abs() - 2.0)
            }
            _ => self.value(to) - self.value(from),
        }
    }

    /// `max { W(t) : |t| <= 1 }`, attained at `t = 0` for both kinds.
    pub fn max_on_well(&self) -> f64 {
        self.value(0.0)
    }
}
