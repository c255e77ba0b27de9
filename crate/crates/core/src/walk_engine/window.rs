use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A target set for `g_n S_n`.
///
/// `Interval` is the event `g_n S_n in (center - half_width, center + half_width)`;
/// `Symmetric` is `g_n |S_n| < radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WindowSpec {
    Interval { center: f64, half_width: f64 },
    Symmetric { radius: f64 },
}

impl WindowSpec {
    pub fn interval(center: f64, half_width: f64) -> Result<Self> {
        let w = Self::Interval { center, half_width };
        w.validate()?;
        Ok(w)
    }

    pub fn symmetric(radius: f64) -> Result<Self> {
        let w = Self::Symmetric { radius };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let (c, h) = match *self {
            Self::Interval { center, half_width } => (center, half_width),
            Self::Symmetric { radius } => (0.0, radius),
        };
        if !c.is_finite() || !(h > 0.0) {
            return Err(invalid(format!("window needs a finite centre and positive width, got ({c}, {h})")));
        }
        Ok(())
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        match *self {
            Self::Interval { center, half_width } => (v - center).abs() < half_width,
            Self::Symmetric { radius } => v.abs() < radius,
        }
    }

    /// Open interval `(lo, hi)` covered by the window.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Self::Interval { center, half_width } => (center - half_width, center + half_width),
            Self::Symmetric { radius } => (-radius, radius),
        }
    }

    pub fn width(&self) -> f64 {
        let (lo, hi) = self.bounds();
        hi - lo
    }
}
