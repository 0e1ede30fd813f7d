//! Distance functions between pairs of scores.

use std::fmt;

use thiserror::Error;

use crate::expr::{self, EvalError, Expr};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("ratio distance needs non-negative scores, got ({x}, {y})")]
    NegativeRatioScore { x: f64, y: f64 },
    #[error("bipolar distance needs scores inside [{min}, {max}], got ({x}, {y})")]
    BipolarOutOfRange { x: f64, y: f64, min: f64, max: f64 },
    #[error("bipolar bounds must satisfy min < max, got [{min}, {max}]")]
    BadBipolarBounds { min: f64, max: f64 },
    #[error("circular distance needs at least two intervals, got {0}")]
    BadCircularIntervals(u32),
    #[error("custom distance failed at ({x}, {y}): {source}")]
    Eval { x: f64, y: f64, source: EvalError },
}

/// Which disagreement metric to apply to a pair of scores.
///
/// `Ordinal` expects the scores to already be ranks and applies the squared
/// difference directly; no rank transform is performed.
#[derive(Debug, Clone, PartialEq)]
pub enum DistanceSpec {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
    Bipolar { min: f64, max: f64 },
    Circular { intervals: u32 },
    Custom(Expr),
}

impl DistanceSpec {
    /// Bipolar distance over the closed scale `[min, max]`.
    pub fn bipolar(min: f64, max: f64) -> Result<Self, DistanceError> {
        if !min.is_finite() || !max.is_finite() || min >= max {
            return Err(DistanceError::BadBipolarBounds { min, max });
        }
        Ok(DistanceSpec::Bipolar { min, max })
    }

    /// Circular distance for a scale with `intervals` equally spaced points.
    pub fn circular(intervals: u32) -> Result<Self, DistanceError> {
        if intervals < 2 {
            return Err(DistanceError::BadCircularIntervals(intervals));
        }
        Ok(DistanceSpec::Circular { intervals })
    }

    /// Custom distance from a parsed expression; applied exactly as written.
    pub fn custom(expr: Expr) -> Self {
        DistanceSpec::Custom(expr)
    }

    /// Distance between two possibly missing scores. Any pair involving a
    /// missing score contributes zero disagreement.
    pub fn evaluate(&self, x: Option<f64>, y: Option<f64>) -> Result<f64, DistanceError> {
        match (x, y) {
            (Some(x), Some(y)) => self.evaluate_present(x, y),
            _ => Ok(0.0),
        }
    }

    /// Distance between two present scores.
    ///
    /// For every built-in metric `x == y` short-circuits to zero, which also
    /// settles the otherwise indeterminate ratio pair `(0, 0)` and bipolar
    /// pairs at the endpoints of the scale. Custom expressions get no such
    /// shortcut.
    pub fn evaluate_present(&self, x: f64, y: f64) -> Result<f64, DistanceError> {
        match self {
            DistanceSpec::Custom(expr) => expr::evaluate(expr, x, y)
                .map_err(|source| DistanceError::Eval { x, y, source }),
            _ if x == y => Ok(0.0),
            DistanceSpec::Nominal => Ok(1.0),
            DistanceSpec::Ordinal | DistanceSpec::Interval => {
                let diff = x - y;
                Ok(diff * diff)
            }
            DistanceSpec::Ratio => {
                if x < 0.0 || y < 0.0 {
                    return Err(DistanceError::NegativeRatioScore { x, y });
                }
                let q = (x - y) / (x + y);
                Ok(q * q)
            }
            DistanceSpec::Bipolar { min, max } => {
                // Hand-rolled literals bypass bipolar(); re-check, NaN included.
                if !min.is_finite() || !max.is_finite() || min >= max {
                    return Err(DistanceError::BadBipolarBounds { min: *min, max: *max });
                }
                if x < *min || x > *max || y < *min || y > *max {
                    return Err(DistanceError::BipolarOutOfRange {
                        x,
                        y,
                        min: *min,
                        max: *max,
                    });
                }
                let diff = x - y;
                Ok(diff * diff / ((x + y - 2.0 * min) * (2.0 * max - x - y)))
            }
            DistanceSpec::Circular { intervals } => {
                if *intervals < 2 {
                    return Err(DistanceError::BadCircularIntervals(*intervals));
                }
                let s = (std::f64::consts::PI * (x - y) / *intervals as f64).sin();
                Ok(s * s)
            }
        }
    }
}

impl fmt::Display for DistanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceSpec::Nominal => write!(f, "nominal"),
            DistanceSpec::Ordinal => write!(f, "ordinal"),
            DistanceSpec::Interval => write!(f, "interval"),
            DistanceSpec::Ratio => write!(f, "ratio"),
            DistanceSpec::Bipolar { min, max } => write!(f, "bipolar(min={min}, max={max})"),
            DistanceSpec::Circular { intervals } => write!(f, "circular(intervals={intervals})"),
            DistanceSpec::Custom(expr) => write!(f, "custom({expr})"),
        }
    }
}
