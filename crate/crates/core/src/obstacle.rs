//! Sampled obstacle pairs `ψ₋ ≤ 0 ≤ ψ₊`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Point;

/// Lower and upper obstacle samples on the points of `Ω_O`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleSpec {
    pub points: Vec<Point>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ObstacleSpec {
    pub fn new(points: Vec<Point>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let spec = Self { points, lower, upper };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_fns(
        points: Vec<Point>,
        lower: impl Fn(Point) -> f64,
        upper: impl Fn(Point) -> f64,
    ) -> Result<Self> {
        let lo = points.iter().map(|&p| lower(p)).collect();
        let hi = points.iter().map(|&p| upper(p)).collect();
        Self::new(points, lo, hi)
    }

    /// `ψ₋ ≡ −level`, `ψ₊ ≡ level`.
    pub fn symmetric_constant(points: Vec<Point>, level: f64) -> Result<Self> {
        Self::from_fns(points, |_| -level, |_| level)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != self.points.len() || self.upper.len() != self.points.len() {
            return Err(Error::validation("obstacle samples and points differ in length"));
        }
        for (k, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::validation(format!("non-finite obstacle sample at index {k}")));
            }
            if *lo > 0.0 || *hi < 0.0 {
                return Err(Error::validation(format!(
                    "obstacles must satisfy psi_minus <= 0 <= psi_plus; sample {k} has [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}
