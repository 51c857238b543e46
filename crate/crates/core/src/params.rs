use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the closed plate `[0, π] × [−l, l]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Reflection across the midline `y = 0`.
    pub fn mirror_y(self) -> Self {
        Self::new(self.x, -self.y)
    }
}

/// Poisson ratio and half-width of the plate `(0, π) × (−l, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialParams {
    pub sigma: f64,
    pub half_width: f64,
}

impl MaterialParams {
    pub fn new(sigma: f64, half_width: f64) -> Result<Self> {
        let params = Self { sigma, half_width };
        params.validate()?;
        Ok(params)
    }

    /// Bridge-like aspect ratio used by default: σ = 0.2, l = π/150.
    pub fn desk() -> Self {
        Self {
            sigma: 0.2,
            half_width: PI / 150.0,
        }
    }

    /// All invariant violations, empty when the parameters are usable.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            out.push(format!("sigma outside (0,1): {}", self.sigma));
        }
        if !(self.half_width > 0.0 && 2.0 * self.half_width < PI) {
            out.push(format!(
                "half_width must satisfy 0 < l and 2l < pi: {}",
                self.half_width
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(msg) => Err(Error::validation(msg)),
        }
    }

    /// Area of the plate, `2πl`.
    pub fn area(&self) -> f64 {
        2.0 * PI * self.half_width
    }

    /// Whether `p` lies in the closed plate, up to a relative slack of 1e-12.
    pub fn contains(&self, p: Point) -> bool {
        let sx = 1e-12 * PI;
        let sy = 1e-12 * self.half_width;
        p.x >= -sx && p.x <= PI + sx && p.y.abs() <= self.half_width + sy
    }

    pub(crate) fn check_point(&self, p: Point, what: &str) -> Result<()> {
        if self.contains(p) && p.x.is_finite() && p.y.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} ({}, {}) outside the plate [0,pi]x[-{l},{l}]",
                p.x,
                p.y,
                l = self.half_width
            )))
        }
    }
}
