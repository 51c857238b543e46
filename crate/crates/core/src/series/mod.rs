//! Closed-form Fourier objects of the partially hinged plate.
//!
//! The Green function is
//!
//! ```text
//! G_p(x, y) = Σ_{m≥1} φ_m(y, η) / (2π m³) · sin(mξ) sin(mx),   p = (ξ, η)
//! ```
//!
//! and every other object here (antisymmetric delta responses, the
//! uniform-load profile, the thresholds `M` and `C`) is derived from it.

mod bounds;
mod green;
mod kernels;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{MaterialParams, Point};

pub use bounds::{
    analytic_bound_c, coefficient_bounds, empty_contact_margin, envelope_constant, envelope_g,
    gap_threshold_m, tail_estimate,
};
pub use green::{
    antisym_solution, green_value, sine_mode_response, uniform_load_profile,
    uniform_load_profile_max,
};
pub use kernels::{aux_pair, boundary_kernels, phi_m, BoundaryKernels};

pub(crate) use green::eta_integral;
pub(crate) use kernels::phi_unchecked;

/// Default truncation order of the Green series.
pub const DEFAULT_M_MAX: u32 = 200;

/// A truncated series together with a bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Truncation data shared by all series evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesState {
    pub params: MaterialParams,
    pub m_max: u32,
    /// Sup-norm bound on the discarded remainder of the Green series.
    pub tail_bound: f64,
}

impl SeriesState {
    pub fn new(params: MaterialParams, m_max: u32) -> Result<Self> {
        params.validate()?;
        if m_max == 0 {
            return Err(Error::validation("m_max must be at least 1"));
        }
        Ok(Self {
            params,
            m_max,
            tail_bound: tail_estimate(m_max, &params)?,
        })
    }

    pub fn with_default_order(params: MaterialParams) -> Result<Self> {
        Self::new(params, DEFAULT_M_MAX)
    }
}

/// The antisymmetric pair `T_{ξ,η} = (δ_{(ξ,η)} − δ_{(ξ,−η)}) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntisymDelta {
    pub xi: f64,
    pub eta: f64,
}

impl AntisymDelta {
    pub fn new(xi: f64, eta: f64) -> Self {
        Self { xi, eta }
    }

    /// Norm in the dual of `C⁰`: 1 for an interior abscissa and `η ≠ 0`.
    pub fn dual_norm(&self) -> f64 {
        if self.eta == 0.0 {
            0.0
        } else {
            1.0
        }
    }
}

/// The sub-window `Ω̃` on which the worst antisymmetric delta is known to sit
/// at `(π/2, ±l)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanWindow {
    pub z0: f64,
    pub w0: f64,
}

impl ScanWindow {
    pub fn new(z0: f64, w0: f64, params: &MaterialParams) -> Result<Self> {
        let w = Self { z0, w0 };
        w.validate(params)?;
        Ok(w)
    }

    /// `z0 = π/6`, `w0 = l/2`.
    pub fn default_for(params: &MaterialParams) -> Self {
        Self {
            z0: PI / 6.0,
            w0: 0.5 * params.half_width,
        }
    }

    pub fn validate(&self, params: &MaterialParams) -> Result<()> {
        if !(self.z0 > 0.0 && self.z0 < 0.5 * PI) {
            return Err(Error::validation(format!("z0 outside (0, pi/2): {}", self.z0)));
        }
        if !(self.w0 > 0.0 && self.w0 < params.half_width) {
            return Err(Error::validation(format!("w0 outside (0, l): {}", self.w0)));
        }
        Ok(())
    }

    /// Membership in `([0,z0] ∪ [π−z0,π] ∪ {π/2}) × [−l,l] ∪ [0,π] × [−w0,w0]`.
    pub fn contains(&self, p: Point) -> bool {
        let eps = 1e-12;
        let strip = p.x <= self.z0 + eps
            || p.x >= PI - self.z0 - eps
            || (p.x - 0.5 * PI).abs() <= eps;
        strip || p.y.abs() <= self.w0 + eps * self.w0.max(1.0)
    }
}
