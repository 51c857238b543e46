use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::Mesh;
use crate::params::MaterialParams;
use crate::series::gap_threshold_m;
use crate::vi::BoxConstraints;

/// Which side of the threshold `M` the obstacle level lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `γ > M`: the obstacles are never reached by `T_{π/2,±l}` and `𝒢̃^∞ < 2γ`.
    #[serde(rename = "(i)")]
    I,
    /// `0 < γ ≤ M`: `𝒢̃^∞ = 2γ`.
    #[serde(rename = "(ii)")]
    II,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::I => "(i)",
            Regime::II => "(ii)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub case: Regime,
    pub gamma: f64,
    pub m: f64,
    /// Remaining truncation bound on `m`.
    pub m_tail: f64,
}

/// Classifies the level `γ` of thin obstacles on the long edges against `M`.
pub fn classify_regime(
    gamma: f64,
    params: &MaterialParams,
    obstacles: &BoxConstraints,
    mesh: &Mesh,
    m_max: u32,
) -> Result<RegimeReport> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::validation(format!("obstacle level gamma must be positive, got {gamma}")));
    }
    if !obstacles.is_thin(mesh) {
        return Err(Error::unsupported(
            "the explicit threshold M is only available for obstacles on the long edges",
        ));
    }
    let m = gap_threshold_m(params, m_max)?;
    Ok(RegimeReport {
        case: if gamma > m.value { Regime::I } else { Regime::II },
        gamma,
        m: m.value,
        m_tail: m.tail_bound,
    })
}
