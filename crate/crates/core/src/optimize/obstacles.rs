use serde::{Deserialize, Serialize};

use super::forces::ForceClass;
use super::scan::{worst_gap_force, ScanOutcome};
use crate::error::{Error, Result};
use crate::fem::Mesh;
use crate::params::MaterialParams;
use crate::vi::{BoxConstraints, SolverSettings};

/// Where the obstacles act.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstacleRegion {
    /// `Ω_O = L₊ ∪ L₋`.
    LongEdges,
    FullPlate,
}

impl ObstacleRegion {
    /// Constrained nodes in mesh order, short edges excluded.
    pub fn nodes(self, mesh: &Mesh) -> Vec<usize> {
        let all: Vec<usize> = match self {
            ObstacleRegion::LongEdges => mesh.long_edge_nodes(),
            ObstacleRegion::FullPlate => (0..mesh.n_nodes()).collect(),
        };
        all.into_iter().filter(|&k| !mesh.is_short_edge_node(k)).collect()
    }
}

/// One obstacle candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObstacleFamily {
    /// `ψ₊ ≡ γ`, `ψ₋ ≡ −γ` on the region.
    ConstantLevel { gamma: f64, region: ObstacleRegion },
    /// Nodal samples of `ψ₋, ψ₊` in the order of [`ObstacleRegion::nodes`],
    /// certified against `ψ₊ ≥ γ₊`, `ψ₋ ≤ −γ₋` and `‖ψ±‖_{C^{0,a}} ≤ κ±`.
    Sampled {
        region: ObstacleRegion,
        lower: Vec<f64>,
        upper: Vec<f64>,
        gamma_plus: f64,
        gamma_minus: f64,
        kappa_plus: f64,
        kappa_minus: f64,
        holder_exponent: f64,
    },
}

/// Sup norm plus the Hölder seminorm of nodal samples, over all node pairs.
pub fn discrete_holder_norm(mesh: &Mesh, nodes: &[usize], values: &[f64], exponent: f64) -> f64 {
    let pts: Vec<_> = nodes.iter().map(|&k| mesh.node_point(k)).collect();
    let mut semi = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i].x - pts[j].x).hypot(pts[i].y - pts[j].y);
            semi = semi.max((values[i] - values[j]).abs() / d.powf(exponent));
        }
    }
    values.iter().fold(0.0f64, |m, v| m.max(v.abs())) + semi
}

impl ObstacleFamily {
    pub fn region(&self) -> ObstacleRegion {
        match self {
            ObstacleFamily::ConstantLevel { region, .. } | ObstacleFamily::Sampled { region, .. } => *region,
        }
    }

    /// Level `γ` of a constant candidate.
    pub fn level(&self) -> Option<f64> {
        match self {
            ObstacleFamily::ConstantLevel { gamma, .. } => Some(*gamma),
            ObstacleFamily::Sampled { .. } => None,
        }
    }

    /// Class invariants that fail on `mesh`.
    pub fn violations(&self, mesh: &Mesh) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            ObstacleFamily::ConstantLevel { gamma, .. } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    out.push(format!("obstacle level gamma must be positive, got {gamma}"));
                }
            }
            ObstacleFamily::Sampled {
                region,
                lower,
                upper,
                gamma_plus,
                gamma_minus,
                kappa_plus,
                kappa_minus,
                holder_exponent,
            } => {
                let nodes = region.nodes(mesh);
                if lower.len() != nodes.len() || upper.len() != nodes.len() {
                    out.push(format!(
                        "sampled obstacle needs {} values per bound, got {} and {}",
                        nodes.len(),
                        lower.len(),
                        upper.len()
                    ));
                    return out;
                }
                if !(*gamma_plus > 0.0 && *gamma_minus > 0.0) {
                    out.push("gamma_plus and gamma_minus must be positive".into());
                }
                if !(*holder_exponent > 0.0 && *holder_exponent < 1.0) {
                    out.push(format!("Holder exponent must lie in (0,1), got {holder_exponent}"));
                    return out;
                }
                if upper.iter().any(|&v| !(v >= *gamma_plus)) {
                    out.push(format!("psi_plus >= gamma_plus = {gamma_plus} violated"));
                }
                if lower.iter().any(|&v| !(v <= -*gamma_minus)) {
                    out.push(format!("psi_minus <= -gamma_minus = {} violated", -gamma_minus));
                }
                let np = discrete_holder_norm(mesh, &nodes, upper, *holder_exponent);
                if np > *kappa_plus {
                    out.push(format!("Holder norm of psi_plus {np:.6e} exceeds kappa_plus = {kappa_plus}"));
                }
                let nm = discrete_holder_norm(mesh, &nodes, lower, *holder_exponent);
                if nm > *kappa_minus {
                    out.push(format!("Holder norm of psi_minus {nm:.6e} exceeds kappa_minus = {kappa_minus}"));
                }
            }
        }
        out
    }

    pub fn to_constraints(&self, mesh: &Mesh) -> Result<BoxConstraints> {
        let v = self.violations(mesh);
        if !v.is_empty() {
            return Err(Error::validation(v.join("; ")));
        }
        let nodes = self.region().nodes(mesh);
        match self {
            ObstacleFamily::ConstantLevel { gamma, .. } => {
                BoxConstraints::on_nodes(mesh, nodes, |_| -gamma, |_| *gamma)
            }
            ObstacleFamily::Sampled { lower, upper, .. } => {
                let out = BoxConstraints {
                    nodes,
                    lower: lower.clone(),
                    upper: upper.clone(),
                };
                out.validate(mesh)?;
                Ok(out)
            }
        }
    }
}

/// Result of [`best_obstacle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstacleOutcome {
    pub value: f64,
    pub index: usize,
    pub best: ObstacleFamily,
    /// `𝒢^∞_ψ` of every candidate, in list order.
    pub values: Vec<f64>,
    pub scans: Vec<ScanOutcome>,
}

/// Minimizes `𝒢^∞_ψ` over a finite obstacle list.
///
/// Constant levels covering the long edges are checked against the ceiling
/// `𝒢^∞ ≤ 2γ`.
pub fn best_obstacle(
    candidates: &[ObstacleFamily],
    forces: &ForceClass,
    mesh: &Mesh,
    params: &MaterialParams,
    settings: &SolverSettings,
) -> Result<ObstacleOutcome> {
    if candidates.is_empty() {
        return Err(Error::validation("obstacle family has no candidates"));
    }
    let constraints = candidates
        .iter()
        .map(|c| c.to_constraints(mesh))
        .collect::<Result<Vec<_>>>()?;
    let mut scans = Vec::with_capacity(candidates.len());
    for (c, b) in candidates.iter().zip(&constraints) {
        let s = worst_gap_force(mesh, params, b, forces, settings)?;
        if let Some(gamma) = c.level() {
            if s.value > 2.0 * gamma {
                return Err(Error::IterationLimit {
                    iterations: 0,
                    residual: s.value - 2.0 * gamma,
                });
            }
        }
        scans.push(s);
    }
    let values: Vec<f64> = scans.iter().map(|s| s.value).collect();
    let mut index = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[index] {
            index = k;
        }
    }
    Ok(ObstacleOutcome {
        value: values[index],
        index,
        best: candidates[index].clone(),
        values,
        scans,
    })
}
