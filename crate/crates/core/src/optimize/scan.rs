use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forces::{Force, ForceClass};
use super::gap::gap_profile;
use crate::error::{Error, Result};
use crate::fem::{assemble_bilinear, assemble_load, DofField, Mesh, Operator, ReinforcementMask};
use crate::params::MaterialParams;
use crate::series::ScanWindow;
use crate::vi::{BoxConstraints, ObstacleSolver, SolverSettings};

/// Which modified energy defines the reinforced plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Stiffer material: `α(·,·)_Ω + (β−α)(·,·)_D`.
    E1,
    /// Heavier material: the load is weighted by `βχ_D + αχ_{D^c}`.
    E2,
}

/// Result of an exhaustive scan over a force class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub value: f64,
    pub index: usize,
    pub argmax: Force,
    pub forces: Vec<Force>,
    pub values: Vec<f64>,
    pub contact_free: Vec<bool>,
    /// Largest KKT residual met during the scan.
    pub max_kkt: f64,
}

struct Sample {
    value: f64,
    contact_free: bool,
    kkt: f64,
}

pub(crate) fn scan(
    op: &Operator,
    load_weight: Option<&ReinforcementMask>,
    forces: Vec<Force>,
    constraints: &BoxConstraints,
    settings: &SolverSettings,
    objective: fn(&DofField) -> f64,
) -> Result<ScanOutcome> {
    if forces.is_empty() {
        return Err(Error::validation("force class has no members"));
    }
    constraints.validate(&op.mesh)?;
    op.factor()?;
    let samples: Vec<Sample> = forces
        .par_iter()
        .map_init(
            || ObstacleSolver::new(op, constraints.clone(), *settings),
            |solver, force| {
                let solver = solver.as_mut().map_err(|e| e.clone())?;
                let load = force.load(&op.mesh)?;
                let f = assemble_load(&op.mesh, &load, load_weight)?;
                let sol = solver.solve(&f)?;
                Ok(Sample {
                    value: objective(&sol.field),
                    contact_free: sol.contact_free(),
                    kkt: sol.kkt_residual,
                })
            },
        )
        .collect::<Result<_>>()?;
    let mut index = 0;
    for (k, s) in samples.iter().enumerate() {
        if s.value > samples[index].value {
            index = k;
        }
    }
    Ok(ScanOutcome {
        value: samples[index].value,
        index,
        argmax: forces[index].clone(),
        values: samples.iter().map(|s| s.value).collect(),
        contact_free: samples.iter().map(|s| s.contact_free).collect(),
        max_kkt: samples.iter().fold(0.0, |m, s| m.max(s.kkt)),
        forces,
    })
}

fn amplitude(u: &DofField) -> f64 {
    u.max_abs_nodal()
}

fn maximal_gap(u: &DofField) -> f64 {
    gap_profile(u).maximal_gap
}

/// `𝒜^∞_D`: the largest nodal `|u_{f,D}|` over the force class.
pub fn worst_force_amplitude(
    mesh: &Mesh,
    params: &MaterialParams,
    mask: &ReinforcementMask,
    forces: &ForceClass,
    obstacles: &BoxConstraints,
    variant: Variant,
    settings: &SolverSettings,
) -> Result<ScanOutcome> {
    let members = forces.members(params)?;
    match variant {
        Variant::E1 => {
            let op = Operator::reinforced(mesh, params, mask)?;
            scan(&op, None, members, obstacles, settings, amplitude)
        }
        Variant::E2 => {
            if forces.has_point_masses() {
                return Err(Error::unsupported(
                    "the density-weighted energy needs density loads; use a bang-bang force class",
                ));
            }
            let op = assemble_bilinear(mesh, params, None)?;
            scan(&op, Some(mask), members, obstacles, settings, amplitude)
        }
    }
}

/// `𝒢^∞_ψ`: the largest maximal gap over the force class.
pub fn worst_gap_force(
    mesh: &Mesh,
    params: &MaterialParams,
    obstacles: &BoxConstraints,
    forces: &ForceClass,
    settings: &SolverSettings,
) -> Result<ScanOutcome> {
    let op = assemble_bilinear(mesh, params, None)?;
    scan(&op, None, forces.members(params)?, obstacles, settings, maximal_gap)
}

/// Obstacle-free antisymmetric scan over `Ω̃`; half its value is the
/// discrete counterpart of the threshold `M`.
pub fn threshold_scan(
    mesh: &Mesh,
    params: &MaterialParams,
    window: ScanWindow,
    nx: usize,
    ny: usize,
    settings: &SolverSettings,
) -> Result<ScanOutcome> {
    let forces = ForceClass::AntisymDelta { window, nx, ny };
    worst_gap_force(mesh, params, &BoxConstraints::none(), &forces, settings)
}
