use super::assemble::{assemble_bilinear, Operator};
use super::field::DofField;
use super::load::{assemble_load, LoadSpec};
use super::mask::ReinforcementMask;
use crate::error::{Error, Result};
use crate::params::MaterialParams;

/// Which energy to evaluate.
#[derive(Debug, Clone, Copy)]
pub enum EnergyVariant<'a> {
    /// `½(u,u) − ⟨f,u⟩`.
    Base,
    /// `½[α(u,u)_Ω + (β−α)(u,u)_D] − ⟨f,u⟩`.
    E1(&'a ReinforcementMask),
    /// `½(u,u) − ∫(βχ_D + αχ_{D^c}) f u`; needs a density load.
    E2(&'a ReinforcementMask),
}

pub fn energy_value(
    field: &DofField,
    params: &MaterialParams,
    load: &LoadSpec,
    variant: EnergyVariant<'_>,
) -> Result<f64> {
    let mesh = &field.mesh;
    let (op, f) = match variant {
        EnergyVariant::Base => (assemble_bilinear(mesh, params, None)?, assemble_load(mesh, load, None)?),
        EnergyVariant::E1(mask) => (Operator::reinforced(mesh, params, mask)?, assemble_load(mesh, load, None)?),
        EnergyVariant::E2(mask) => {
            if !load.point_masses.is_empty() {
                return Err(Error::unsupported(
                    "the density-weighted energy is only defined for integrable loads, not point masses",
                ));
            }
            (assemble_bilinear(mesh, params, None)?, assemble_load(mesh, load, Some(mask))?)
        }
    };
    let lin: f64 = f.iter().zip(&field.dofs).map(|(a, b)| a * b).sum();
    Ok(0.5 * op.inner(&field.dofs, &field.dofs) - lin)
}
