use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fem::{Mesh, ReinforcementMask};
use crate::params::Point;
use crate::series::{eta_integral, uniform_load_profile, SeriesState};
use crate::sum::CompensatedSum;

/// Placement bounds on `𝒜^∞_D` for the density-weighted energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementBounds {
    /// `max [β∫_D G_p + α∫_{D^c} G_p] dp` over the mesh nodes.
    pub upperb: f64,
    /// Bound on the truncation error of `upperb`.
    pub upperb_tail: f64,
    pub upperb_argmax: Point,
    /// `(π/12) max_y [β∫_D φ₁ sin ξ + α∫_{D^c} φ₁ sin ξ]`.
    pub coarse: f64,
}

/// Evaluates both placement bounds for `mask` on the nodes of `mesh`.
///
/// Element rows and columns are integrated exactly in `ξ` and by Gauss
/// quadrature in `η`; the weights `α` on `Ω` and `β − α` on `D` are combined
/// with the closed-form uniform profile.
pub fn placement_bound_report(mask: &ReinforcementMask, mesh: &Mesh, state: &SeriesState) -> Result<PlacementBounds> {
    mask.region.check_mesh(mesh)?;
    let params = &state.params;
    let (alpha, beta) = (mask.alpha, mask.beta);
    let m_max = state.m_max as usize;
    // cols[m-1][ej] = Σ over columns ei with (ei, ej) ∈ D of ∫ sin(mξ) dξ.
    let cols: Vec<Vec<f64>> = (1..=m_max)
        .map(|m| {
            let mf = m as f64;
            (0..mesh.ny)
                .map(|ej| {
                    let mut s = CompensatedSum::new();
                    for ei in 0..mesh.nx {
                        if mask.region.contains(mesh.element(ei, ej)) {
                            s.add(((mf * mesh.x(ei)).cos() - (mf * mesh.x(ei + 1)).cos()) / mf);
                        }
                    }
                    s.value()
                })
                .collect()
        })
        .collect();
    let any = mask.region.count() > 0;
    // coeff[j][m-1] = ∫_D φ_m(y_j, η) sin(mξ) dξ dη.
    let rows: Vec<(Vec<f64>, f64)> = (0..=mesh.ny)
        .into_par_iter()
        .map(|j| {
            let y = mesh.y(j);
            let coeff: Vec<f64> = (1..=m_max)
                .map(|m| {
                    if !any {
                        return 0.0;
                    }
                    let mut s = CompensatedSum::new();
                    for ej in 0..mesh.ny {
                        let c = cols[m - 1][ej];
                        if c != 0.0 {
                            s.add(c * eta_integral(y, m as u32, mesh.y(ej), mesh.y(ej + 1), params));
                        }
                    }
                    s.value()
                })
                .collect();
            let full = eta_integral(y, 1, -params.half_width, params.half_width, params);
            let coarse = PI / 12.0 * (2.0 * alpha * full + (beta - alpha) * coeff[0]);
            (coeff, coarse)
        })
        .collect();
    let mut upperb = f64::NEG_INFINITY;
    let mut argmax = Point::new(0.0, 0.0);
    for (j, (coeff, _)) in rows.iter().enumerate() {
        for i in 0..=mesh.nx {
            let q = Point::new(mesh.x(i), mesh.y(j));
            let mut s = CompensatedSum::new();
            for (k, c) in coeff.iter().enumerate() {
                let mf = (k + 1) as f64;
                s.add(c * (mf * q.x).sin() / (mf * mf * mf));
            }
            let v = alpha * uniform_load_profile(q, state)? + (beta - alpha) * s.value() / (2.0 * PI);
            if v > upperb {
                upperb = v;
                argmax = q;
            }
        }
    }
    let weighted_area = alpha * params.area() + (beta - alpha) * mask.region.area(mesh);
    Ok(PlacementBounds {
        upperb,
        upperb_tail: state.tail_bound * weighted_area,
        upperb_argmax: argmax,
        coarse: rows.iter().fold(f64::NEG_INFINITY, |m, r| m.max(r.1)),
    })
}
