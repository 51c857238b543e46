use std::path::PathBuf;

use hinged_plate::fem::{ElementMask, Mesh, ReinforcementMask};
use hinged_plate::optimize::{screen_reinforcement, ForceClass, ObstacleFamily, ObstacleRegion, ReinforcementFamily, Variant};
use hinged_plate::series::DEFAULT_M_MAX;
use hinged_plate::vi::SolverSettings;
use hinged_plate::MaterialParams;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub material: MaterialParams,
    pub mesh: MeshConfig,
    #[serde(default)]
    pub series: SeriesConfig,
    #[serde(default)]
    pub solver: SolverSettings,
    pub problem: Problem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub m_max: u32,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { m_max: DEFAULT_M_MAX }
    }
}

/// Loads a run can apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LoadConfig {
    Constant { value: f64 },
    /// `amplitude · sin(m x)`.
    SineMode { m: u32, amplitude: f64 },
    /// Element-wise constant values drawn uniformly from `[−amplitude, amplitude]`.
    Random { seed: u64, amplitude: f64 },
    Dirac { x: f64, y: f64, weight: f64 },
    /// `T_{ξ,η} = (δ_{(ξ,η)} − δ_{(ξ,−η)})/2`.
    Antisym { xi: f64, eta: f64 },
}

/// Obstacles for a single solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObstacleConfig {
    None,
    Constant { region: ObstacleRegion, lower: f64, upper: f64 },
    /// `ψ± = ±factor · max z`, with `z` the uniform-load profile.
    ProfileMargin { region: ObstacleRegion, factor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReinforcementConfig {
    pub alpha: f64,
    pub beta: f64,
    /// Rectangles `[x0, x1, y0, y1]` whose union is `D`.
    pub rects: Vec<[f64; 4]>,
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Problem {
    /// `G_source` at the listed points and, if given, on an `nx × ny` node grid.
    GreenEval {
        source: [f64; 2],
        #[serde(default)]
        points: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<[usize; 2]>,
    },
    Solve {
        load: LoadConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reinforcement: Option<ReinforcementConfig>,
    },
    ViSolve {
        load: LoadConfig,
        obstacles: ObstacleConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reinforcement: Option<ReinforcementConfig>,
    },
    /// Worst maximal gap over a force class; antisymmetric deltas over the
    /// default window when `forces` is omitted.
    GapScan {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        forces: Option<ForceClass>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        obstacles: Option<ObstacleFamily>,
    },
    OptimizeReinforcement {
        family: ReinforcementFamily,
        forces: ForceClass,
        variant: Variant,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        obstacles: Option<ObstacleFamily>,
    },
    OptimizeObstacle {
        candidates: Vec<ObstacleFamily>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        forces: Option<ForceClass>,
    },
    /// Classifies a thin constant obstacle level; exactly one of `gamma` and
    /// `gamma_over_m` must be set.
    Regime {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma_over_m: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        forces: Option<ForceClass>,
        #[serde(default = "yes")]
        scan: bool,
    },
}

fn yes() -> bool {
    true
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::GreenEval { .. } => "green-eval",
            Problem::Solve { .. } => "solve",
            Problem::ViSolve { .. } => "vi-solve",
            Problem::GapScan { .. } => "gap-scan",
            Problem::OptimizeReinforcement { .. } => "optimize-reinforcement",
            Problem::OptimizeObstacle { .. } => "optimize-obstacle",
            Problem::Regime { .. } => "regime",
        }
    }
}

impl ReinforcementConfig {
    pub fn mask(&self, mesh: &Mesh) -> hinged_plate::Result<ReinforcementMask> {
        ReinforcementMask::new(ElementMask::from_rects(mesh, &self.rects), self.alpha, self.beta)
    }

    fn violations(&self, mesh: &Mesh, params: &MaterialParams) -> Vec<String> {
        let mask = ReinforcementMask {
            region: ElementMask::from_rects(mesh, &self.rects),
            alpha: self.alpha,
            beta: self.beta,
        };
        let tol = self
            .area_tolerance
            .unwrap_or_else(|| self.rects.len().max(1) as f64 * ReinforcementMask::default_area_tolerance(mesh));
        mask.design_violations(mesh, params, tol)
    }
}

fn load_violations(load: &LoadConfig, params: &MaterialParams) -> Vec<String> {
    let mut out = Vec::new();
    let inside = |x: f64, y: f64| (0.0..=std::f64::consts::PI).contains(&x) && y.abs() <= params.half_width;
    match load {
        LoadConfig::Constant { value } if !value.is_finite() => out.push("load value must be finite".into()),
        LoadConfig::SineMode { m, amplitude } if *m == 0 || !amplitude.is_finite() => {
            out.push("sine-mode load needs m >= 1 and a finite amplitude".into())
        }
        LoadConfig::Random { amplitude, .. } if !(amplitude.is_finite() && *amplitude >= 0.0) => {
            out.push("random load amplitude must be finite and nonnegative".into())
        }
        LoadConfig::Dirac { x, y, .. } if !inside(*x, *y) => out.push(format!("Dirac point ({x}, {y}) outside the plate")),
        LoadConfig::Antisym { xi, eta } if !inside(*xi, *eta) => {
            out.push(format!("antisymmetric load point ({xi}, {eta}) outside the plate"))
        }
        _ => {}
    }
    out
}

fn obstacle_violations(o: &ObstacleConfig) -> Vec<String> {
    match o {
        ObstacleConfig::Constant { lower, upper, .. } if !(*lower <= 0.0 && *upper >= 0.0) => {
            vec![format!("obstacles must satisfy psi_minus <= 0 <= psi_plus, got {lower} and {upper}")]
        }
        ObstacleConfig::ProfileMargin { factor, .. } if !(*factor > 0.0 && factor.is_finite()) => {
            vec![format!("profile-margin factor must be positive, got {factor}")]
        }
        _ => Vec::new(),
    }
}

impl RunConfig {
    /// Every invariant violation; empty iff the configuration can run.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            out.push(format!(
                "schema_version {} not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let params = self.material;
        out.extend(params.violations());
        if self.series.m_max == 0 {
            out.push("series.m_max must be at least 1".into());
        }
        if !(self.solver.tol > 0.0) || self.solver.max_iter == 0 {
            out.push("solver needs tol > 0 and max_iter >= 1".into());
        }
        if !out.is_empty() {
            return out;
        }
        let mesh = match Mesh::new(self.mesh.nx, self.mesh.ny, &params) {
            Ok(m) => m,
            Err(e) => {
                out.push(e.to_string());
                return out;
            }
        };
        let forces = |f: &Option<ForceClass>, out: &mut Vec<String>| {
            if let Some(f) = f {
                if let Err(e) = f.validate(&params) {
                    out.push(e.to_string());
                }
            }
        };
        let family = |o: &ObstacleFamily, out: &mut Vec<String>| out.extend(o.violations(&mesh));
        match &self.problem {
            Problem::GreenEval { source, points, grid } => {
                for p in std::iter::once(source).chain(points) {
                    if !params.contains(hinged_plate::Point::new(p[0], p[1])) {
                        out.push(format!("point ({}, {}) outside the plate", p[0], p[1]));
                    }
                }
                if matches!(grid, Some([nx, ny]) if *nx == 0 || *ny == 0) {
                    out.push("green-eval grid needs at least one cell per axis".into());
                }
            }
            Problem::Solve { load, reinforcement } => {
                out.extend(load_violations(load, &params));
                if let Some(r) = reinforcement {
                    out.extend(r.violations(&mesh, &params));
                }
            }
            Problem::ViSolve {
                load,
                obstacles,
                reinforcement,
            } => {
                out.extend(load_violations(load, &params));
                out.extend(obstacle_violations(obstacles));
                if let Some(r) = reinforcement {
                    out.extend(r.violations(&mesh, &params));
                    if r.variant == Variant::E2 && matches!(load, LoadConfig::Dirac { .. } | LoadConfig::Antisym { .. }) {
                        out.push("the density-weighted energy needs a density load".into());
                    }
                }
            }
            Problem::GapScan { forces: f, obstacles } => {
                forces(f, &mut out);
                if let Some(o) = obstacles {
                    family(o, &mut out);
                }
            }
            Problem::OptimizeReinforcement {
                family: fam,
                forces: f,
                variant,
                obstacles,
            } => {
                forces(&Some(f.clone()), &mut out);
                if let Some(o) = obstacles {
                    family(o, &mut out);
                }
                if *variant == Variant::E2 && f.has_point_masses() {
                    out.push("the density-weighted energy needs a bang-bang force class".into());
                }
                let (alpha, beta) = fam.densities();
                if !(alpha > 0.0 && alpha < 1.0 && beta > 1.0 && beta.is_finite()) {
                    out.push(format!(
                        "reinforcement requires alpha < 1 < beta with alpha > 0, got alpha={alpha}, beta={beta}"
                    ));
                } else {
                    match screen_reinforcement(&mesh, &params, fam) {
                        Ok(r) if r.iter().all(|c| !c.feasible) => out.push(format!(
                            "no candidate meets the area constraint |D| = |Omega|(1-alpha)/(beta-alpha) = {:.6e}",
                            params.area() * (1.0 - alpha) / (beta - alpha)
                        )),
                        Ok(_) => {}
                        Err(e) => out.push(e.to_string()),
                    }
                }
            }
            Problem::OptimizeObstacle { candidates, forces: f } => {
                forces(f, &mut out);
                if candidates.is_empty() {
                    out.push("optimize-obstacle needs at least one candidate".into());
                }
                for c in candidates {
                    family(c, &mut out);
                }
            }
            Problem::Regime {
                gamma,
                gamma_over_m,
                forces: f,
                ..
            } => {
                forces(f, &mut out);
                match (gamma, gamma_over_m) {
                    (Some(g), None) | (None, Some(g)) if *g > 0.0 && g.is_finite() => {}
                    (Some(_), Some(_)) | (None, None) => {
                        out.push("regime needs exactly one of gamma and gamma_over_m".into())
                    }
                    _ => out.push("obstacle level gamma must be positive".into()),
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(problem: &str) -> String {
        format!(
            r#"{{"schema_version": 1, "material": {{"sigma": 0.2, "half_width": 0.1}},
                "mesh": {{"nx": 16, "ny": 4}}, "problem": {problem}}}"#
        )
    }

    fn parse(problem: &str) -> RunConfig {
        serde_json::from_str(&base(problem)).unwrap()
    }

    #[test]
    fn sigma_out_of_range_is_reported() {
        let mut c = parse(r#"{"kind": "solve", "load": {"kind": "constant", "value": 1.0}}"#);
        assert!(c.validate().is_empty());
        c.material.sigma = 1.2;
        assert!(c.validate().iter().any(|v| v.contains("sigma outside (0,1)")));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let r: Result<RunConfig, _> =
            serde_json::from_str(&base(r#"{"kind": "solve", "load": {"kind": "constant", "value": 1.0}, "x": 1}"#));
        assert!(r.is_err());
        let r: Result<RunConfig, _> = serde_json::from_str(
            &base(r#"{"kind": "solve", "load": {"kind": "constant", "value": 1.0}}"#).replace("\"mesh\"", "\"meshes\""),
        );
        assert!(r.is_err());
    }

    #[test]
    fn alpha_one_violates_design() {
        let c = parse(
            r#"{"kind": "solve", "load": {"kind": "constant", "value": 1.0},
                "reinforcement": {"alpha": 1.0, "beta": 2.0, "rects": [[0, 1, -0.1, 0.1]], "variant": "e1"}}"#,
        );
        assert!(c.validate().iter().any(|v| v.contains("requires alpha < 1 < beta")));
    }

    #[test]
    fn area_infeasible_family_names_the_constraint() {
        let c = parse(
            r#"{"kind": "optimize-reinforcement", "variant": "e2", "forces": {"kind": "bang-bang", "cx": 1, "cy": 1},
                "family": {"kind": "explicit", "alpha": 0.5, "beta": 2.0, "candidates": [[[0, 0.05, -0.1, 0.1]]]}}"#,
        );
        let v = c.validate();
        assert!(v.iter().any(|m| m.contains("|D|")), "{v:?}");
    }

    #[test]
    fn round_trips() {
        let c = parse(r#"{"kind": "regime", "gamma_over_m": 0.5}"#);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&s).unwrap(), c);
    }
}
