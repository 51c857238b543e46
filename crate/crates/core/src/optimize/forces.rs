use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{Density, LoadSpec, Mesh, PointMass};
use crate::params::{MaterialParams, Point};
use crate::series::{AntisymDelta, ScanWindow};

/// Upper limit on the cells of a bang-bang grid (2¹⁶ sign patterns).
const MAX_BANG_CELLS: usize = 16;

/// A finite, unit-norm family of loads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ForceClass {
    /// `T_{ξ,η}` on an `nx × ny` lattice of the plate, kept where it lies in
    /// the window `Ω̃`, has `ξ ∈ (0, π)` and `η ≠ 0`.
    AntisymDelta { window: ScanWindow, nx: usize, ny: usize },
    /// The even pairs `(δ_{(ξ,η)} + δ_{(ξ,−η)})/2` on the same lattice.
    EvenDelta { window: ScanWindow, nx: usize, ny: usize },
    /// `±δ_p` on an `nx × ny` lattice of the closed plate.
    SignedDelta { nx: usize, ny: usize },
    /// Densities equal to `±1` on each cell of a `cx × cy` partition.
    BangBang { cx: usize, cy: usize },
}

/// One member of a [`ForceClass`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Force {
    Antisym { xi: f64, eta: f64 },
    EvenPair { xi: f64, eta: f64 },
    Delta { x: f64, y: f64, sign: f64 },
    BangBang { cx: usize, cy: usize, signs: Vec<i8> },
}

fn lattice(nx: usize, ny: usize, params: &MaterialParams) -> impl Iterator<Item = Point> {
    let l = params.half_width;
    (0..nx).flat_map(move |i| {
        (0..ny).map(move |j| {
            let x = PI * i as f64 / (nx - 1) as f64;
            let y = l * (2.0 * j as f64 - (ny - 1) as f64) / (ny - 1) as f64;
            Point::new(x, y)
        })
    })
}

impl ForceClass {
    /// 33 × 9 antisymmetric pairs over the default window.
    pub fn default_antisym(params: &MaterialParams) -> Self {
        ForceClass::AntisymDelta {
            window: ScanWindow::default_for(params),
            nx: 33,
            ny: 9,
        }
    }

    pub fn validate(&self, params: &MaterialParams) -> Result<()> {
        match self {
            ForceClass::AntisymDelta { window, nx, ny } | ForceClass::EvenDelta { window, nx, ny } => {
                window.validate(params)?;
                if *nx < 3 || *ny < 2 {
                    return Err(Error::validation("delta lattice needs nx >= 3 and ny >= 2"));
                }
            }
            ForceClass::SignedDelta { nx, ny } => {
                if *nx < 2 || *ny < 2 {
                    return Err(Error::validation("delta lattice needs nx >= 2 and ny >= 2"));
                }
            }
            ForceClass::BangBang { cx, cy } => {
                if *cx == 0 || *cy == 0 || cx * cy > MAX_BANG_CELLS {
                    return Err(Error::validation(format!(
                        "bang-bang grid needs 1 <= cx*cy <= {MAX_BANG_CELLS}, got {cx}x{cy}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Members in scan order.
    pub fn members(&self, params: &MaterialParams) -> Result<Vec<Force>> {
        self.validate(params)?;
        let out: Vec<Force> = match self {
            ForceClass::AntisymDelta { window, nx, ny } | ForceClass::EvenDelta { window, nx, ny } => {
                let antisym = matches!(self, ForceClass::AntisymDelta { .. });
                lattice(*nx, *ny, params)
                    .filter(|p| p.x > 0.0 && p.x < PI && p.y != 0.0 && window.contains(*p))
                    .map(|p| {
                        if antisym {
                            Force::Antisym { xi: p.x, eta: p.y }
                        } else {
                            Force::EvenPair { xi: p.x, eta: p.y }
                        }
                    })
                    .collect()
            }
            ForceClass::SignedDelta { nx, ny } => lattice(*nx, *ny, params)
                .flat_map(|p| {
                    [1.0, -1.0].map(|sign| Force::Delta { x: p.x, y: p.y, sign })
                })
                .collect(),
            ForceClass::BangBang { cx, cy } => {
                let n = cx * cy;
                (0..1u32 << n)
                    .map(|code| Force::BangBang {
                        cx: *cx,
                        cy: *cy,
                        signs: (0..n).map(|k| if code >> k & 1 == 0 { 1 } else { -1 }).collect(),
                    })
                    .collect()
            }
        };
        if out.is_empty() {
            return Err(Error::validation("force class has no members"));
        }
        Ok(out)
    }

    pub fn has_point_masses(&self) -> bool {
        !matches!(self, ForceClass::BangBang { .. })
    }
}

impl Force {
    pub fn load(&self, mesh: &Mesh) -> Result<LoadSpec> {
        Ok(match self {
            Force::Antisym { xi, eta } => LoadSpec::antisym(AntisymDelta::new(*xi, *eta)),
            Force::EvenPair { xi, eta } => LoadSpec::from_points(vec![
                PointMass {
                    at: Point::new(*xi, *eta),
                    weight: 0.5,
                },
                PointMass {
                    at: Point::new(*xi, -*eta),
                    weight: 0.5,
                },
            ]),
            Force::Delta { x, y, sign } => LoadSpec::dirac(Point::new(*x, *y), *sign),
            Force::BangBang { cx, cy, signs } => {
                let l = mesh.half_width;
                let values: Vec<f64> = (0..mesh.n_elements())
                    .map(|e| {
                        let c = mesh.element_center(e);
                        let i = ((c.x / PI * *cx as f64) as usize).min(cx - 1);
                        let j = (((c.y + l) / (2.0 * l) * *cy as f64) as usize).min(cy - 1);
                        signs[i * cy + j] as f64
                    })
                    .collect();
                LoadSpec::from_density(Density::per_element(mesh, &values)?)
            }
        })
    }

    pub fn negated(&self) -> Self {
        match self {
            Force::Antisym { xi, eta } => Force::Antisym { xi: *xi, eta: -*eta },
            Force::Delta { x, y, sign } => Force::Delta {
                x: *x,
                y: *y,
                sign: -*sign,
            },
            Force::BangBang { cx, cy, signs } => Force::BangBang {
                cx: *cx,
                cy: *cy,
                signs: signs.iter().map(|s| -s).collect(),
            },
            // the negative of an even pair is not in its class
            Force::EvenPair { .. } => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antisym_lattice_skips_zero_norm_sites() {
        let p = MaterialParams::new(0.2, 0.1).unwrap();
        let m = ForceClass::default_antisym(&p).members(&p).unwrap();
        assert!(m.iter().all(|f| matches!(f, Force::Antisym { xi, eta } if *xi > 0.0 && *xi < PI && *eta != 0.0)));
        assert!(m.iter().any(|f| matches!(f, Force::Antisym { xi, eta } if (*xi - PI / 2.0).abs() < 1e-15 && *eta == 0.1)));
        for f in &m {
            if let Force::Antisym { xi, eta } = f {
                assert!(LoadSpec::antisym(AntisymDelta::new(*xi, *eta)).norm_value().unwrap() == 1.0);
            }
        }
    }

    #[test]
    fn bang_bang_members_have_unit_sup_norm() {
        let p = MaterialParams::new(0.2, 0.1).unwrap();
        let mesh = Mesh::new(8, 4, &p).unwrap();
        let class = ForceClass::BangBang { cx: 2, cy: 2 };
        let m = class.members(&p).unwrap();
        assert_eq!(m.len(), 16);
        for f in &m {
            assert_eq!(f.load(&mesh).unwrap().norm_value().unwrap(), 1.0);
        }
        assert!(ForceClass::BangBang { cx: 5, cy: 4 }.members(&p).is_err());
    }
}
