use serde::{Deserialize, Serialize};

use super::hermite::element_basis;
use super::mask::ReinforcementMask;
use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::params::Point;
use crate::quadrature::element_rule;
use crate::series::AntisymDelta;

const QP: usize = 16;

/// A bounded density sampled at the 4×4 Gauss points of every element,
/// stored as `samples[16·e + 4·ix + iy]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub mesh: Mesh,
    pub samples: Vec<f64>,
}

impl Density {
    pub fn from_fn(mesh: &Mesh, f: impl Fn(Point) -> f64) -> Self {
        let rule = element_rule();
        let mut samples = Vec::with_capacity(QP * mesh.n_elements());
        for e in 0..mesh.n_elements() {
            let (ei, ej) = mesh.element_ij(e);
            for tx in &rule.nodes {
                for ty in &rule.nodes {
                    let x = mesh.x(ei) + tx * mesh.hx();
                    let y = mesh.y(ej) + ty * mesh.hy();
                    samples.push(f(Point::new(x, y)));
                }
            }
        }
        Self { mesh: *mesh, samples }
    }

    pub fn constant(mesh: &Mesh, c: f64) -> Self {
        Self {
            mesh: *mesh,
            samples: vec![c; QP * mesh.n_elements()],
        }
    }

    /// Piecewise constant, one value per element.
    pub fn per_element(mesh: &Mesh, values: &[f64]) -> Result<Self> {
        if values.len() != mesh.n_elements() {
            return Err(Error::validation("one density value per element expected"));
        }
        Ok(Self {
            mesh: *mesh,
            samples: values.iter().flat_map(|&v| [v; QP]).collect(),
        })
    }

    pub fn negated(&self) -> Self {
        Self {
            mesh: self.mesh,
            samples: self.samples.iter().map(|v| -v).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(∫|f|^p)^{1/p}` by the element rule.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_norm();
        }
        let rule = element_rule();
        let area = self.mesh.element_area();
        let mut s = 0.0;
        for chunk in self.samples.chunks(QP) {
            for (k, v) in chunk.iter().enumerate() {
                s += rule.weights[k / 4] * rule.weights[k % 4] * area * v.abs().powf(p);
            }
        }
        s.powf(1.0 / p)
    }

    fn validate(&self, mesh: &Mesh) -> Result<()> {
        if self.mesh != *mesh || self.samples.len() != QP * mesh.n_elements() {
            return Err(Error::validation("density sampled on a different mesh"));
        }
        if let Some(k) = self.samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!("non-finite density sample at index {k}")));
        }
        Ok(())
    }
}

/// A signed Dirac mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub at: Point,
    pub weight: f64,
}

/// The ball a load is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum LoadNorm {
    /// Total variation, the norm of `(C⁰(Ω̄))'`.
    DualContinuous,
    /// `L^p` with `p ∈ [1, ∞]`; `p = ∞` is written as `null` in JSON.
    Lp { p: Option<f64> },
}

/// A density plus finitely many point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadSpec {
    pub density: Option<Density>,
    pub point_masses: Vec<PointMass>,
    pub norm: LoadNorm,
}

impl LoadSpec {
    pub fn zero() -> Self {
        Self {
            density: None,
            point_masses: Vec::new(),
            norm: LoadNorm::DualContinuous,
        }
    }

    pub fn from_density(d: Density) -> Self {
        Self {
            density: Some(d),
            point_masses: Vec::new(),
            norm: LoadNorm::Lp { p: None },
        }
    }

    pub fn from_points(point_masses: Vec<PointMass>) -> Self {
        Self {
            density: None,
            point_masses,
            norm: LoadNorm::DualContinuous,
        }
    }

    pub fn dirac(at: Point, weight: f64) -> Self {
        Self::from_points(vec![PointMass { at, weight }])
    }

    /// `T_{ξ,η} = (δ_{(ξ,η)} − δ_{(ξ,−η)})/2`.
    pub fn antisym(t: AntisymDelta) -> Self {
        Self::from_points(vec![
            PointMass {
                at: Point::new(t.xi, t.eta),
                weight: 0.5,
            },
            PointMass {
                at: Point::new(t.xi, -t.eta),
                weight: -0.5,
            },
        ])
    }

    pub fn negated(&self) -> Self {
        Self {
            density: self.density.as_ref().map(Density::negated),
            point_masses: self
                .point_masses
                .iter()
                .map(|m| PointMass {
                    at: m.at,
                    weight: -m.weight,
                })
                .collect(),
            norm: self.norm,
        }
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }

    /// Norm in the declared ball. Point masses only have a dual norm.
    pub fn norm_value(&self) -> Result<f64> {
        let dens = self.density.as_ref();
        match self.norm {
            LoadNorm::DualContinuous => {
                let tv: f64 = self.point_masses.iter().map(|m| m.weight.abs()).sum();
                Ok(tv + dens.map_or(0.0, |d| d.lp_norm(1.0)))
            }
            LoadNorm::Lp { p } => {
                if !self.point_masses.is_empty() {
                    return Err(Error::unsupported("point masses have no L^p norm"));
                }
                let p = p.unwrap_or(f64::INFINITY);
                if !(p >= 1.0) {
                    return Err(Error::validation(format!("L^p exponent must be >= 1, got {p}")));
                }
                Ok(dens.map_or(0.0, |d| d.lp_norm(p)))
            }
        }
    }
}

/// The load functional `φ ↦ ∫ w f φ + Σ c_k φ(p_k)`, with `w = βχ_D + αχ_{D^c}`
/// when a weight is given (it acts on the density only). Pinned entries are zero.
pub fn assemble_load(mesh: &Mesh, load: &LoadSpec, weight: Option<&ReinforcementMask>) -> Result<Vec<f64>> {
    let mut out = vec![0.0; mesh.n_dofs()];
    if let Some(w) = weight {
        w.region.check_mesh(mesh)?;
    }
    if let Some(d) = &load.density {
        d.validate(mesh)?;
        let rule = element_rule();
        let bases: Vec<_> = rule
            .nodes
            .iter()
            .flat_map(|&s| rule.nodes.iter().map(move |&t| element_basis(s, t, mesh.hx(), mesh.hy())))
            .collect();
        let area = mesh.element_area();
        for e in 0..mesh.n_elements() {
            let we = weight.map_or(1.0, |w| w.weight(e));
            let dofs = mesh.element_dofs(e);
            let f = &d.samples[QP * e..QP * (e + 1)];
            for (q, b) in bases.iter().enumerate() {
                let c = we * f[q] * rule.weights[q / 4] * rule.weights[q % 4] * area;
                if c == 0.0 {
                    continue;
                }
                for (k, &g) in dofs.iter().enumerate() {
                    out[g] += c * b.v[k];
                }
            }
        }
    }
    for m in &load.point_masses {
        if !m.weight.is_finite() {
            return Err(Error::validation("non-finite point-mass weight"));
        }
        let (e, s, t) = mesh.locate(m.at)?;
        let b = element_basis(s, t, mesh.hx(), mesh.hy());
        for (k, &g) in mesh.element_dofs(e).iter().enumerate() {
            out[g] += m.weight * b.v[k];
        }
    }
    for (g, v) in out.iter_mut().enumerate() {
        if mesh.is_pinned(g) {
            *v = 0.0;
        }
    }
    Ok(out)
}
