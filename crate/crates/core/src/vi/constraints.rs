use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{Mesh, DOFS_PER_NODE, VALUE};
use crate::obstacle::ObstacleSpec;
use crate::params::Point;

/// Bounds `lower ≤ u ≤ upper` on the nodal values of the nodes of `Ω_O`.
///
/// Nodes on the short edges are never stored: their value is pinned to 0,
/// which every admissible box already allows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxConstraints {
    pub nodes: Vec<usize>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxConstraints {
    pub fn none() -> Self {
        Self {
            nodes: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
        }
    }

    /// Bounds from functions of position on the given nodes.
    pub fn on_nodes(
        mesh: &Mesh,
        nodes: impl IntoIterator<Item = usize>,
        lower: impl Fn(Point) -> f64,
        upper: impl Fn(Point) -> f64,
    ) -> Result<Self> {
        let mut out = Self::none();
        for k in nodes {
            if k >= mesh.n_nodes() {
                return Err(Error::validation(format!("node {k} outside the mesh")));
            }
            if mesh.is_short_edge_node(k) {
                continue;
            }
            let p = mesh.node_point(k);
            out.nodes.push(k);
            out.lower.push(lower(p));
            out.upper.push(upper(p));
        }
        out.validate(mesh)?;
        Ok(out)
    }

    /// Obstacles on the whole closed plate.
    pub fn full_plate(mesh: &Mesh, lower: impl Fn(Point) -> f64, upper: impl Fn(Point) -> f64) -> Result<Self> {
        Self::on_nodes(mesh, 0..mesh.n_nodes(), lower, upper)
    }

    /// Thin obstacles on the long edges `y = ±l`.
    pub fn long_edges(mesh: &Mesh, lower: impl Fn(Point) -> f64, upper: impl Fn(Point) -> f64) -> Result<Self> {
        Self::on_nodes(mesh, mesh.long_edge_nodes(), lower, upper)
    }

    /// Sampled obstacles; every sample point has to be a mesh node.
    pub fn from_obstacle(mesh: &Mesh, spec: &ObstacleSpec) -> Result<Self> {
        spec.validate()?;
        let mut out = Self::none();
        for (i, p) in spec.points.iter().enumerate() {
            let k = mesh
                .node_at(*p)
                .ok_or_else(|| Error::validation(format!("obstacle point ({}, {}) is not a mesh node", p.x, p.y)))?;
            if mesh.is_short_edge_node(k) {
                continue;
            }
            out.nodes.push(k);
            out.lower.push(spec.lower[i]);
            out.upper.push(spec.upper[i]);
        }
        out.validate(mesh)?;
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dof(&self, i: usize) -> usize {
        DOFS_PER_NODE * self.nodes[i] + VALUE
    }

    pub fn validate(&self, mesh: &Mesh) -> Result<()> {
        if self.lower.len() != self.nodes.len() || self.upper.len() != self.nodes.len() {
            return Err(Error::validation("bounds and nodes differ in length"));
        }
        let mut seen = HashSet::new();
        for (i, &k) in self.nodes.iter().enumerate() {
            if k >= mesh.n_nodes() || mesh.is_short_edge_node(k) {
                return Err(Error::validation(format!("node {k} cannot carry an obstacle")));
            }
            if !seen.insert(k) {
                return Err(Error::validation(format!("node {k} constrained twice")));
            }
            let (lo, hi) = (self.lower[i], self.upper[i]);
            if lo.is_nan() || hi.is_nan() {
                return Err(Error::validation(format!("NaN bound at node {k}")));
            }
            if lo > hi {
                return Err(Error::validation(format!("infeasible box at node {k}: lower {lo} > upper {hi}")));
            }
            if lo > 0.0 || hi < 0.0 {
                return Err(Error::validation(format!(
                    "obstacles must satisfy psi_minus <= 0 <= psi_plus; node {k} has [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// Whether `Ω_O` is exactly the long edges (short-edge corners aside).
    pub fn is_thin(&self, mesh: &Mesh) -> bool {
        let want: HashSet<usize> = mesh
            .long_edge_nodes()
            .into_iter()
            .filter(|&k| !mesh.is_short_edge_node(k))
            .collect();
        let have: HashSet<usize> = self.nodes.iter().copied().collect();
        want == have
    }

    /// `ψ₊ = −ψ₋` everywhere.
    pub fn is_sign_symmetric(&self) -> bool {
        self.lower.iter().zip(&self.upper).all(|(lo, hi)| *lo == -*hi)
    }

    /// Node set and bounds invariant under `y ↦ −y`.
    pub fn is_y_symmetric(&self, mesh: &Mesh) -> bool {
        let index: std::collections::HashMap<usize, usize> =
            self.nodes.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        self.nodes.iter().enumerate().all(|(i, &k)| {
            index
                .get(&mesh.mirror_node_y(k))
                .is_some_and(|&j| self.lower[i] == self.lower[j] && self.upper[i] == self.upper[j])
        })
    }

    /// Maximal finite `|bound|`, used to scale residuals.
    pub(crate) fn max_abs_bound(&self) -> f64 {
        self.lower
            .iter()
            .chain(&self.upper)
            .filter(|v| v.is_finite())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}
