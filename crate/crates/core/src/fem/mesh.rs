use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{MaterialParams, Point};

pub const DOFS_PER_NODE: usize = 4;
/// Offsets of the nodal degrees of freedom.
pub const VALUE: usize = 0;
pub const DX: usize = 1;
pub const DY: usize = 2;
pub const DXY: usize = 3;

/// Uniform `nx × ny` rectangular grid of `[0, π] × [−l, l]`.
///
/// Nodes are numbered `i·(ny+1) + j` (x outer, y inner) so that the
/// stiffness bandwidth only grows with `ny`. The ordinates are computed as
/// `l·(2j − ny)/ny`, which makes the grid exactly symmetric under `y ↦ −y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
    pub half_width: f64,
}

impl Mesh {
    pub fn new(nx: usize, ny: usize, params: &MaterialParams) -> Result<Self> {
        params.validate()?;
        if nx < 4 || ny < 2 {
            return Err(Error::validation(format!("mesh needs nx >= 4 and ny >= 2, got {nx}x{ny}")));
        }
        Ok(Self {
            nx,
            ny,
            half_width: params.half_width,
        })
    }

    pub fn hx(&self) -> f64 {
        PI / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        2.0 * self.half_width / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        PI * i as f64 / self.nx as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.half_width * (2.0 * j as f64 - self.ny as f64) / self.ny as f64
    }

    pub fn n_nodes(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn n_dofs(&self) -> usize {
        DOFS_PER_NODE * self.n_nodes()
    }

    pub fn n_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn node(&self, i: usize, j: usize) -> usize {
        i * (self.ny + 1) + j
    }

    pub fn node_ij(&self, k: usize) -> (usize, usize) {
        (k / (self.ny + 1), k % (self.ny + 1))
    }

    pub fn node_point(&self, k: usize) -> Point {
        let (i, j) = self.node_ij(k);
        Point::new(self.x(i), self.y(j))
    }

    pub fn node_points(&self) -> Vec<Point> {
        (0..self.n_nodes()).map(|k| self.node_point(k)).collect()
    }

    /// Nodes on the long edges `y = ±l`, lower edge first, each by increasing x.
    pub fn long_edge_nodes(&self) -> Vec<usize> {
        let lower = (0..=self.nx).map(|i| self.node(i, 0));
        let upper = (0..=self.nx).map(|i| self.node(i, self.ny));
        lower.chain(upper).collect()
    }

    pub fn mirror_node_y(&self, k: usize) -> usize {
        let (i, j) = self.node_ij(k);
        self.node(i, self.ny - j)
    }

    pub fn mirror_node_x(&self, k: usize) -> usize {
        let (i, j) = self.node_ij(k);
        self.node(self.nx - i, j)
    }

    pub fn element(&self, ei: usize, ej: usize) -> usize {
        ei * self.ny + ej
    }

    pub fn element_ij(&self, e: usize) -> (usize, usize) {
        (e / self.ny, e % self.ny)
    }

    pub fn element_center(&self, e: usize) -> Point {
        let (ei, ej) = self.element_ij(e);
        Point::new(
            0.5 * (self.x(ei) + self.x(ei + 1)),
            0.5 * (self.y(ej) + self.y(ej + 1)),
        )
    }

    pub fn element_area(&self) -> f64 {
        self.hx() * self.hy()
    }

    /// Corner nodes ordered `(0,0), (1,0), (1,1), (0,1)` in local coordinates.
    pub fn element_nodes(&self, e: usize) -> [usize; 4] {
        let (ei, ej) = self.element_ij(e);
        [
            self.node(ei, ej),
            self.node(ei + 1, ej),
            self.node(ei + 1, ej + 1),
            self.node(ei, ej + 1),
        ]
    }

    /// Global DOF indices in local order `4·corner + offset`.
    pub fn element_dofs(&self, e: usize) -> [usize; 16] {
        let nodes = self.element_nodes(e);
        let mut out = [0; 16];
        for (a, n) in nodes.iter().enumerate() {
            for c in 0..DOFS_PER_NODE {
                out[4 * a + c] = DOFS_PER_NODE * n + c;
            }
        }
        out
    }

    /// Lower half-bandwidth of the assembled stiffness.
    pub fn bandwidth(&self) -> usize {
        DOFS_PER_NODE * (self.ny + 2) + 3
    }

    /// Essential constraint: value and y-derivative vanish on `x ∈ {0, π}`.
    pub fn is_pinned(&self, dof: usize) -> bool {
        let (i, _) = self.node_ij(dof / DOFS_PER_NODE);
        let c = dof % DOFS_PER_NODE;
        (i == 0 || i == self.nx) && (c == VALUE || c == DY)
    }

    pub fn pinned_mask(&self) -> Vec<bool> {
        (0..self.n_dofs()).map(|d| self.is_pinned(d)).collect()
    }

    pub fn is_short_edge_node(&self, k: usize) -> bool {
        let (i, _) = self.node_ij(k);
        i == 0 || i == self.nx
    }

    /// Element containing `p` with local coordinates `(s, t) ∈ [0,1]²`.
    pub fn locate(&self, p: Point) -> Result<(usize, f64, f64)> {
        let l = self.half_width;
        let ok = p.x.is_finite()
            && p.y.is_finite()
            && p.x >= -1e-12 * PI
            && p.x <= PI * (1.0 + 1e-12)
            && p.y.abs() <= l * (1.0 + 1e-12);
        if !ok {
            return Err(Error::domain(format!(
                "point ({}, {}) outside the plate [0,pi]x[-{l},{l}]",
                p.x, p.y
            )));
        }
        let fx = (p.x / self.hx()).clamp(0.0, self.nx as f64);
        let fy = ((p.y + l) / self.hy()).clamp(0.0, self.ny as f64);
        let ei = (fx.floor() as usize).min(self.nx - 1);
        let ej = (fy.floor() as usize).min(self.ny - 1);
        let s = ((p.x - self.x(ei)) / self.hx()).clamp(0.0, 1.0);
        let t = ((p.y - self.y(ej)) / self.hy()).clamp(0.0, 1.0);
        Ok((self.element(ei, ej), s, t))
    }

    /// Node sitting at `p` (within 1e-9 of a cell size), if any.
    pub fn node_at(&self, p: Point) -> Option<usize> {
        let fi = p.x / self.hx();
        let fj = (p.y + self.half_width) / self.hy();
        let (ri, rj) = (fi.round(), fj.round());
        if (fi - ri).abs() > 1e-9 || (fj - rj).abs() > 1e-9 {
            return None;
        }
        if ri < 0.0 || rj < 0.0 || ri > self.nx as f64 || rj > self.ny as f64 {
            return None;
        }
        Some(self.node(ri as usize, rj as usize))
    }
}
