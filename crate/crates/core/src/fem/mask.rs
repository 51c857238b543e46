use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::params::{MaterialParams, Point};

/// A set of whole elements, indexed like [`Mesh::element`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementMask {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<bool>,
}

impl ElementMask {
    pub fn empty(mesh: &Mesh) -> Self {
        Self {
            nx: mesh.nx,
            ny: mesh.ny,
            cells: vec![false; mesh.n_elements()],
        }
    }

    pub fn full(mesh: &Mesh) -> Self {
        Self {
            cells: vec![true; mesh.n_elements()],
            ..Self::empty(mesh)
        }
    }

    /// Elements whose center satisfies `inside`.
    pub fn from_fn(mesh: &Mesh, inside: impl Fn(Point) -> bool) -> Self {
        Self {
            nx: mesh.nx,
            ny: mesh.ny,
            cells: (0..mesh.n_elements()).map(|e| inside(mesh.element_center(e))).collect(),
        }
    }

    /// Union of axis-parallel rectangles `[x0,x1] × [y0,y1]`, rasterized by
    /// element centers.
    pub fn from_rects(mesh: &Mesh, rects: &[[f64; 4]]) -> Self {
        Self::from_fn(mesh, |p| {
            rects.iter().any(|r| p.x >= r[0] && p.x <= r[1] && p.y >= r[2] && p.y <= r[3])
        })
    }

    pub fn check_mesh(&self, mesh: &Mesh) -> Result<()> {
        if self.nx != mesh.nx || self.ny != mesh.ny || self.cells.len() != mesh.n_elements() {
            return Err(Error::validation(format!(
                "mask built for a {}x{} mesh, used on {}x{}",
                self.nx, self.ny, mesh.nx, mesh.ny
            )));
        }
        Ok(())
    }

    pub fn contains(&self, e: usize) -> bool {
        self.cells[e]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn area(&self, mesh: &Mesh) -> f64 {
        self.count() as f64 * mesh.element_area()
    }

    pub fn complement(&self) -> Self {
        Self {
            cells: self.cells.iter().map(|c| !c).collect(),
            ..self.clone()
        }
    }

    pub fn mirror_x(&self) -> Self {
        let mut cells = vec![false; self.cells.len()];
        for ei in 0..self.nx {
            for ej in 0..self.ny {
                cells[(self.nx - 1 - ei) * self.ny + ej] = self.cells[ei * self.ny + ej];
            }
        }
        Self { cells, ..self.clone() }
    }

    pub fn mirror_y(&self) -> Self {
        let mut cells = vec![false; self.cells.len()];
        for ei in 0..self.nx {
            for ej in 0..self.ny {
                cells[ei * self.ny + (self.ny - 1 - ej)] = self.cells[ei * self.ny + ej];
            }
        }
        Self { cells, ..self.clone() }
    }
}

/// The reinforcement set `D` with densities `α` on `D^c` and `β` on `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReinforcementMask {
    pub region: ElementMask,
    pub alpha: f64,
    pub beta: f64,
}

impl ReinforcementMask {
    /// Accepts `0 < α ≤ 1 ≤ β`; the degenerate `α = β = 1` is the plain plate.
    /// Use [`ReinforcementMask::design_violations`] for the strict design check.
    pub fn new(region: ElementMask, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0 && beta >= 1.0 && beta.is_finite()) {
            return Err(Error::validation(format!(
                "densities must satisfy 0 < alpha <= 1 <= beta, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { region, alpha, beta })
    }

    /// `α = β = 1` over an empty region.
    pub fn neutral(mesh: &Mesh) -> Self {
        Self {
            region: ElementMask::empty(mesh),
            alpha: 1.0,
            beta: 1.0,
        }
    }

    /// `βχ_D + αχ_{D^c}` on element `e`.
    pub fn weight(&self, e: usize) -> f64 {
        if self.region.contains(e) {
            self.beta
        } else {
            self.alpha
        }
    }

    /// `|Ω|(1−α)/(β−α)`, undefined when `α = β`.
    pub fn target_area(&self, params: &MaterialParams) -> Option<f64> {
        (self.beta > self.alpha).then(|| params.area() * (1.0 - self.alpha) / (self.beta - self.alpha))
    }

    /// Area of one layer of elements along the longer mesh direction, the
    /// rasterization slack allowed per rectangle.
    pub fn default_area_tolerance(mesh: &Mesh) -> f64 {
        mesh.nx.max(mesh.ny) as f64 * mesh.element_area()
    }

    /// Violations of `0 < α < 1 < β` and of the area constraint within `area_tol`.
    pub fn design_violations(&self, mesh: &Mesh, params: &MaterialParams, area_tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        if let Err(e) = self.region.check_mesh(mesh) {
            out.push(e.to_string());
            return out;
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0 && self.beta > 1.0 && self.beta.is_finite()) {
            out.push(format!(
                "reinforcement requires alpha < 1 < beta with alpha > 0, got alpha={}, beta={}",
                self.alpha, self.beta
            ));
            return out;
        }
        if let Some(target) = self.target_area(params) {
            let area = self.region.area(mesh);
            if (area - target).abs() > area_tol {
                out.push(format!(
                    "area constraint |D| = |Omega|(1-alpha)/(beta-alpha) = {target:.6e} violated: rasterized |D| = {area:.6e} (tolerance {area_tol:.3e})"
                ));
            }
        }
        out
    }
}
