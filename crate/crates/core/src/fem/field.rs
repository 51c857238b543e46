use std::io::Write;

use serde::{Deserialize, Serialize};

use super::hermite::element_basis;
use super::mesh::{Mesh, DOFS_PER_NODE, DX, DXY, DY, VALUE};
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::params::Point;

/// A finite-element field: `(u, u_x, u_y, u_xy)` at every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofField {
    pub mesh: Mesh,
    pub dofs: Vec<f64>,
}

/// Value and first derivatives of a field at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEval {
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
}

impl DofField {
    pub fn zeros(mesh: &Mesh) -> Self {
        Self {
            mesh: *mesh,
            dofs: vec![0.0; mesh.n_dofs()],
        }
    }

    pub fn from_dofs(mesh: &Mesh, dofs: Vec<f64>) -> Result<Self> {
        if dofs.len() != mesh.n_dofs() {
            return Err(Error::validation(format!(
                "expected {} dofs, got {}",
                mesh.n_dofs(),
                dofs.len()
            )));
        }
        Ok(Self { mesh: *mesh, dofs })
    }

    /// Nodal interpolant of a function given as `(u, u_x, u_y, u_xy)`;
    /// pinned DOFs are zeroed.
    pub fn interpolate(mesh: &Mesh, f: impl Fn(Point) -> [f64; 4]) -> Self {
        let mut dofs = vec![0.0; mesh.n_dofs()];
        for k in 0..mesh.n_nodes() {
            let d = f(mesh.node_point(k));
            for c in 0..DOFS_PER_NODE {
                let g = DOFS_PER_NODE * k + c;
                if !mesh.is_pinned(g) {
                    dofs[g] = d[c];
                }
            }
        }
        Self { mesh: *mesh, dofs }
    }

    pub fn node_value(&self, k: usize) -> f64 {
        self.dofs[DOFS_PER_NODE * k + VALUE]
    }

    pub fn nodal_values(&self) -> Vec<f64> {
        (0..self.mesh.n_nodes()).map(|k| self.node_value(k)).collect()
    }

    pub fn max_abs_nodal(&self) -> f64 {
        self.nodal_values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_dof(&self) -> f64 {
        self.dofs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn eval(&self, q: Point) -> Result<FieldEval> {
        let (e, s, t) = self.mesh.locate(q)?;
        let b = element_basis(s, t, self.mesh.hx(), self.mesh.hy());
        let dofs = self.mesh.element_dofs(e);
        let mut out = FieldEval { u: 0.0, ux: 0.0, uy: 0.0 };
        for (k, &g) in dofs.iter().enumerate() {
            let d = self.dofs[g];
            out.u += d * b.v[k];
            out.ux += d * b.dx[k];
            out.uy += d * b.dy[k];
        }
        Ok(out)
    }

    /// The `C¹` interpolant value at `q`.
    pub fn point_eval(&self, q: Point) -> Result<f64> {
        Ok(self.eval(q)?.u)
    }

    /// Whether pinned DOFs vanish exactly.
    pub fn satisfies_essential(&self) -> bool {
        (0..self.dofs.len()).all(|g| !self.mesh.is_pinned(g) || self.dofs[g] == 0.0)
    }

    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        assert_eq!(self.mesh, other.mesh, "fields on different meshes");
        Self {
            mesh: self.mesh,
            dofs: self.dofs.iter().zip(&other.dofs).map(|(x, y)| x + a * y).collect(),
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            mesh: self.mesh,
            dofs: self.dofs.iter().map(|x| a * x).collect(),
        }
    }

    /// One row per node, x-major: `x,y,u,ux,uy,uxy`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "x,y,u,ux,uy,uxy")?;
        for k in 0..self.mesh.n_nodes() {
            let p = self.mesh.node_point(k);
            let d = &self.dofs[DOFS_PER_NODE * k..DOFS_PER_NODE * (k + 1)];
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(p.x),
                fmt_f64(p.y),
                fmt_f64(d[VALUE]),
                fmt_f64(d[DX]),
                fmt_f64(d[DY]),
                fmt_f64(d[DXY])
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::MaterialParams;

    fn mesh() -> Mesh {
        Mesh::new(8, 4, &MaterialParams::new(0.3, 0.1).unwrap()).unwrap()
    }

    fn smooth(p: Point) -> [f64; 4] {
        let (s, c) = p.x.sin_cos();
        let e = (2.0 * p.y).exp();
        [s * e, c * e, 2.0 * s * e, 2.0 * c * e]
    }

    #[test]
    fn node_evaluation_returns_dof() {
        let m = mesh();
        let f = DofField::interpolate(&m, smooth);
        for k in 0..m.n_nodes() {
            let v = f.point_eval(m.node_point(k)).unwrap();
            assert!((v - f.node_value(k)).abs() < 1e-14);
        }
        assert!(f.satisfies_essential());
        assert_eq!(f.point_eval(Point::new(0.0, 0.03)).unwrap(), 0.0);
    }

    #[test]
    fn interpolation_converges_at_fourth_order() {
        let p = MaterialParams::new(0.3, 0.1).unwrap();
        let err = |nx, ny| {
            let f = DofField::interpolate(&Mesh::new(nx, ny, &p).unwrap(), smooth);
            let mut e = 0.0f64;
            for i in 0..37 {
                for j in 0..11 {
                    let q = Point::new(0.083 * i as f64 + 0.01, -0.1 + 0.019 * j as f64);
                    e = e.max((f.point_eval(q).unwrap() - smooth(q)[0]).abs());
                }
            }
            e
        };
        let (e1, e2) = (err(8, 2), err(16, 4));
        assert!(e2 < e1 / 10.0, "{e1} {e2}");
    }

    #[test]
    fn continuity_across_element_edges() {
        let m = mesh();
        let f = DofField::interpolate(&m, smooth);
        let x = m.x(3);
        let a = f.eval(Point::new(x - 1e-12, 0.02)).unwrap();
        let b = f.eval(Point::new(x + 1e-12, 0.02)).unwrap();
        assert!((a.u - b.u).abs() < 1e-10 && (a.ux - b.ux).abs() < 1e-9);
    }

    #[test]
    fn outside_point_is_domain_error() {
        let f = DofField::zeros(&mesh());
        assert!(matches!(f.point_eval(Point::new(-0.1, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_has_header_and_one_row_per_node() {
        let m = mesh();
        let mut buf = Vec::new();
        DofField::zeros(&m).write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().next(), Some("x,y,u,ux,uy,uxy"));
        assert_eq!(s.lines().count(), m.n_nodes() + 1);
    }
}
