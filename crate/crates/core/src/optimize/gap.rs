use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::fem::DofField;
use crate::io::write_csv;

/// `G(x) = u(x, l) − u(x, −l)` at the mesh abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProfile {
    pub x: Vec<f64>,
    pub gap: Vec<f64>,
    pub maximal_gap: f64,
    pub argmax_x: f64,
}

pub fn gap_profile(field: &DofField) -> GapProfile {
    let mesh = &field.mesh;
    let mut x = Vec::with_capacity(mesh.nx + 1);
    let mut gap = Vec::with_capacity(mesh.nx + 1);
    let (mut maximal_gap, mut argmax_x) = (0.0, 0.0);
    for i in 0..=mesh.nx {
        let g = field.node_value(mesh.node(i, mesh.ny)) - field.node_value(mesh.node(i, 0));
        if g.abs() > maximal_gap {
            maximal_gap = g.abs();
            argmax_x = mesh.x(i);
        }
        x.push(mesh.x(i));
        gap.push(g);
    }
    GapProfile {
        x,
        gap,
        maximal_gap,
        argmax_x,
    }
}

impl GapProfile {
    pub fn write_csv(&self, w: impl Write) -> std::io::Result<()> {
        write_csv(w, &["x", "gap"], self.x.iter().zip(&self.gap).map(|(x, g)| vec![*x, *g]))
    }
}
