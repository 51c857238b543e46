use serde::{Deserialize, Serialize};

use super::constraints::BoxConstraints;
use super::solver::{Contact, VISolution};
use crate::fem::Operator;

/// Relative residuals of the first-order system of the box QP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktReport {
    /// `‖f − Ku − λ‖∞` over the free DOFs, relative to `max(‖f‖, ‖K‖‖u‖, ‖λ‖)`.
    pub stationarity: f64,
    /// Wrong-sign multipliers and `|λ|·dist(u, bound)`, relative.
    pub complementarity: f64,
    /// Largest bound violation relative to `max(‖u‖∞, |bounds|)`.
    pub feasibility: f64,
}

impl KktReport {
    pub fn max(&self) -> f64 {
        self.stationarity.max(self.complementarity).max(self.feasibility)
    }

    pub(crate) fn compute(
        op: &Operator,
        f: &[f64],
        u: &[f64],
        constraints: &BoxConstraints,
        states: &[Contact],
        multipliers: &[f64],
    ) -> Self {
        let mesh = &op.mesh;
        let mut r = op.residual(f, u);
        for (i, lam) in multipliers.iter().enumerate() {
            r[constraints.dof(i)] -= lam;
        }
        let inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let u_inf = (0..mesh.n_nodes()).map(|k| u[4 * k].abs()).fold(0.0, f64::max);
        let lam_inf = inf(multipliers);
        let force_scale = inf(f).max(op.matrix.norm_inf() * inf(u)).max(lam_inf).max(f64::MIN_POSITIVE);
        let disp_scale = u_inf.max(constraints.max_abs_bound()).max(f64::MIN_POSITIVE);

        let stationarity = (0..r.len())
            .filter(|&g| !mesh.is_pinned(g))
            .fold(0.0f64, |m, g| m.max(r[g].abs()))
            / force_scale;

        let mut complementarity = 0.0f64;
        let mut feasibility = 0.0f64;
        for (i, state) in states.iter().enumerate() {
            let v = u[constraints.dof(i)];
            let (lo, hi) = (constraints.lower[i], constraints.upper[i]);
            let lam = multipliers[i];
            let wrong_sign = match state {
                Contact::Upper if lo < hi => (-lam).max(0.0),
                Contact::Lower if lo < hi => lam.max(0.0),
                Contact::Free => lam.abs(),
                _ => 0.0,
            };
            let dist = if lam > 0.0 { (hi - v).abs() } else { (v - lo).abs() };
            let dist = if lam == 0.0 { 0.0 } else { dist };
            complementarity = complementarity.max(wrong_sign / force_scale).max(lam.abs() * dist / (force_scale * disp_scale));
            feasibility = feasibility.max((lo - v).max(v - hi).max(0.0) / disp_scale);
        }
        Self {
            stationarity,
            complementarity,
            feasibility,
        }
    }
}

/// The residual summary stored with a solution.
pub fn kkt_report(solution: &VISolution) -> KktReport {
    solution.kkt
}
