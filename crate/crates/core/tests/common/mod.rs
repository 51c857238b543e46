//! Helpers shared by integration tests.

use hinged_plate::fem::Operator;
use hinged_plate::vi::BoxConstraints;
use nalgebra::{DMatrix, DVector};

/// Minimizer of `½uᵀKu − fᵀu` over the box by trying every
/// free/lower/upper pattern and keeping the best feasible candidate.
pub fn brute_force(op: &Operator, f: &[f64], c: &BoxConstraints) -> Vec<f64> {
    let mesh = &op.mesh;
    let dense = op.matrix.to_dense();
    let free: Vec<usize> = (0..mesh.n_dofs()).filter(|&g| !mesh.is_pinned(g)).collect();
    let k = c.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for code in 0..3usize.pow(k as u32) {
        let mut fixed = vec![None; mesh.n_dofs()];
        let mut t = code;
        for i in 0..k {
            match t % 3 {
                1 => fixed[c.dof(i)] = Some(c.lower[i]),
                2 => fixed[c.dof(i)] = Some(c.upper[i]),
                _ => {}
            }
            t /= 3;
        }
        let rest: Vec<usize> = free.iter().copied().filter(|&g| fixed[g].is_none()).collect();
        let a = DMatrix::from_fn(rest.len(), rest.len(), |i, j| dense[rest[i]][rest[j]]);
        let b = DVector::from_fn(rest.len(), |i, _| {
            let g = rest[i];
            f[g] - (0..mesh.n_dofs()).filter_map(|h| fixed[h].map(|v| dense[g][h] * v)).sum::<f64>()
        });
        let x = a.cholesky().expect("SPD").solve(&b);
        let mut u = vec![0.0; mesh.n_dofs()];
        for (i, &g) in rest.iter().enumerate() {
            u[g] = x[i];
        }
        for g in 0..mesh.n_dofs() {
            if let Some(v) = fixed[g] {
                u[g] = v;
            }
        }
        let feasible = (0..k).all(|i| {
            let v = u[c.dof(i)];
            v >= c.lower[i] - 1e-12 && v <= c.upper[i] + 1e-12
        });
        if !feasible {
            continue;
        }
        let ku: Vec<f64> = (0..u.len()).map(|i| (0..u.len()).map(|j| dense[i][j] * u[j]).sum()).collect();
        let e = 0.5 * ku.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() - f.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
        if best.as_ref().map_or(true, |(be, _)| e < *be) {
            best = Some((e, u));
        }
    }
    best.expect("zero is always feasible").1
}
