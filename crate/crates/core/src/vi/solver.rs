use std::collections::{HashMap, HashSet};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::constraints::BoxConstraints;
use super::kkt::KktReport;
use crate::error::{Error, Result};
use crate::fem::{assemble_load, BandedCholesky, DofField, LoadSpec, Operator, ReinforcementMask};

/// Active sets larger than this are handled by refactoring with the active
/// values eliminated instead of through the Schur complement.
const SCHUR_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    /// Relative KKT tolerance.
    pub tol: f64,
    /// Active-set iterations before giving up on the primal-dual method.
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 200 }
    }
}

/// Contact state of one constrained node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Contact {
    Free,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    PrimalDual,
    PrimalActiveSet,
}

/// Minimizer of the discrete energy over the box, with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct VISolution {
    pub field: DofField,
    pub constraints: BoxConstraints,
    /// Contact state per constrained node (aligned with `constraints.nodes`).
    pub states: Vec<Contact>,
    /// `λ = f − Ku` on constrained nodes: `≥ 0` on upper contact, `≤ 0` on
    /// lower contact, exactly 0 off contact.
    pub multipliers: Vec<f64>,
    pub lower_contact: Vec<usize>,
    pub upper_contact: Vec<usize>,
    pub kkt: KktReport,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub method: SolveMethod,
    /// `½uᵀKu − fᵀu`.
    pub energy: f64,
}

/// JSON-friendly digest of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VISummary {
    pub contact_lower: Vec<[f64; 2]>,
    pub contact_upper: Vec<[f64; 2]>,
    pub kkt: KktReport,
    pub energy: f64,
    pub iterations: usize,
    pub method: SolveMethod,
}

impl VISolution {
    pub fn contact_free(&self) -> bool {
        self.lower_contact.is_empty() && self.upper_contact.is_empty()
    }

    pub fn summary(&self) -> VISummary {
        let pts = |nodes: &[usize]| {
            nodes
                .iter()
                .map(|&k| {
                    let p = self.field.mesh.node_point(k);
                    [p.x, p.y]
                })
                .collect()
        };
        VISummary {
            contact_lower: pts(&self.lower_contact),
            contact_upper: pts(&self.upper_contact),
            kkt: self.kkt,
            energy: self.energy,
            iterations: self.iterations,
            method: self.method,
        }
    }
}

fn checked_rhs(op: &Operator, f: &[f64]) -> Result<Vec<f64>> {
    if f.len() != op.mesh.n_dofs() {
        return Err(Error::validation(format!(
            "load functional has {} entries, operator {}",
            f.len(),
            op.mesh.n_dofs()
        )));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation("non-finite load functional"));
    }
    let mut b = f.to_vec();
    for (g, v) in b.iter_mut().enumerate() {
        if op.mesh.is_pinned(g) {
            *v = 0.0;
        }
    }
    Ok(b)
}

/// Unconstrained Galerkin solution `K u = f` on the essential-constrained space.
pub fn solve_linear(op: &Operator, f: &[f64]) -> Result<DofField> {
    let b = checked_rhs(op, f)?;
    let u = op.solve(&b)?;
    let r = KktReport::compute(op, &b, &u, &BoxConstraints::none(), &[], &[]);
    if r.stationarity > 1e-10 {
        return Err(Error::Singular(format!(
            "linear residual {:e} above 1e-10",
            r.stationarity
        )));
    }
    DofField::from_dofs(&op.mesh, u)
}

pub fn solve_obstacle(
    op: &Operator,
    f: &[f64],
    constraints: &BoxConstraints,
    settings: &SolverSettings,
) -> Result<VISolution> {
    ObstacleSolver::new(op, constraints.clone(), *settings)?.solve(f)
}

/// Obstacle problem for `α(·,·)_Ω + (β−α)(·,·)_D`, given the two region forms.
pub fn solve_reinforced(
    omega: &Operator,
    region: &Operator,
    alpha: f64,
    beta: f64,
    f: &[f64],
    constraints: &BoxConstraints,
    settings: &SolverSettings,
) -> Result<VISolution> {
    if !(alpha > 0.0 && alpha <= 1.0 && beta >= 1.0 && beta.is_finite()) {
        return Err(Error::validation(format!(
            "densities must satisfy 0 < alpha <= 1 <= beta, got alpha={alpha}, beta={beta}"
        )));
    }
    let op = omega.combine(alpha, region, beta - alpha)?;
    solve_obstacle(&op, f, constraints, settings)
}

/// Obstacle problem with the density multiplied by `βχ_D + αχ_{D^c}`.
pub fn solve_densityweighted(
    op: &Operator,
    load: &LoadSpec,
    mask: &ReinforcementMask,
    constraints: &BoxConstraints,
    settings: &SolverSettings,
) -> Result<VISolution> {
    if load.density.is_none() || !load.point_masses.is_empty() {
        return Err(Error::unsupported(
            "the density-weighted problem needs a load given by a density alone",
        ));
    }
    let f = assemble_load(&op.mesh, load, Some(mask))?;
    solve_obstacle(op, &f, constraints, settings)
}

/// Reusable solver for one operator and box: the factorization and the
/// columns `K⁻¹e_i` of constrained nodes are shared across right-hand sides.
pub struct ObstacleSolver<'a> {
    op: &'a Operator,
    chol: &'a BandedCholesky,
    constraints: BoxConstraints,
    settings: SolverSettings,
    diag: Vec<f64>,
    columns: HashMap<usize, Vec<f64>>,
}

impl<'a> ObstacleSolver<'a> {
    pub fn new(op: &'a Operator, constraints: BoxConstraints, settings: SolverSettings) -> Result<Self> {
        constraints.validate(&op.mesh)?;
        if !(settings.tol > 0.0) || settings.max_iter == 0 {
            return Err(Error::validation("solver needs tol > 0 and max_iter >= 1"));
        }
        let chol = op.factor()?;
        let diag = (0..constraints.len()).map(|i| op.matrix.diag(constraints.dof(i))).collect();
        Ok(Self {
            op,
            chol,
            constraints,
            settings,
            diag,
            columns: HashMap::new(),
        })
    }

    pub fn constraints(&self) -> &BoxConstraints {
        &self.constraints
    }

    pub fn operator(&self) -> &Operator {
        self.op
    }

    pub fn solve(&mut self, f: &[f64]) -> Result<VISolution> {
        self.solve_from(f, None)
    }

    /// Starts the active-set iteration from `warm` instead of the sets
    /// suggested by the unconstrained solution.
    pub fn solve_warm(&mut self, f: &[f64], warm: &[Contact]) -> Result<VISolution> {
        if warm.len() != self.constraints.len() {
            return Err(Error::validation("warm start length differs from the constraint count"));
        }
        self.solve_from(f, Some(warm))
    }

    fn solve_from(&mut self, f: &[f64], warm: Option<&[Contact]>) -> Result<VISolution> {
        let b = checked_rhs(self.op, f)?;
        let u0 = self.op.solve(&b)?;
        let n = self.constraints.len();
        let c = &self.constraints;
        let mut state: Vec<Contact> = match warm {
            Some(w) => w.to_vec(),
            None => (0..n)
                .map(|i| {
                    let v = u0[c.dof(i)];
                    if c.lower[i] == c.upper[i] || v > c.upper[i] {
                        Contact::Upper
                    } else if v < c.lower[i] {
                        Contact::Lower
                    } else {
                        Contact::Free
                    }
                })
                .collect(),
        };
        for i in 0..n {
            if c.lower[i] == c.upper[i] && state[i] == Contact::Free {
                state[i] = Contact::Upper;
            }
        }

        let mut seen: HashSet<Vec<Contact>> = HashSet::new();
        let mut iterations = 0;
        let mut last_residual;
        loop {
            iterations += 1;
            let (u, lam) = self.solve_active(&b, &u0, &state)?;
            let next = self.classify(&u, &lam);
            if next == state {
                return self.finish(&b, u, state, iterations, SolveMethod::PrimalDual);
            }
            last_residual = self.violation(&u, &lam);
            if iterations >= self.settings.max_iter || !seen.insert(state.clone()) {
                break;
            }
            state = next;
        }
        self.primal_active_set(&b, &u0, iterations).map_err(|e| match e {
            Error::IterationLimit { iterations, residual } => Error::IterationLimit {
                iterations,
                residual: residual.min(last_residual),
            },
            other => other,
        })
    }

    fn bound(&self, i: usize, s: Contact) -> f64 {
        match s {
            Contact::Lower => self.constraints.lower[i],
            _ => self.constraints.upper[i],
        }
    }

    /// Semismooth Newton update of the contact state.
    fn classify(&self, u: &[f64], lam: &[f64]) -> Vec<Contact> {
        let c = &self.constraints;
        (0..c.len())
            .map(|i| {
                let v = u[c.dof(i)];
                if c.lower[i] == c.upper[i] {
                    return if lam[i] >= 0.0 { Contact::Upper } else { Contact::Lower };
                }
                if lam[i] + self.diag[i] * (v - c.upper[i]) > 0.0 {
                    Contact::Upper
                } else if lam[i] + self.diag[i] * (v - c.lower[i]) < 0.0 {
                    Contact::Lower
                } else {
                    Contact::Free
                }
            })
            .collect()
    }

    /// Largest bound violation or wrong-sign multiplier of an iterate.
    fn violation(&self, u: &[f64], lam: &[f64]) -> f64 {
        let c = &self.constraints;
        (0..c.len())
            .map(|i| {
                let v = u[c.dof(i)];
                let primal = (c.lower[i] - v).max(v - c.upper[i]);
                let dual = if v >= c.upper[i] { -lam[i] } else { lam[i] };
                primal.max(if lam[i] != 0.0 { dual } else { 0.0 }).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    fn column(&mut self, i: usize) -> &[f64] {
        let dof = self.constraints.dof(i);
        let chol = self.chol;
        let n = self.op.mesh.n_dofs();
        self.columns.entry(i).or_insert_with(|| {
            let mut e = vec![0.0; n];
            e[dof] = 1.0;
            chol.solve_in_place(&mut e);
            e
        })
    }

    /// Minimizer with active values fixed to their bounds, and the multipliers
    /// `λ = f − Ku` on the active set.
    fn solve_active(&mut self, b: &[f64], u0: &[f64], state: &[Contact]) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.constraints.len();
        let active: Vec<usize> = (0..n).filter(|&i| state[i] != Contact::Free).collect();
        let mut lam = vec![0.0; n];
        if active.is_empty() {
            return Ok((u0.to_vec(), lam));
        }
        if active.len() > SCHUR_LIMIT {
            return self.solve_eliminated(b, &active, state);
        }
        for &i in &active {
            self.column(i);
        }
        let k = active.len();
        let dofs: Vec<usize> = active.iter().map(|&i| self.constraints.dof(i)).collect();
        let s = DMatrix::from_fn(k, k, |r, q| self.columns[&active[q]][dofs[r]]);
        let rhs = DVector::from_fn(k, |r, _| u0[dofs[r]] - self.bound(active[r], state[active[r]]));
        let mu = match s.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => s
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::Singular("active-set Schur complement".into()))?,
        };
        let mut u = u0.to_vec();
        for (r, &i) in active.iter().enumerate() {
            let col = &self.columns[&i];
            let m = mu[r];
            for (x, cv) in u.iter_mut().zip(col) {
                *x -= m * cv;
            }
            lam[i] = m;
        }
        for (r, &i) in active.iter().enumerate() {
            u[dofs[r]] = self.bound(i, state[i]);
        }
        Ok((u, lam))
    }

    fn solve_eliminated(&self, b: &[f64], active: &[usize], state: &[Contact]) -> Result<(Vec<f64>, Vec<f64>)> {
        let mesh = &self.op.mesh;
        let mut fixed = mesh.pinned_mask();
        let mut ub = vec![0.0; mesh.n_dofs()];
        for &i in active {
            let d = self.constraints.dof(i);
            fixed[d] = true;
            ub[d] = self.bound(i, state[i]);
        }
        let kb = self.op.apply(&ub);
        let rhs: Vec<f64> = (0..b.len()).map(|g| if fixed[g] { ub[g] } else { b[g] - kb[g] }).collect();
        let u = self.op.matrix.with_identity_rows(&fixed).cholesky()?.solve(&rhs);
        let ku = self.op.apply(&u);
        let mut lam = vec![0.0; self.constraints.len()];
        for &i in active {
            let d = self.constraints.dof(i);
            lam[i] = b[d] - ku[d];
        }
        Ok((u, lam))
    }

    /// Bound-constrained primal active-set method started from `u = 0`.
    fn primal_active_set(&mut self, b: &[f64], u0: &[f64], done: usize) -> Result<VISolution> {
        let n = self.constraints.len();
        let mut state: Vec<Contact> = (0..n)
            .map(|i| {
                if self.constraints.lower[i] == self.constraints.upper[i] {
                    Contact::Upper
                } else {
                    Contact::Free
                }
            })
            .collect();
        let mut u = vec![0.0; b.len()];
        let limit = 4 * n + self.settings.max_iter;
        for it in 1..=limit {
            let (p, lam) = self.solve_active(b, u0, &state)?;
            let c = &self.constraints;
            let mut step = 1.0;
            let mut block: Option<(usize, Contact)> = None;
            for i in 0..n {
                if state[i] != Contact::Free {
                    continue;
                }
                let d = c.dof(i);
                let (ui, pi) = (u[d], p[d]);
                if pi > c.upper[i] && pi > ui {
                    let t = (c.upper[i] - ui) / (pi - ui);
                    if t < step {
                        step = t;
                        block = Some((i, Contact::Upper));
                    }
                } else if pi < c.lower[i] && pi < ui {
                    let t = (c.lower[i] - ui) / (pi - ui);
                    if t < step {
                        step = t;
                        block = Some((i, Contact::Lower));
                    }
                }
            }
            match block {
                Some((j, s)) => {
                    let step = step.max(0.0);
                    for (x, y) in u.iter_mut().zip(&p) {
                        *x += step * (y - *x);
                    }
                    u[c.dof(j)] = self.bound(j, s);
                    state[j] = s;
                }
                None => {
                    u = p;
                    let mut worst: Option<(usize, f64)> = None;
                    for i in 0..n {
                        if c.lower[i] == c.upper[i] {
                            continue;
                        }
                        let bad = match state[i] {
                            Contact::Upper => -lam[i],
                            Contact::Lower => lam[i],
                            Contact::Free => 0.0,
                        };
                        if bad > 0.0 && worst.map_or(true, |(_, w)| bad > w) {
                            worst = Some((i, bad));
                        }
                    }
                    match worst {
                        Some((i, _)) => state[i] = Contact::Free,
                        None => {
                            for i in 0..n {
                                if c.lower[i] == c.upper[i] {
                                    state[i] = if lam[i] >= 0.0 { Contact::Upper } else { Contact::Lower };
                                }
                            }
                            return self.finish(b, u, state, done + it, SolveMethod::PrimalActiveSet);
                        }
                    }
                }
            }
        }
        let (p, lam) = self.solve_active(b, u0, &state)?;
        Err(Error::IterationLimit {
            iterations: done + limit,
            residual: self.violation(&p, &lam),
        })
    }

    fn finish(
        &self,
        b: &[f64],
        mut u: Vec<f64>,
        state: Vec<Contact>,
        iterations: usize,
        method: SolveMethod,
    ) -> Result<VISolution> {
        let c = &self.constraints;
        for i in 0..c.len() {
            let d = c.dof(i);
            u[d] = match state[i] {
                Contact::Free => u[d].clamp(c.lower[i], c.upper[i]),
                s => self.bound(i, s),
            };
        }
        let ku = self.op.apply(&u);
        let multipliers: Vec<f64> = (0..c.len())
            .map(|i| match state[i] {
                Contact::Free => 0.0,
                _ => b[c.dof(i)] - ku[c.dof(i)],
            })
            .collect();
        let kkt = KktReport::compute(self.op, b, &u, c, &state, &multipliers);
        let kkt_residual = kkt.max();
        if kkt_residual > self.settings.tol {
            return Err(Error::IterationLimit {
                iterations,
                residual: kkt_residual,
            });
        }
        let energy = 0.5 * ku.iter().zip(&u).map(|(a, x)| a * x).sum::<f64>()
            - b.iter().zip(&u).map(|(a, x)| a * x).sum::<f64>();
        let pick = |want: Contact| -> Vec<usize> {
            (0..c.len()).filter(|&i| state[i] == want).map(|i| c.nodes[i]).collect()
        };
        Ok(VISolution {
            field: DofField::from_dofs(&self.op.mesh, u)?,
            lower_contact: pick(Contact::Lower),
            upper_contact: pick(Contact::Upper),
            constraints: c.clone(),
            states: state,
            multipliers,
            kkt,
            kkt_residual,
            iterations,
            method,
            energy,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble_bilinear, Density, Mesh};
    use crate::params::{MaterialParams, Point};

    fn setup() -> (Operator, Vec<f64>) {
        let p = MaterialParams::new(0.2, 0.1).unwrap();
        let m = Mesh::new(12, 4, &p).unwrap();
        let op = assemble_bilinear(&m, &p, None).unwrap();
        let load = LoadSpec::from_density(Density::from_fn(&m, |q| 1.0 + q.y * 3.0 + (2.0 * q.x).sin()));
        let f = assemble_load(&m, &load, None).unwrap();
        (op, f)
    }

    fn peak(op: &Operator, f: &[f64]) -> f64 {
        solve_linear(op, f).unwrap().max_abs_nodal()
    }

    #[test]
    fn zero_load_gives_zero_field() {
        let (op, f) = setup();
        let c = BoxConstraints::full_plate(&op.mesh, |_| -1.0, |_| 1.0).unwrap();
        let s = solve_obstacle(&op, &vec![0.0; f.len()], &c, &SolverSettings::default()).unwrap();
        assert!(s.field.max_abs_dof() == 0.0 && s.contact_free());
        assert!(s.multipliers.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn far_obstacles_reproduce_linear_solution() {
        let (op, f) = setup();
        let lin = solve_linear(&op, &f).unwrap();
        let g = 2.0 * lin.max_abs_nodal();
        let c = BoxConstraints::full_plate(&op.mesh, |_| -g, |_| g).unwrap();
        let s = solve_obstacle(&op, &f, &c, &SolverSettings::default()).unwrap();
        assert!(s.contact_free());
        assert_eq!(s.field, lin);
    }

    #[test]
    fn contact_multipliers_have_the_right_sign() {
        let (op, f) = setup();
        let g = 0.4 * peak(&op, &f);
        let c = BoxConstraints::full_plate(&op.mesh, |_| -g, |_| g).unwrap();
        let s = solve_obstacle(&op, &f, &c, &SolverSettings::default()).unwrap();
        assert!(!s.upper_contact.is_empty());
        assert!(s.kkt_residual <= 1e-9, "{:?}", s.kkt);
        for (i, st) in s.states.iter().enumerate() {
            match st {
                Contact::Upper => assert!(s.multipliers[i] >= 0.0),
                Contact::Lower => assert!(s.multipliers[i] <= 0.0),
                Contact::Free => assert_eq!(s.multipliers[i], 0.0),
            }
            let v = s.field.node_value(c.nodes[i]);
            assert!(v <= g && v >= -g);
        }
    }

    #[test]
    fn negated_load_negates_solution() {
        let (op, f) = setup();
        let g = 0.3 * peak(&op, &f);
        let c = BoxConstraints::full_plate(&op.mesh, |_| -g, |_| g).unwrap();
        let a = solve_obstacle(&op, &f, &c, &SolverSettings::default()).unwrap();
        let nf: Vec<f64> = f.iter().map(|v| -v).collect();
        let b = solve_obstacle(&op, &nf, &c, &SolverSettings::default()).unwrap();
        let d = a.field.axpy(1.0, &b.field).max_abs_dof();
        assert!(d <= 1e-12 * a.field.max_abs_dof(), "{d}");
        assert_eq!(a.upper_contact, b.lower_contact);
    }

    #[test]
    fn warm_starts_agree() {
        let (op, f) = setup();
        let g = 0.5 * peak(&op, &f);
        let c = BoxConstraints::long_edges(&op.mesh, |_| -g, |p| if p.x < 1.0 { 0.0 } else { g }).unwrap();
        let mut solver = ObstacleSolver::new(&op, c.clone(), SolverSettings::default()).unwrap();
        let cold = solver.solve(&f).unwrap();
        let all_up = vec![Contact::Upper; c.len()];
        let all_low = vec![Contact::Lower; c.len()];
        for warm in [all_up, all_low] {
            let s = solver.solve_warm(&f, &warm).unwrap();
            let d = s.field.axpy(-1.0, &cold.field).max_abs_nodal();
            assert!(d <= 1e-8 * cold.field.max_abs_nodal());
        }
    }

    #[test]
    fn degenerate_box_pins_the_value() {
        let (op, f) = setup();
        let m = op.mesh;
        let pinned = m.node(6, 2);
        let c = BoxConstraints::on_nodes(&m, [pinned, m.node(3, 1)], |_| 0.0, |p| if p.x > 1.5 { 0.0 } else { 1.0 }).unwrap();
        let s = solve_obstacle(&op, &f, &c, &SolverSettings::default()).unwrap();
        assert_eq!(s.field.node_value(pinned), 0.0);
        assert!(s.kkt_residual <= 1e-9);
    }

    #[test]
    fn primal_fallback_agrees_with_primal_dual() {
        let (op, f) = setup();
        let g = 0.3 * peak(&op, &f);
        let c = BoxConstraints::full_plate(&op.mesh, |_| -g, |p| g * (1.0 + p.x)).unwrap();
        let pd = solve_obstacle(&op, &f, &c, &SolverSettings::default()).unwrap();
        let fb = solve_obstacle(&op, &f, &c, &SolverSettings { tol: 1e-9, max_iter: 1 }).unwrap();
        assert_eq!(pd.method, SolveMethod::PrimalDual);
        assert_eq!(fb.method, SolveMethod::PrimalActiveSet);
        let d = pd.field.axpy(-1.0, &fb.field).max_abs_nodal();
        assert!(d <= 1e-9 * pd.field.max_abs_nodal(), "{d}");
        assert_eq!(pd.upper_contact, fb.upper_contact);
    }

    #[test]
    fn elimination_matches_schur_complement() {
        let (op, f) = setup();
        let c = BoxConstraints::full_plate(&op.mesh, |_| -0.01, |_| 0.01).unwrap();
        let mut solver = ObstacleSolver::new(&op, c.clone(), SolverSettings::default()).unwrap();
        let b = checked_rhs(&op, &f).unwrap();
        let u0 = op.solve(&b).unwrap();
        let state: Vec<Contact> = (0..c.len())
            .map(|i| [Contact::Free, Contact::Upper, Contact::Lower][i % 3])
            .collect();
        let active: Vec<usize> = (0..c.len()).filter(|&i| state[i] != Contact::Free).collect();
        let (u1, l1) = solver.solve_active(&b, &u0, &state).unwrap();
        let (u2, l2) = solver.solve_eliminated(&b, &active, &state).unwrap();
        let scale = u1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let lscale = l1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in u1.iter().zip(&u2) {
            assert!((x - y).abs() <= 1e-9 * scale);
        }
        for (x, y) in l1.iter().zip(&l2) {
            assert!((x - y).abs() <= 1e-7 * lscale);
        }
    }

    #[test]
    fn density_weighting_requires_density() {
        let (op, _) = setup();
        let mask = ReinforcementMask::neutral(&op.mesh);
        let load = LoadSpec::dirac(Point::new(1.0, 0.0), 1.0);
        let r = solve_densityweighted(&op, &load, &mask, &BoxConstraints::none(), &SolverSettings::default());
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn infeasible_box_is_rejected() {
        let (op, f) = setup();
        let c = BoxConstraints {
            nodes: vec![op.mesh.node(2, 2)],
            lower: vec![0.1],
            upper: vec![-0.1],
        };
        assert!(matches!(
            solve_obstacle(&op, &f, &c, &SolverSettings::default()),
            Err(Error::Validation(_))
        ));
    }
}
