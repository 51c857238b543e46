//! Discrete two-sided obstacle problems as box-constrained quadratic programs.
//!
//! Only nodal values are constrained. The solver is a primal-dual active-set
//! iteration on a Schur complement of the factored stiffness, with a primal
//! active-set method as a fallback when the iteration cycles.

mod constraints;
mod kkt;
mod solver;

pub use constraints::BoxConstraints;
pub use kkt::{kkt_report, KktReport};
pub use solver::{
    solve_densityweighted, solve_linear, solve_obstacle, solve_reinforced, Contact, ObstacleSolver, SolveMethod,
    SolverSettings, VISolution, VISummary,
};
