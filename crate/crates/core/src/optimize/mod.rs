//! Worst-force and best-design scans built on the obstacle solver.
//!
//! Every search is an exhaustive scan over a finite candidate list. Candidates
//! are evaluated in parallel, but reductions walk the list in order and keep
//! the first strict improvement, so results do not depend on scheduling.

mod bounds;
mod forces;
mod gap;
mod obstacles;
mod regime;
mod reinforce;
mod scan;

pub use bounds::{placement_bound_report, PlacementBounds};
pub use forces::{Force, ForceClass};
pub use gap::{gap_profile, GapProfile};
pub use obstacles::{best_obstacle, discrete_holder_norm, ObstacleFamily, ObstacleOutcome, ObstacleRegion};
pub use regime::{classify_regime, Regime, RegimeReport};
pub use reinforce::{
    best_reinforcement, cross_mu_for_area, screen_reinforcement, CandidateParams, CandidateReport, ReinforcementFamily,
    ReinforcementOutcome,
};
pub use scan::{threshold_scan, worst_force_amplitude, worst_gap_force, ScanOutcome, Variant};
