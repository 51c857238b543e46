//! Numerical laboratory for obstacle problems on partially hinged rectangular
//! plates `(0, π) × (−l, l)`.
//!
//! The crate is split along the computational pipeline:
//!
//! * [`series`] evaluates the closed-form Fourier objects (Green function,
//!   antisymmetric delta responses, the uniform-load profile and the analytic
//!   thresholds and bounds built on them).
//! * [`fem`] discretizes the plate energy with C¹ Bogner–Fox–Schmit
//!   rectangles; free-edge conditions are natural and never imposed.
//! * [`vi`] solves the discrete two-sided obstacle problems as box-constrained
//!   quadratic programs and certifies the result with a KKT report.
//! * [`optimize`] runs the worst-force / best-design scans on top of the
//!   solver.

pub mod error;
pub mod fem;
pub mod io;
pub mod obstacle;
pub mod optimize;
pub mod params;
pub mod quadrature;
pub mod series;
pub mod sum;
pub mod vi;

pub use error::{Error, Result};
pub use params::{MaterialParams, Point};
