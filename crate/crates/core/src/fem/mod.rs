//! Conforming discretization of the plate energy with Bogner–Fox–Schmit
//! rectangles.
//!
//! Each node carries `(u, u_x, u_y, u_xy)`. The short edges `x ∈ {0, π}`
//! pin `u` and `u_y`; the long edges are left free, so the free-edge
//! conditions arise from the weak form alone.

mod assemble;
mod banded;
mod dd;
mod energy;
mod field;
mod hermite;
mod load;
mod mask;
mod mesh;
mod symmetry;

pub use assemble::{assemble_bilinear, element_stiffness, Operator};
pub use banded::{BandedCholesky, BandedSym};
pub use energy::{energy_value, EnergyVariant};
pub use field::{DofField, FieldEval};
pub use hermite::{element_basis, hermite_1d, BasisEval, Hermite1d};
pub use load::{assemble_load, Density, LoadNorm, LoadSpec, PointMass};
pub use mask::{ElementMask, ReinforcementMask};
pub use mesh::{Mesh, DOFS_PER_NODE, DX, DXY, DY, VALUE};
pub use symmetry::{mirror_x, mirror_y, symmetry_decompose};
