//! The integer coordinate lattice of the base graphs and its symmetries.
//!
//! Vertices of the base graphs `⊕ⁿHᵐ` have coordinates
//! `(a + b*sqrt33 + i*c*sqrt3 + i*d*sqrt11) / (4*3^h)` with integer
//! `a,b,c,d`. On such coordinates the order-24 symmetry group is generated
//! by the identity `τ₀`, rotations `τ₁`/`τ₂` by `±2π/3`, reflections `τ₃`
//! (vertical axis) and `τ₄` (horizontal axis), and the `sqrt(33)`
//! conjugation `τ₅`. The group is `D₆ × C₂`: the τ₅ factor is not a plane
//! isometry but fixes all rational distances, so it acts on strict
//! unit-distance graphs.
//!
//! Printed sources of the `τ₁`/`τ₂` matrices disagree with the requirement
//! that `τ₁` be the rotation by `2π/3` (their printed form is not an
//! isometry of the stated coordinates and does not cube to the identity);
//! the matrices here are derived from the rotation itself and satisfy
//! `τ₁³ = τ₀`, `τ₁² = τ₂`, and exact distance preservation.

mod auts;
mod coord;
mod orbits;
mod table;

pub use auts::{canonicalize_subsets, geometric_auts, PermGroup};
pub use coord::{BaseCoord, CoordError};
pub use orbits::{
    base_graph_vertices, enumerate_disk_orbits, group_apply, orbit_decompose, orbit_of, tau_apply,
    Orbit,
};
pub use table::{orbit_table, OrbitRow, OrbitTable};
