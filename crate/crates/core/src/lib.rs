//! Construction and minimization of strict unit-distance graphs in the plane.
//!
//! The crate is organised around a handful of layers:
//!
//! * [`exact`] — exact arithmetic over rational combinations of square roots
//!   (`q0 + q1*sqrt(n1) + ...`), and plane points with such coordinates.
//!   Every vertex coordinate in the crate lives here; no floating point is
//!   ever trusted for a geometric predicate.
//! * [`graph`] — strict unit-distance graphs: point-set primitives, Minkowski
//!   sums, rotation sets, a small expression language for the named
//!   constructions (`H`, `V25`, `V49`, ...), trimming, and type-M assembly.
//! * [`symmetry`] — the integer coordinate lattice `(a,b,c,d)/(4*3^h)`, its
//!   order-24 transform group, base orbits, disk-orbit enumeration and
//!   geometric automorphisms of concrete graphs.
//! * [`sat`] — CNF encodings of k-coloring, symmetry breaking, equal-color
//!   implication chains, common/variable formula splitting, DIMACS i/o and a
//!   solve backend (embedded CDCL solver or an external executable).
//! * [`checker`] — the coloring predicates built on top of `sat`:
//!   k-colorability, chromatic number, mono-pairs, non-mono-sets, spindles
//!   and the key-property check used by the minimizer.
//! * [`minimize`] — the two-phase expand/reduce minimization engine: reserve
//!   construction, critical-set hypergraphs, 8-4-2-1 batching, candidate
//!   enumeration through maximal independent sets, rough reduction and the
//!   outer iteration loop.
//! * [`oracle`] — small brute-force reference implementations (exhaustive
//!   edge scans, exhaustive colorings, exhaustive subgraph search) used by
//!   the test suites as independent ground truth. They share no code with
//!   the fast paths they check.

pub mod checker;
pub mod exact;
pub mod graph;
pub mod minimize;
pub mod oracle;
pub mod sat;
pub mod symmetry;

pub use exact::{ExactPoint, ExactReal, Rotor};
pub use graph::{GraphExpr, UnitGraph};
pub use symmetry::{BaseCoord, Orbit, PermGroup};
