//! Exact arithmetic over rational combinations of square roots.
//!
//! Numbers are finite sums `Σ q_n * sqrt(n)` with squarefree positive `n`
//! and nonzero rational `q_n` (the key `n = 1` holds the rational part).
//! This is enough for everything the constructions produce: the wheel and
//! its rotations live in `Q(sqrt3, sqrt11)`, and the `rho` rotation drags in
//! `sqrt5 / sqrt15 / sqrt55 / sqrt165`.
//!
//! Because `{sqrt(n) : n squarefree}` is linearly independent over `Q`, the
//! representation is canonical: two values are equal iff their term maps are
//! identical. Signs of nonzero values are decided by interval evaluation at
//! increasing precision; exact zero is decided symbolically first, so the
//! loop always terminates.

mod parse;
mod point;
mod real;

pub use parse::ParseExactError;
pub use point::{ExactPoint, Rotor, RotorName};
pub use real::{ExactReal, Rational};
