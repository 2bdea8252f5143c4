//! Numerics for the critical Hénon-type coupled system
//! `-Δu = λu + u^(2*-2) v`, `-Δv = μ v^(2*-1) + u^(2*-1)` on balls of ℝ^N.
//!
//! * [`limit_algebra`]: closed-form Nehari levels of the limit problem on ℝ^N.
//! * [`instanton`]: Aubin-Talenti profiles, their energies and cutoffs.
//! * [`nehari_solver`]: radial finite-volume discretisation on the ball and
//!   a constrained descent for ground states.

pub mod dimension;
pub mod error;
pub mod instanton;
pub mod limit_algebra;
pub mod nehari_solver;
pub mod quadrature;
pub mod roots;

pub use dimension::{Dimension, Rational};
pub use error::{Error, Result};
