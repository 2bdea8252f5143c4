//! Radial finite-volume discretisation of the coupled system on a ball and
//! the Nehari-constrained minimization of its energy.
//!
//! Ground states are sought among radial profiles; the continuous theory
//! guarantees existence on balls but not radial symmetry of every minimizer.

mod diagnostics;
mod functional;
mod grid;
mod newton;
mod profile;
mod solve;

pub use diagnostics::{
    eigenfunction_obstruction, fiber_max, mountain_pass_upper_bound, pohozaev_report, MountainPassBound,
    PohozaevReport,
};
pub use functional::{evaluate, gradient_jplus, nehari_project, Convention, FunctionalReport, Norms};
pub use grid::{lambda1, Eigenpair, RadialBall, RadialPair, LAMBDA1_MAX_ITER, LAMBDA1_TOL, MIN_NODES};
pub use profile::{profile_csv, write_profile};
pub use solve::{ground_state_solve, nehari_seed, SolveOptions, SolveReport};
