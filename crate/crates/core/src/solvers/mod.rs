//! Numerical engines shared by the bound modules: an exact simplex method
//! for linear programs and a dense interior-point method for SDPs.

pub mod ipm;
pub mod scalar;
pub mod simplex;

pub use ipm::{ipm_solve, ipm_solve_with, IpmOptions};
pub use scalar::Scalar;
pub use simplex::{simplex_solve, Constraint, LpOutcome, LpProblem, LpSolution, Relation, Sense};
