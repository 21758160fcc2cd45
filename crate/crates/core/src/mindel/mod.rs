//! Polynomial-time minimum item deletion for three agents.
//!
//! The solver repeatedly finds a minimal obstruction of the residual profile
//! and branches over a constant-size family of ways to break it, reusing the
//! results of calls whose partial solutions are strongly equivalent.

pub mod branching;
pub mod pattern;
pub mod solver;

pub use branching::{
    branching_set, dominates, interchangeable, CandidateOrder, BRANCHING_SET_CEILING,
};
pub use pattern::{
    deficiency, deficiency_pattern, strongly_equivalent, DeficiencyPattern, DeficiencyTriple,
};
pub use solver::{
    lift_prefix, solve3, solve3_with, MinDel, SolverOptions, SolverStats, ThreeAgentOutcome,
};
