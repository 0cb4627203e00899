//! Best-first interval branch-and-bound maximizing one variable.

mod instance;
mod propagate;
mod search;
mod settings;

pub use instance::{BallContainment, Instance, LexFlags, RadiusExpr, SphereMembership, VarLink};
pub use propagate::{
    propagate_ball_containment, propagate_linear_cut, propagate_node, propagate_quadratic_fbbt,
    propagate_sphere_membership, PropagationStatus, Propagator, MAX_ROUNDS,
};
pub use search::{
    branch, branch_candidates, incumbent_try, select_branch_var, solve, solve_with_observer,
    LocalCuts, PruneReason, SearchEvent, SearchNode,
};
pub use settings::{relative_gap, Counters, Settings, SolveResult, SolveStatus, STANDARD_SETTINGS};
