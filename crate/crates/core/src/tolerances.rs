//! Numerical tolerances shared by all reductions.

/// Tangency and degeneracy threshold for geometric predicates. Open-ball
/// membership is `‖x − p‖² < r² − EPS_GEOM`, so boundary points are never
/// treated as inside.
pub const EPS_GEOM: f64 = 1e-9;

/// Bound changes smaller than this are discarded.
pub const EPS_BOUND: f64 = 1e-7;

/// An entry is "fixed to zero" when its interval lies in `[-EPS_FIX, EPS_FIX]`.
pub const EPS_FIX: f64 = 1e-9;

/// Minimum violation for emitting a rotation cut.
pub const EPS_CUT: f64 = 1e-6;

/// Constraint tolerance for accepting an incumbent.
pub const FEAS_TOL: f64 = 1e-6;

/// Branching stops once every candidate interval is narrower than this.
pub const MIN_BRANCH_WIDTH: f64 = 1e-6;
