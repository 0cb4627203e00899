//! Spatial branch-and-bound for problems with minimum distance constraints
//! `‖y − z‖ ≥ δ` over box domains.

pub mod engine;
pub mod error;
pub mod geometry;
pub mod instances;
pub mod oracle;
pub mod pair_mindc;
pub mod single_mindc;
pub mod symmetry;
pub mod tolerances;

pub use engine::{solve, Instance, Settings, SolveResult, SolveStatus};
pub use error::{Error, Infeasible, Result};
pub use geometry::{Ball, BoxDomain, BoxEdge, Interval, LinearCut, SphereIntersection};
pub use instances::{ProblemKind, ProblemSpec, SymmetryFlags};
pub use pair_mindc::{CandidateSlab, MinDCPair, Side};
pub use single_mindc::{BoundChange, BoundKind, BoundSide, Delta, DeltaVector, MinDC};
pub use symmetry::{AlphaStar, PointMatrixLayout, RotationCutSpec};
