//! Builders for sphere packing and kissing configurations, and the JSON
//! instance format.
//!
//! All builders place `n` points of dimension `dim` in variables
//! `0..n·dim` (row-major), the radius `r` in `n·dim` and `δ = 2r` in
//! `n·dim + 1`. The objective is to maximize `r`.

mod io;

pub use io::{from_json_str, load_instance, save_instance, to_json_string, FORMAT_VERSION};

use serde::{Deserialize, Serialize};

use crate::engine::{BallContainment, Instance, LexFlags, RadiusExpr, SphereMembership, VarLink};
use crate::geometry::{BoxDomain, Interval, LinearCut};
use crate::single_mindc::{Delta, MinDC};
use crate::symmetry::PointMatrixLayout;

/// Band used to turn `‖x‖ = R` into two inequalities.
pub const SPHERE_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    PackInSphere,
    PackInBox,
    Kissing,
}

impl ProblemKind {
    pub fn slug(&self) -> &'static str {
        match self {
            ProblemKind::PackInSphere => "pack-sphere",
            ProblemKind::PackInBox => "pack-box",
            ProblemKind::Kissing => "kissing",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        [
            ProblemKind::PackInSphere,
            ProblemKind::PackInBox,
            ProblemKind::Kissing,
        ]
        .into_iter()
        .find(|k| k.slug() == s)
    }
}

/// Which symmetry handling the instance declares valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryFlags {
    pub lex_rows: bool,
    pub lex_cols: bool,
    /// Restrict the first point to the nonnegative orthant.
    pub reflect: bool,
}

impl Default for SymmetryFlags {
    fn default() -> Self {
        SymmetryFlags {
            lex_rows: true,
            lex_cols: false,
            reflect: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub n: usize,
    pub dim: usize,
    pub flags: SymmetryFlags,
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind, n: usize, dim: usize) -> Self {
        let flags = match kind {
            ProblemKind::PackInBox => SymmetryFlags {
                lex_cols: true,
                ..SymmetryFlags::default()
            },
            _ => SymmetryFlags::default(),
        };
        ProblemSpec {
            kind,
            n,
            dim,
            flags,
        }
    }

    pub fn name(&self) -> String {
        format!("{}-n{}-d{}", self.kind.slug(), self.n, self.dim)
    }

    pub fn build(&self) -> Instance {
        match self.kind {
            ProblemKind::PackInSphere => build_pack_in_sphere(self.n, self.dim, self.flags),
            ProblemKind::PackInBox => build_pack_in_box(self.n, self.dim, self.flags),
            ProblemKind::Kissing => build_kissing(self.n, self.dim, self.flags),
        }
    }
}

struct Skeleton {
    n: usize,
    dim: usize,
}

impl Skeleton {
    fn r(&self) -> usize {
        self.n * self.dim
    }

    fn delta(&self) -> usize {
        self.n * self.dim + 1
    }

    fn row(&self, i: usize) -> Vec<usize> {
        (i * self.dim..(i + 1) * self.dim).collect()
    }

    fn base(&self, name: String, coord: Interval, r_max: f64, lex: LexFlags) -> Instance {
        let mut iv = vec![coord; self.n * self.dim];
        iv.push(Interval::new(0.0, r_max));
        iv.push(Interval::new(0.0, 2.0 * r_max));
        let mut mindcs = Vec::new();
        for i in 0..self.n {
            for k in i + 1..self.n {
                mindcs.push(MinDC::new(
                    self.row(i),
                    self.row(k),
                    Delta::Variable(self.delta()),
                ));
            }
        }
        Instance {
            name,
            num_vars: self.n * self.dim + 2,
            var_bounds: BoxDomain::new(iv),
            objective_var: self.r(),
            mindcs,
            ball_containments: vec![],
            sphere_memberships: vec![],
            links: vec![VarLink {
                var: self.delta(),
                source: self.r(),
                scale: 2.0,
            }],
            lex,
            layout: Some(PointMatrixLayout::contiguous(self.n, self.dim, 0)),
            static_cuts: vec![],
        }
    }

    fn reflect(&self, inst: &mut Instance) {
        for v in self.row(0) {
            let iv = inst.var_bounds.get(v);
            inst.var_bounds.set(v, Interval::new(iv.lo.max(0.0), iv.hi));
        }
    }
}

/// `n` spheres of radius `r` inside the unit sphere: `‖X^i‖ ≤ 1 − r`,
/// `‖X^i − X^k‖ ≥ 2r`.
pub fn build_pack_in_sphere(n: usize, dim: usize, flags: SymmetryFlags) -> Instance {
    assert!(n >= 2 && dim >= 1);
    let sk = Skeleton { n, dim };
    let lex = LexFlags {
        rows: flags.lex_rows,
        cols: flags.lex_cols,
        rot: true,
    };
    let name = ProblemSpec::new(ProblemKind::PackInSphere, n, dim).name();
    let mut inst = sk.base(name, Interval::new(-1.0, 1.0), 1.0, lex);
    inst.ball_containments = (0..n)
        .map(|i| BallContainment {
            point: sk.row(i),
            center: vec![0.0; dim],
            radius: RadiusExpr::Affine {
                var: sk.r(),
                scale: -1.0,
                offset: 1.0,
            },
        })
        .collect();
    if flags.reflect {
        sk.reflect(&mut inst);
    }
    inst
}

/// `n` points on the sphere of radius 2 with pairwise distance `≥ 2r`.
/// For `r = 1` this is the kissing configuration of unit spheres.
pub fn build_kissing(n: usize, dim: usize, flags: SymmetryFlags) -> Instance {
    assert!(n >= 2 && dim >= 1);
    let sk = Skeleton { n, dim };
    let lex = LexFlags {
        rows: flags.lex_rows,
        cols: flags.lex_cols,
        rot: true,
    };
    let name = ProblemSpec::new(ProblemKind::Kissing, n, dim).name();
    let mut inst = sk.base(name, Interval::new(-2.0, 2.0), 2.0, lex);
    inst.sphere_memberships = (0..n)
        .map(|i| SphereMembership {
            point: sk.row(i),
            center: vec![0.0; dim],
            radius: 2.0,
            band: SPHERE_BAND,
        })
        .collect();
    if flags.reflect {
        sk.reflect(&mut inst);
    }
    inst
}

/// `n` spheres of radius `r` in the unit cube: `r ≤ X_{i,j} ≤ 1 − r`.
pub fn build_pack_in_box(n: usize, dim: usize, flags: SymmetryFlags) -> Instance {
    assert!(n >= 2 && dim >= 1);
    let sk = Skeleton { n, dim };
    let lex = LexFlags {
        rows: flags.lex_rows,
        cols: flags.lex_cols,
        rot: false,
    };
    let name = ProblemSpec::new(ProblemKind::PackInBox, n, dim).name();
    let mut inst = sk.base(name, Interval::new(0.0, 1.0), 0.5, lex);
    for v in 0..n * dim {
        inst.static_cuts
            .push(LinearCut::new(vec![(v, 1.0), (sk.r(), -1.0)], 0.0));
        inst.static_cuts
            .push(LinearCut::new(vec![(v, -1.0), (sk.r(), -1.0)], -1.0));
    }
    inst
}
