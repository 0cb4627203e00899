use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, LinearCut};
use crate::single_mindc::{Delta, MinDC};
use crate::symmetry::PointMatrixLayout;

/// Radius of a containment ball: a constant or `offset + scale·x[var]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusExpr {
    Constant(f64),
    Affine { var: usize, scale: f64, offset: f64 },
}

impl RadiusExpr {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            RadiusExpr::Constant(r) => r,
            RadiusExpr::Affine { var, scale, offset } => offset + scale * x[var],
        }
    }

    /// Largest radius over the current bounds.
    pub fn upper(&self, bounds: &BoxDomain) -> f64 {
        match *self {
            RadiusExpr::Constant(r) => r,
            RadiusExpr::Affine { var, scale, offset } => {
                let iv = bounds.get(var);
                offset
                    + if scale >= 0.0 {
                        scale * iv.hi
                    } else {
                        scale * iv.lo
                    }
            }
        }
    }
}

/// `‖x − center‖ ≤ radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallContainment {
    pub point: Vec<usize>,
    pub center: Vec<f64>,
    pub radius: RadiusExpr,
}

/// `radius − band ≤ ‖x − center‖ ≤ radius + band`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereMembership {
    pub point: Vec<usize>,
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default)]
    pub band: f64,
}

/// `x[var] = scale · x[source]`, used to express `δ = 2r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarLink {
    pub var: usize,
    pub source: usize,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LexFlags {
    #[serde(default)]
    pub rows: bool,
    #[serde(default)]
    pub cols: bool,
    /// Rotations in every coordinate plane map solutions to solutions.
    #[serde(default)]
    pub rot: bool,
}

/// Maximize `x[objective_var]` subject to the listed constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default)]
    pub name: String,
    pub num_vars: usize,
    #[serde(rename = "bounds")]
    pub var_bounds: BoxDomain,
    pub objective_var: usize,
    #[serde(default)]
    pub mindcs: Vec<MinDC>,
    #[serde(default, rename = "balls")]
    pub ball_containments: Vec<BallContainment>,
    #[serde(default, rename = "spheres")]
    pub sphere_memberships: Vec<SphereMembership>,
    #[serde(default)]
    pub links: Vec<VarLink>,
    #[serde(default)]
    pub lex: LexFlags,
    #[serde(default)]
    pub layout: Option<PointMatrixLayout>,
    #[serde(default, rename = "cuts")]
    pub static_cuts: Vec<LinearCut>,
}

impl Instance {
    /// Index ranges, dimensions and bound sanity. Errors name the offending
    /// field as a JSON-style path.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        let var_ok = |path: String, v: usize| {
            if v < n {
                Ok(())
            } else {
                Err(Error::schema(
                    path,
                    format!("variable index {v} out of range (num_vars = {n})"),
                ))
            }
        };
        if self.var_bounds.dim() != n {
            return Err(Error::schema(
                "bounds",
                format!("expected {n} intervals, found {}", self.var_bounds.dim()),
            ));
        }
        for (i, iv) in self.var_bounds.intervals().iter().enumerate() {
            if iv.lo.is_nan() || iv.hi.is_nan() || iv.lo > iv.hi {
                return Err(Error::schema(
                    format!("bounds[{i}]"),
                    "lower bound exceeds upper bound",
                ));
            }
        }
        var_ok("objective_var".into(), self.objective_var)?;
        for (k, c) in self.mindcs.iter().enumerate() {
            if c.y_vars.is_empty() || c.y_vars.len() != c.z_vars.len() {
                return Err(Error::schema(
                    format!("mindcs[{k}]"),
                    "y and z must have equal nonzero length",
                ));
            }
            for (i, &v) in c.y_vars.iter().enumerate() {
                var_ok(format!("mindcs[{k}].y[{i}]"), v)?;
            }
            for (i, &v) in c.z_vars.iter().enumerate() {
                var_ok(format!("mindcs[{k}].z[{i}]"), v)?;
            }
            if c.y_vars.iter().zip(&c.z_vars).any(|(a, b)| a == b) {
                return Err(Error::schema(
                    format!("mindcs[{k}]"),
                    "y and z share a variable at the same position",
                ));
            }
            match c.delta {
                Delta::Constant(d) if !(d >= 0.0) => {
                    return Err(Error::schema(
                        format!("mindcs[{k}].delta.const"),
                        "must be nonnegative",
                    ));
                }
                Delta::Variable(v) => var_ok(format!("mindcs[{k}].delta.var"), v)?,
                _ => {}
            }
        }
        for (k, b) in self.ball_containments.iter().enumerate() {
            if b.point.len() != b.center.len() {
                return Err(Error::schema(
                    format!("balls[{k}].center"),
                    "length differs from point",
                ));
            }
            for (i, &v) in b.point.iter().enumerate() {
                var_ok(format!("balls[{k}].point[{i}]"), v)?;
            }
            match b.radius {
                RadiusExpr::Constant(r) if !(r >= 0.0) => {
                    return Err(Error::schema(
                        format!("balls[{k}].radius.constant"),
                        "must be nonnegative",
                    ));
                }
                RadiusExpr::Affine { var, .. } => {
                    var_ok(format!("balls[{k}].radius.affine.var"), var)?
                }
                _ => {}
            }
        }
        for (k, s) in self.sphere_memberships.iter().enumerate() {
            if s.point.len() != s.center.len() {
                return Err(Error::schema(
                    format!("spheres[{k}].center"),
                    "length differs from point",
                ));
            }
            for (i, &v) in s.point.iter().enumerate() {
                var_ok(format!("spheres[{k}].point[{i}]"), v)?;
            }
            if !(s.radius >= 0.0) {
                return Err(Error::schema(
                    format!("spheres[{k}].radius"),
                    "must be nonnegative",
                ));
            }
            if !(s.band >= 0.0) {
                return Err(Error::schema(
                    format!("spheres[{k}].band"),
                    "must be nonnegative",
                ));
            }
        }
        for (k, l) in self.links.iter().enumerate() {
            var_ok(format!("links[{k}].var"), l.var)?;
            var_ok(format!("links[{k}].source"), l.source)?;
            if !l.scale.is_finite() || l.var == l.source {
                return Err(Error::schema(format!("links[{k}]"), "invalid link"));
            }
        }
        if let Some(layout) = &self.layout {
            if layout.vars.len() != layout.n * layout.dim {
                return Err(Error::schema("layout.vars", "expected n·dim entries"));
            }
            for (i, &v) in layout.vars.iter().enumerate() {
                var_ok(format!("layout.vars[{i}]"), v)?;
            }
            if !layout.is_injective() {
                return Err(Error::schema("layout.vars", "indices must be distinct"));
            }
        } else if self.lex.rows || self.lex.cols || self.lex.rot {
            return Err(Error::schema("lex", "symmetry handling requires a layout"));
        }
        for (k, c) in self.static_cuts.iter().enumerate() {
            for (i, &(v, a)) in c.coefs.iter().enumerate() {
                var_ok(format!("cuts[{k}].coefs[{i}]"), v)?;
                if !a.is_finite() {
                    return Err(Error::schema(
                        format!("cuts[{k}].coefs[{i}]"),
                        "coefficient must be finite",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Variables whose value follows from others through a link.
    pub fn is_linked(&self, v: usize) -> bool {
        self.links.iter().any(|l| l.var == v)
    }

    /// Largest constraint violation of `x` (0 when feasible), symmetry
    /// handling excluded.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (i, iv) in self.var_bounds.intervals().iter().enumerate() {
            worst = worst.max(iv.lo - x[i]).max(x[i] - iv.hi);
        }
        for c in &self.mindcs {
            let d2: f64 = c
                .y_vars
                .iter()
                .zip(&c.z_vars)
                .map(|(&a, &b)| (x[a] - x[b]).powi(2))
                .sum();
            let delta = match c.delta {
                Delta::Constant(v) => v,
                Delta::Variable(v) => x[v],
            };
            worst = worst.max(delta - d2.sqrt());
        }
        for b in &self.ball_containments {
            worst = worst.max(norm_to(x, &b.point, &b.center) - b.radius.eval(x));
        }
        for s in &self.sphere_memberships {
            let r = norm_to(x, &s.point, &s.center);
            worst = worst.max(r - s.radius - s.band).max(s.radius - s.band - r);
        }
        for l in &self.links {
            worst = worst.max((x[l.var] - l.scale * x[l.source]).abs());
        }
        for c in &self.static_cuts {
            worst = worst.max(c.violation(x));
        }
        worst
    }
}

pub(crate) fn norm_to(x: &[f64], vars: &[usize], center: &[f64]) -> f64 {
    vars.iter()
        .zip(center)
        .map(|(&v, &c)| (x[v] - c).powi(2))
        .sum::<f64>()
        .sqrt()
}
