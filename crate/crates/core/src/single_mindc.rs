//! Reductions derived from one minimum distance constraint
//! `Σ_i (y_i − z_i)² ≥ δ²`.
//!
//! All routines weaken a variable `δ` to its current lower bound `δ̄`, so a
//! removed point is one that is closer than `δ̄` to every point of the
//! opposite box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Infeasible, Result};
use crate::geometry::{
    hyperplane_through_points, line_sphere_params, BoxDomain, BoxView, LinearCut, Pt,
};
use crate::tolerances::{EPS_BOUND, EPS_GEOM};

/// Right-hand side of a minimum distance constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Delta {
    #[serde(rename = "const")]
    Constant(f64),
    #[serde(rename = "var")]
    Variable(usize),
}

/// `‖y − z‖ ≥ δ` over the variables `y_vars` and `z_vars`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinDC {
    #[serde(rename = "y")]
    pub y_vars: Vec<usize>,
    #[serde(rename = "z")]
    pub z_vars: Vec<usize>,
    pub delta: Delta,
}

impl MinDC {
    pub fn new(y_vars: Vec<usize>, z_vars: Vec<usize>, delta: Delta) -> Self {
        debug_assert_eq!(y_vars.len(), z_vars.len());
        MinDC {
            y_vars,
            z_vars,
            delta,
        }
    }

    pub fn dim(&self) -> usize {
        self.y_vars.len()
    }

    /// The same constraint with the roles of `y` and `z` exchanged.
    pub fn swapped(&self) -> MinDC {
        MinDC {
            y_vars: self.z_vars.clone(),
            z_vars: self.y_vars.clone(),
            delta: self.delta,
        }
    }

    /// `δ̄`: the constant, or the current lower bound of the delta variable.
    pub fn delta_lower(&self, bounds: &BoxDomain) -> f64 {
        match self.delta {
            Delta::Constant(v) => v.max(0.0),
            Delta::Variable(i) => bounds.lo(i).max(0.0),
        }
    }

    /// Every variable the constraint reads.
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        let dv = match self.delta {
            Delta::Variable(i) => Some(i),
            Delta::Constant(_) => None,
        };
        self.y_vars.iter().chain(&self.z_vars).copied().chain(dv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    RaiseLower,
    LowerUpper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundChange {
    pub var: usize,
    pub kind: BoundKind,
    pub value: f64,
}

impl BoundChange {
    pub fn lower(var: usize, value: f64) -> Self {
        BoundChange {
            var,
            kind: BoundKind::RaiseLower,
            value,
        }
    }

    pub fn upper(var: usize, value: f64) -> Self {
        BoundChange {
            var,
            kind: BoundKind::LowerUpper,
            value,
        }
    }

    /// Apply to `bounds`. Returns whether the bound moved by more than
    /// `EPS_BOUND`; crossing the opposite bound by more than that is
    /// infeasible, smaller crossings fix the variable.
    pub fn apply(&self, bounds: &mut BoxDomain) -> Result<bool, Infeasible> {
        let mut iv = bounds.get(self.var);
        match self.kind {
            BoundKind::RaiseLower => {
                if self.value <= iv.lo + EPS_BOUND {
                    return Ok(false);
                }
                if self.value > iv.hi + EPS_BOUND {
                    return Err(Infeasible);
                }
                iv.lo = self.value.min(iv.hi);
            }
            BoundKind::LowerUpper => {
                if self.value >= iv.hi - EPS_BOUND {
                    return Ok(false);
                }
                if self.value < iv.lo - EPS_BOUND {
                    return Err(Infeasible);
                }
                iv.hi = self.value.max(iv.lo);
            }
        }
        bounds.set(self.var, iv);
        Ok(true)
    }
}

/// Which facet of a box a reduction works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundSide {
    Lower,
    Upper,
}

impl BoundSide {
    pub const BOTH: [BoundSide; 2] = [BoundSide::Lower, BoundSide::Upper];
}

/// Collects changes for one propagator call, dropping negligible ones.
#[derive(Default)]
pub(crate) struct ChangeSet {
    pub changes: Vec<BoundChange>,
}

impl ChangeSet {
    pub fn upper(&mut self, var: usize, lo: f64, hi: f64, value: f64) -> Result<(), Infeasible> {
        if value < lo - EPS_BOUND {
            return Err(Infeasible);
        }
        if value < hi - EPS_BOUND {
            self.changes.push(BoundChange::upper(var, value.max(lo)));
        }
        Ok(())
    }

    pub fn lower(&mut self, var: usize, lo: f64, hi: f64, value: f64) -> Result<(), Infeasible> {
        if value > hi + EPS_BOUND {
            return Err(Infeasible);
        }
        if value > lo + EPS_BOUND {
            self.changes.push(BoundChange::lower(var, value.min(hi)));
        }
        Ok(())
    }
}

/// Per-coordinate separation bounds: any feasible pair has
/// `|y_j − z_j| ≥ values[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaVector {
    pub values: Vec<f64>,
    /// `dists[i]` is the largest `|y_i − z_i|` over the current domains.
    pub dists: Vec<f64>,
}

/// `Δ_j = sqrt(max(0, δ̄² − Σ_{i≠j} dist_i²))`, in `O(dim)`.
pub fn compute_deltas(c: &MinDC, bounds: &BoxDomain) -> Result<DeltaVector> {
    for &v in c.y_vars.iter().chain(&c.z_vars) {
        if !bounds.get(v).is_finite() {
            return Err(Error::UnboundedDomain(v));
        }
    }
    let delta = c.delta_lower(bounds);
    let dists: Vec<f64> = c
        .y_vars
        .iter()
        .zip(&c.z_vars)
        .map(|(&y, &z)| bounds.get(y).max_abs_diff(&bounds.get(z)))
        .collect();
    let total: f64 = dists.iter().map(|d| d * d).sum();
    let d2 = delta * delta;
    let values = dists
        .iter()
        .map(|&di| {
            let rest = total - di * di;
            if d2 <= rest {
                0.0
            } else {
                (d2 - rest).sqrt()
            }
        })
        .collect();
    Ok(DeltaVector { values, dists })
}

/// Interval reductions from `|y_j − z_j| ≥ Δ_j`, one coordinate at a time.
///
/// `y_j ≤ z_j − Δ_j` is possible only if `l̄_y ≤ ū_z − Δ_j`, and
/// `y_j ≥ z_j + Δ_j` only if `ū_y ≥ l̄_z + Δ_j`. If exactly one order is
/// possible both domains are cut to it, if neither is the node is infeasible.
/// This covers separated, nested and overlapping interval pairs alike.
pub fn propagate_prop1(c: &MinDC, bounds: &BoxDomain) -> Result<Vec<BoundChange>, Infeasible> {
    let Ok(deltas) = compute_deltas(c, bounds) else {
        return Ok(Vec::new());
    };
    let mut out = ChangeSet::default();
    for (j, &dj) in deltas.values.iter().enumerate() {
        if dj <= 0.0 {
            continue;
        }
        let (yv, zv) = (c.y_vars[j], c.z_vars[j]);
        let (y, z) = (bounds.get(yv), bounds.get(zv));
        let y_below = y.lo <= z.hi - dj;
        let y_above = y.hi >= z.lo + dj;
        match (y_below, y_above) {
            (false, false) => return Err(Infeasible),
            (true, false) => {
                out.upper(yv, y.lo, y.hi, z.hi - dj)?;
                out.lower(zv, z.lo, z.hi, y.lo + dj)?;
            }
            (false, true) => {
                out.lower(yv, y.lo, y.hi, z.lo + dj)?;
                out.upper(zv, z.lo, z.hi, y.hi - dj)?;
            }
            (true, true) => {}
        }
    }
    Ok(out.changes)
}

/// Upper bound on a variable `δ` implied by the farthest pair of points.
pub fn delta_upper_bound(c: &MinDC, bounds: &BoxDomain) -> Option<f64> {
    let total: f64 = c
        .y_vars
        .iter()
        .zip(&c.z_vars)
        .map(|(&y, &z)| {
            let d = bounds.get(y).max_abs_diff(&bounds.get(z));
            d * d
        })
        .sum();
    total.is_finite().then(|| total.sqrt())
}

/// Farthest-vertex distance², computed coordinate-wise.
pub(crate) fn max_vertex_dist2(point: &[f64], dz: BoxView<'_>) -> f64 {
    point
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let iv = dz.get(i);
            let a = p - iv.lo;
            let b = p - iv.hi;
            (a * a).max(b * b)
        })
        .sum()
}

pub(crate) fn in_c_view(point: &[f64], dz: BoxView<'_>, delta: f64) -> bool {
    delta > 0.0 && max_vertex_dist2(point, dz) < delta * delta - EPS_GEOM
}

/// Whether `point` is closer than `delta` to every vertex of `dz`, i.e. lies
/// in the intersection of the open balls around them.
pub fn in_c(point: &[f64], dz: &BoxDomain, delta: f64) -> bool {
    let all: Vec<usize> = (0..dz.dim()).collect();
    in_c_view(point, dz.view(&all), delta)
}

/// Strongest facet-aligned slab of `D_y` that lies inside `C(D_z, δ̄)`.
///
/// For `BoundSide::Upper` the result lowers the upper bound of `y[axis]` to the
/// smallest `t` such that `{x ∈ D_y : x_axis ≥ t} ⊆ C`. The slab is convex and
/// so is `C`, hence it suffices to test the slab's vertices: the facet
/// vertices must be in `C`, and the inner vertices are the deepest entry points
/// of the edges parallel to `axis` into the balls around `V(D_z)`.
///
/// `Err(Infeasible)` when the whole box lies in `C`.
pub fn locatelli_shrink(
    c: &MinDC,
    bounds: &BoxDomain,
    axis: usize,
    side: BoundSide,
) -> Result<Option<BoundChange>, Infeasible> {
    let dy = bounds.view(&c.y_vars);
    let dz = bounds.view(&c.z_vars);
    if !dy.is_finite() || !dz.is_finite() {
        return Ok(None);
    }
    let delta = c.delta_lower(bounds);
    if delta <= 0.0 {
        return Ok(None);
    }
    let span = dy.get(axis);
    let facet = match side {
        BoundSide::Upper => span.hi,
        BoundSide::Lower => span.lo,
    };

    let mut anchors: smallvec::SmallVec<[Pt; 8]> = smallvec::SmallVec::new();
    for m in dy.vertex_masks().filter(|m| m >> axis & 1 == 0) {
        let mut a = dy.vertex(m);
        a[axis] = facet;
        if !in_c_view(&a, dz, delta) {
            return Ok(None);
        }
        anchors.push(a);
    }
    if span.is_singleton() {
        return Err(Infeasible);
    }

    let z_masks: smallvec::SmallVec<[usize; 16]> = dz.vertex_masks().collect();
    let mut crossed = false;
    let mut best = match side {
        BoundSide::Upper => span.lo,
        BoundSide::Lower => span.hi,
    };
    for a in &anchors {
        for &zm in &z_masks {
            let z = dz.vertex(zm);
            let (ts, n) = line_sphere_params(a, axis, span, &z, delta);
            for &t in &ts[..n] {
                match side {
                    BoundSide::Upper if t < facet => {
                        crossed = true;
                        best = best.max(t);
                    }
                    BoundSide::Lower if t > facet => {
                        crossed = true;
                        best = best.min(t);
                    }
                    _ => {}
                }
            }
        }
    }
    if !crossed {
        return Err(Infeasible);
    }
    let var = dy.var(axis);
    Ok(match side {
        BoundSide::Upper if best < span.hi - EPS_BOUND => Some(BoundChange::upper(var, best)),
        BoundSide::Lower if best > span.lo + EPS_BOUND => Some(BoundChange::lower(var, best)),
        _ => None,
    })
}

/// Cut off the vertex `v` of `D_y` by the facet of the simplex spanned by `v`
/// and the farthest points of `C(D_z, δ̄)` on the `dim` edges leaving `v`.
///
/// The cut is returned over the model variables as `a·x ≥ b` with `‖a‖ = 1`
/// and `a·v < b`. It is valid as long as `D_z` does not grow and `δ̄` does not
/// shrink, i.e. in the subtree of the node it was derived in.
pub fn simplex_cut(v: &[f64], c: &MinDC, bounds: &BoxDomain) -> Option<LinearCut> {
    let dy = bounds.view(&c.y_vars);
    let dz = bounds.view(&c.z_vars);
    let d = dy.dim();
    if v.len() != d || !dy.is_finite() || !dz.is_finite() {
        return None;
    }
    if (0..d).any(|k| dy.get(k).width() <= EPS_GEOM) {
        return None;
    }
    let delta = c.delta_lower(bounds);
    if !in_c_view(v, dz, delta) {
        return None;
    }
    let z_masks: smallvec::SmallVec<[usize; 16]> = dz.vertex_masks().collect();
    let mut tips = Vec::with_capacity(d);
    for k in 0..d {
        let span = dy.get(k);
        let dir = if v[k] == span.lo {
            1.0
        } else if v[k] == span.hi {
            -1.0
        } else {
            return None;
        };
        let mut reach = span.width();
        for &zm in &z_masks {
            let z = dz.vertex(zm);
            let (ts, n) = line_sphere_params(v, k, span, &z, delta);
            for &t in &ts[..n] {
                let step = (t - v[k]) * dir;
                if step > 0.0 {
                    reach = reach.min(step);
                }
            }
        }
        if reach <= EPS_GEOM {
            return None;
        }
        let mut p = v.to_vec();
        p[k] = v[k] + dir * reach;
        tips.push(p);
    }
    let mut cut = hyperplane_through_points(&tips)?;
    if cut.activity(v) > cut.rhs {
        cut = cut.negated();
    }
    if cut.activity(v) >= cut.rhs {
        return None;
    }
    Some(cut.remap(&c.y_vars))
}
