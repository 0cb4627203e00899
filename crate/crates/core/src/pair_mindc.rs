//! Reductions from two minimum distance constraints that share a vector:
//! `‖y − z¹‖ ≥ δ₁` and `‖y − z²‖ ≥ δ₂`.
//!
//! A slab `D′` of `D_y` can be removed when every point of it is closer than
//! `δ̄₁` to all of `D_{z¹}` or closer than `δ̄₂` to all of `D_{z²}`. Candidate
//! slabs come from a short bisection or, in two and three dimensions, from the
//! intersection geometry of the spheres involved; either way they are
//! validated by the exact cover test before use.

use serde::{Deserialize, Serialize};

use crate::geometry::{
    circle_plane_intersection, in_open_ball, line_sphere_params, sphere_sphere_intersection, Ball,
    BoxDomain, BoxView, Interval, SphereIntersection,
};
use crate::single_mindc::{in_c_view, BoundChange, BoundSide, MinDC};
use crate::tolerances::EPS_BOUND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Y,
    Z,
}

fn side_vars(c: &MinDC, s: Side) -> &[usize] {
    match s {
        Side::Y => &c.y_vars,
        Side::Z => &c.z_vars,
    }
}

fn other(s: Side) -> Side {
    match s {
        Side::Y => Side::Z,
        Side::Z => Side::Y,
    }
}

/// Two constraints and the side of each that holds the shared vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MinDCPair {
    /// Positions of the two constraints in the instance.
    pub ids: (usize, usize),
    pub c1: MinDC,
    pub c2: MinDC,
    pub shared: (Side, Side),
}

impl MinDCPair {
    pub fn new(ids: (usize, usize), c1: MinDC, c2: MinDC, shared: (Side, Side)) -> Self {
        assert_eq!(
            side_vars(&c1, shared.0),
            side_vars(&c2, shared.1),
            "shared sides must reference the same variables"
        );
        MinDCPair {
            ids,
            c1,
            c2,
            shared,
        }
    }

    pub fn y_vars(&self) -> &[usize] {
        side_vars(&self.c1, self.shared.0)
    }

    pub fn z1_vars(&self) -> &[usize] {
        side_vars(&self.c1, other(self.shared.0))
    }

    pub fn z2_vars(&self) -> &[usize] {
        side_vars(&self.c2, other(self.shared.1))
    }

    pub fn dim(&self) -> usize {
        self.c1.dim()
    }

    /// Weakened right-hand sides `(δ̄₁, δ̄₂)`.
    pub fn deltas(&self, bounds: &BoxDomain) -> (f64, f64) {
        (self.c1.delta_lower(bounds), self.c2.delta_lower(bounds))
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.c1.vars().chain(self.c2.vars())
    }
}

/// Every unordered pair of constraints whose sides reference the same index
/// sequence.
pub fn register_pairs(mindcs: &[MinDC]) -> Vec<MinDCPair> {
    let mut pairs = Vec::new();
    for (i, a) in mindcs.iter().enumerate() {
        for (k, b) in mindcs.iter().enumerate().skip(i + 1) {
            'sides: for sa in [Side::Y, Side::Z] {
                for sb in [Side::Y, Side::Z] {
                    if side_vars(a, sa) == side_vars(b, sb) {
                        pairs.push(MinDCPair::new((i, k), a.clone(), b.clone(), (sa, sb)));
                        break 'sides;
                    }
                }
            }
        }
    }
    pairs
}

/// Pairs that read at least one changed variable.
pub fn changed_pairs<'a>(
    pairs: &'a [MinDCPair],
    is_changed: impl Fn(usize) -> bool,
) -> Vec<&'a MinDCPair> {
    pairs.iter().filter(|p| p.vars().any(&is_changed)).collect()
}

/// A proposed bound for one coordinate of the shared vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateSlab {
    pub axis: usize,
    pub side: BoundSide,
    pub new_bound: f64,
}

fn cover_check_view(dp: BoxView<'_>, p: &[f64], q: &[f64], d1: f64, d2: f64) -> bool {
    for m in dp.vertex_masks() {
        let v = dp.vertex(m);
        if !(in_open_ball(&v, p, d1) || in_open_ball(&v, q, d2)) {
            return false;
        }
    }
    for axis in 0..dp.dim() {
        let span = dp.get(axis);
        if span.is_singleton() {
            continue;
        }
        for m in dp.vertex_masks().filter(|m| m >> axis & 1 == 0) {
            let mut a = dp.vertex(m);
            let (ts, n) = line_sphere_params(&a, axis, span, p, d1);
            for &t in &ts[..n] {
                a[axis] = t;
                if !in_open_ball(&a, q, d2) {
                    return false;
                }
            }
        }
    }
    true
}

/// `D_p ⊆ B_{δ1}(p) ∪ B_{δ2}(q)`, decided from the vertices of `D_p` and the
/// crossings of its edges with `∂B_{δ1}(p)`.
pub fn pair_cover_check(dp: &BoxDomain, p: &[f64], q: &[f64], d1: f64, d2: f64) -> bool {
    let all: Vec<usize> = (0..dp.dim()).collect();
    cover_check_view(dp.view(&all), p, q, d1, d2)
}

fn cover_check_boxes_view(
    dp: BoxView<'_>,
    dz1: BoxView<'_>,
    dz2: BoxView<'_>,
    d1: f64,
    d2: f64,
) -> bool {
    if !dp.is_finite() || !dz1.is_finite() || !dz2.is_finite() {
        return false;
    }
    let qs: smallvec::SmallVec<[crate::geometry::Pt; 16]> =
        dz2.vertex_masks().map(|m| dz2.vertex(m)).collect();
    for pm in dz1.vertex_masks() {
        let p = dz1.vertex(pm);
        if !qs.iter().all(|q| cover_check_view(dp, &p, q, d1, d2)) {
            return false;
        }
    }
    true
}

/// The cover test for every vertex pair `(p, q) ∈ V(D_{z1}) × V(D_{z2})`.
pub fn pair_cover_check_boxes(
    dp: &BoxDomain,
    dz1: &BoxDomain,
    dz2: &BoxDomain,
    d1: f64,
    d2: f64,
) -> bool {
    let n = dp.dim().max(dz1.dim()).max(dz2.dim());
    let all: Vec<usize> = (0..n).collect();
    cover_check_boxes_view(
        dp.view(&all[..dp.dim()]),
        dz1.view(&all[..dz1.dim()]),
        dz2.view(&all[..dz2.dim()]),
        d1,
        d2,
    )
}

/// Shared-vector box with coordinate `axis` replaced by `span`.
fn slab_box(pair: &MinDCPair, bounds: &BoxDomain, axis: usize, span: Interval) -> BoxDomain {
    let mut b = bounds.project(pair.y_vars());
    b.set(axis, span);
    b
}

fn slab_removable(pair: &MinDCPair, bounds: &BoxDomain, slab: &BoxDomain) -> bool {
    let (d1, d2) = pair.deltas(bounds);
    if d1 <= 0.0 && d2 <= 0.0 {
        return false;
    }
    let all: Vec<usize> = (0..slab.dim()).collect();
    cover_check_boxes_view(
        slab.view(&all),
        bounds.view(pair.z1_vars()),
        bounds.view(pair.z2_vars()),
        d1,
        d2,
    )
}

/// Interval of the slab that removing the fraction `frac` of the width cuts off.
fn outer_slab(span: Interval, side: BoundSide, frac: f64) -> (Interval, f64) {
    let w = span.width();
    match side {
        BoundSide::Upper => {
            let t = span.hi - frac * w;
            (Interval::new(t, span.hi), t)
        }
        BoundSide::Lower => {
            let t = span.lo + frac * w;
            (Interval::new(span.lo, t), t)
        }
    }
}

/// Three cover checks searching for the largest removable outer slab.
///
/// The first candidate removes 10% of the interval. After a success the
/// fraction doubles (or moves halfway to the smallest failed fraction), after
/// a failure it moves halfway down to the largest successful one.
pub fn bisection_reduce(
    pair: &MinDCPair,
    axis: usize,
    side: BoundSide,
    bounds: &BoxDomain,
) -> Option<BoundChange> {
    let span = bounds.get(pair.y_vars()[axis]);
    if !(span.width() > EPS_BOUND) || !span.is_finite() {
        return None;
    }
    let mut ok = 0.0f64;
    let mut failed: Option<f64> = None;
    let mut frac = 0.1f64;
    let mut best: Option<f64> = None;
    for _ in 0..3 {
        let (iv, t) = outer_slab(span, side, frac);
        if slab_removable(pair, bounds, &slab_box(pair, bounds, axis, iv)) {
            ok = frac;
            best = Some(t);
            frac = match failed {
                Some(f) => 0.5 * (frac + f),
                None => (2.0 * frac).min(1.0),
            };
        } else {
            failed = Some(frac);
            frac = 0.5 * (ok + frac);
        }
    }
    let var = pair.y_vars()[axis];
    best.map(|t| match side {
        BoundSide::Upper => BoundChange::upper(var, t),
        BoundSide::Lower => BoundChange::lower(var, t),
    })
}

/// Necessary condition for any slab at this facet to be removable: every
/// facet vertex lies in `C(D_{z1}, δ̄₁) ∪ C(D_{z2}, δ̄₂)`. A vertex outside
/// both has some `p` and `q` it is not close to.
pub fn facet_may_be_covered(
    pair: &MinDCPair,
    axis: usize,
    side: BoundSide,
    bounds: &BoxDomain,
) -> bool {
    let dy = bounds.view(pair.y_vars());
    let dz1 = bounds.view(pair.z1_vars());
    let dz2 = bounds.view(pair.z2_vars());
    if !dy.is_finite() || !dz1.is_finite() || !dz2.is_finite() {
        return false;
    }
    let (d1, d2) = pair.deltas(bounds);
    let span = dy.get(axis);
    let facet = match side {
        BoundSide::Upper => span.hi,
        BoundSide::Lower => span.lo,
    };
    let covered = dy.vertex_masks().filter(|m| m >> axis & 1 == 0).all(|m| {
        let mut v = dy.vertex(m);
        v[axis] = facet;
        in_c_view(&v, dz1, d1) || in_c_view(&v, dz2, d2)
    });
    covered
}

/// Guess a new bound for `y[axis]` from sphere/edge and sphere/sphere
/// intersections (`dim ∈ {2, 3}` only). The guess must be validated with
/// [`validate_slab`] before it is applied.
pub fn geometric_reduce(
    pair: &MinDCPair,
    axis: usize,
    side: BoundSide,
    bounds: &BoxDomain,
) -> Option<CandidateSlab> {
    let d = pair.dim();
    if d != 2 && d != 3 {
        return None;
    }
    let dy = bounds.view(pair.y_vars());
    let dz1 = bounds.view(pair.z1_vars());
    let dz2 = bounds.view(pair.z2_vars());
    if !dy.is_finite() || !dz1.is_finite() || !dz2.is_finite() {
        return None;
    }
    let (d1, d2) = pair.deltas(bounds);
    let span = dy.get(axis);
    let mut best: Option<f64> = None;
    let mut offer = |t: f64| {
        if span.lo <= t && t <= span.hi {
            best = Some(match (best, side) {
                (None, _) => t,
                (Some(b), BoundSide::Upper) => b.max(t),
                (Some(b), BoundSide::Lower) => b.min(t),
            });
        }
    };

    let ps: Vec<_> = dz1.vertex_masks().map(|m| dz1.vertex(m)).collect();
    let qs: Vec<_> = dz2.vertex_masks().map(|m| dz2.vertex(m)).collect();

    // Edges orthogonal to the facet run parallel to `axis`.
    let anchors: Vec<_> = dy
        .vertex_masks()
        .filter(|m| m >> axis & 1 == 0)
        .map(|m| dy.vertex(m))
        .collect();
    for a in &anchors {
        for (centers, r) in [(&ps, d1), (&qs, d2)] {
            if r <= 0.0 {
                continue;
            }
            for c in centers {
                let (ts, n) = line_sphere_params(a, axis, span, c, r);
                ts[..n].iter().for_each(|&t| offer(t));
            }
        }
    }

    if d1 > 0.0 && d2 > 0.0 {
        for p in &ps {
            for q in &qs {
                let bp = Ball::new(p.to_vec(), d1);
                let bq = Ball::new(q.to_vec(), d2);
                match sphere_sphere_intersection(&bp, &bq, d) {
                    SphereIntersection::TwoPoints(u, v) => {
                        offer(u[axis]);
                        offer(v[axis]);
                    }
                    SphereIntersection::Circle {
                        center,
                        radius,
                        normal,
                    } => {
                        for k in (0..3).filter(|&k| k != axis) {
                            for level in [dy.lo(k), dy.hi(k)] {
                                for x in
                                    circle_plane_intersection(&center, radius, &normal, k, level)
                                {
                                    offer(x[axis]);
                                }
                            }
                        }
                    }
                    SphereIntersection::Empty | SphereIntersection::Degenerate => {}
                }
            }
        }
    }

    let t = best?;
    let improves = match side {
        BoundSide::Upper => t < span.hi - EPS_BOUND,
        BoundSide::Lower => t > span.lo + EPS_BOUND,
    };
    improves.then_some(CandidateSlab {
        axis,
        side,
        new_bound: t,
    })
}

/// Accept a candidate if the slab beyond it (pulled inward by a hair so that
/// boundary points where both constraints are tight stay in the domain)
/// passes the cover test.
pub fn validate_slab(
    pair: &MinDCPair,
    cand: CandidateSlab,
    bounds: &BoxDomain,
) -> Option<BoundChange> {
    let span = bounds.get(pair.y_vars()[cand.axis]);
    let margin = EPS_BOUND.max(1e-6 * span.width());
    let var = pair.y_vars()[cand.axis];
    let (iv, change) = match cand.side {
        BoundSide::Upper => {
            let t = cand.new_bound + margin;
            if t >= span.hi - EPS_BOUND {
                return None;
            }
            (Interval::new(t, span.hi), BoundChange::upper(var, t))
        }
        BoundSide::Lower => {
            let t = cand.new_bound - margin;
            if t <= span.lo + EPS_BOUND {
                return None;
            }
            (Interval::new(span.lo, t), BoundChange::lower(var, t))
        }
    };
    slab_removable(pair, bounds, &slab_box(pair, bounds, cand.axis, iv)).then_some(change)
}
