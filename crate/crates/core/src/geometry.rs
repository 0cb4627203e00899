//! Box combinatorics, balls, sphere intersections and hyperplanes.
//!
//! Every reduction works on axis-aligned boxes, so the helpers here take
//! either a [`BoxDomain`] or a [`BoxView`] (a box read through a list of
//! variable indices of a larger domain, which avoids copying per call).

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::tolerances::EPS_GEOM;

/// Stack-allocated point for the small dimensions that occur in practice.
pub(crate) type Pt = SmallVec<[f64; 8]>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for Interval {
    fn from(v: [f64; 2]) -> Self {
        Interval { lo: v[0], hi: v[1] }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.lo, iv.hi]
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Largest `|a − b|` over `a` in `self` and `b` in `other`.
    pub fn max_abs_diff(&self, other: &Interval) -> f64 {
        (self.hi - other.lo).abs().max((other.hi - self.lo).abs())
    }
}

/// Axis-aligned hyperrectangle; one interval per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoxDomain {
    intervals: Vec<Interval>,
}

impl BoxDomain {
    pub fn new(intervals: Vec<Interval>) -> Self {
        BoxDomain { intervals }
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Self {
        BoxDomain::new(bounds.iter().map(|&(l, h)| Interval::new(l, h)).collect())
    }

    pub fn singleton(p: &[f64]) -> Self {
        BoxDomain::new(p.iter().map(|&v| Interval::point(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn intervals_mut(&mut self) -> &mut [Interval] {
        &mut self.intervals
    }

    pub fn get(&self, i: usize) -> Interval {
        self.intervals[i]
    }

    pub fn set(&mut self, i: usize, iv: Interval) {
        self.intervals[i] = iv;
    }

    pub fn lo(&self, i: usize) -> f64 {
        self.intervals[i].lo
    }

    pub fn hi(&self, i: usize) -> f64 {
        self.intervals[i].hi
    }

    pub fn volume(&self) -> f64 {
        self.intervals.iter().map(Interval::width).product()
    }

    pub fn is_singleton(&self) -> bool {
        self.intervals.iter().all(Interval::is_singleton)
    }

    pub fn is_finite(&self) -> bool {
        self.intervals.iter().all(Interval::is_finite)
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::mid).collect()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && self.intervals.iter().zip(p).all(|(iv, &v)| iv.contains(v))
    }

    /// `self ⊆ other` up to `tol`.
    pub fn is_subset_of(&self, other: &BoxDomain, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| a.lo >= b.lo - tol && a.hi <= b.hi + tol)
    }

    /// The sub-box over the given variables, in the given order.
    pub fn project(&self, vars: &[usize]) -> BoxDomain {
        BoxDomain::new(vars.iter().map(|&v| self.intervals[v]).collect())
    }

    pub fn view<'a>(&'a self, vars: &'a [usize]) -> BoxView<'a> {
        BoxView {
            intervals: &self.intervals,
            vars,
        }
    }
}

/// A box read through an index map into a larger domain.
#[derive(Debug, Clone, Copy)]
pub struct BoxView<'a> {
    intervals: &'a [Interval],
    vars: &'a [usize],
}

impl<'a> BoxView<'a> {
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn get(&self, i: usize) -> Interval {
        self.intervals[self.vars[i]]
    }

    pub fn lo(&self, i: usize) -> f64 {
        self.get(i).lo
    }

    pub fn hi(&self, i: usize) -> f64 {
        self.get(i).hi
    }

    pub fn var(&self, i: usize) -> usize {
        self.vars[i]
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim()).all(|i| self.get(i).is_finite())
    }

    pub fn to_box(&self) -> BoxDomain {
        BoxDomain::new((0..self.dim()).map(|i| self.get(i)).collect())
    }

    /// Vertex selected by `mask`: bit `i` set picks the upper bound on axis `i`.
    pub(crate) fn vertex(&self, mask: usize) -> Pt {
        (0..self.dim())
            .map(|i| {
                let iv = self.get(i);
                if mask >> i & 1 == 1 {
                    iv.hi
                } else {
                    iv.lo
                }
            })
            .collect()
    }

    /// Masks enumerating each distinct vertex once (degenerate axes are skipped).
    pub(crate) fn vertex_masks(&self) -> impl Iterator<Item = usize> + '_ {
        let free: usize = (0..self.dim())
            .filter(|&i| !self.get(i).is_singleton())
            .fold(0, |m, i| m | 1 << i);
        (0..1usize << self.dim()).filter(move |m| m & !free == 0)
    }
}

/// Open Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Ball { center, radius }
    }

    /// Strict membership with the `EPS_GEOM` margin.
    pub fn contains_open(&self, p: &[f64]) -> bool {
        in_open_ball(p, &self.center, self.radius)
    }
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn in_open_ball(p: &[f64], center: &[f64], radius: f64) -> bool {
    dist2(p, center) < radius * radius - EPS_GEOM
}

/// One edge of a box: all coordinates fixed except `free_axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxEdge {
    pub anchor: Vec<f64>,
    pub free_axis: usize,
    pub span: Interval,
}

impl BoxEdge {
    pub fn endpoints(&self) -> (Vec<f64>, Vec<f64>) {
        let mut a = self.anchor.clone();
        let mut b = self.anchor.clone();
        a[self.free_axis] = self.span.lo;
        b[self.free_axis] = self.span.hi;
        (a, b)
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        let mut p = self.anchor.clone();
        p[self.free_axis] = t;
        p
    }
}

fn check_finite(b: &BoxDomain) -> Result<()> {
    match b.intervals().iter().position(|iv| !iv.is_finite()) {
        Some(i) => Err(Error::UnboundedDomain(i)),
        None => Ok(()),
    }
}

/// All distinct corners of the box.
pub fn box_vertices(b: &BoxDomain) -> Result<Vec<Vec<f64>>> {
    check_finite(b)?;
    let all: Vec<usize> = (0..b.dim()).collect();
    let view = b.view(&all);
    Ok(view
        .vertex_masks()
        .map(|m| view.vertex(m).to_vec())
        .collect())
}

/// All edges of the box. A full-dimensional box in `d` dimensions has
/// `d·2^(d−1)` of them; degenerate axes contribute none.
pub fn box_edges(b: &BoxDomain) -> Result<Vec<BoxEdge>> {
    check_finite(b)?;
    let d = b.dim();
    let all: Vec<usize> = (0..d).collect();
    let view = b.view(&all);
    let mut edges = Vec::new();
    for axis in 0..d {
        let span = b.get(axis);
        if span.is_singleton() {
            continue;
        }
        for m in view.vertex_masks().filter(|m| m >> axis & 1 == 0) {
            edges.push(BoxEdge {
                anchor: view.vertex(m).to_vec(),
                free_axis: axis,
                span,
            });
        }
    }
    Ok(edges)
}

/// Free-axis parameters where the axis-parallel line through `anchor` meets
/// the sphere `‖x − center‖ = radius`, restricted to `span` (± `EPS_GEOM`).
/// Returned in increasing order; `count` is 0, 1 or 2.
pub(crate) fn line_sphere_params(
    anchor: &[f64],
    free_axis: usize,
    span: Interval,
    center: &[f64],
    radius: f64,
) -> ([f64; 2], usize) {
    let rest: f64 = anchor
        .iter()
        .zip(center)
        .enumerate()
        .filter(|&(i, _)| i != free_axis)
        .map(|(_, (a, c))| (a - c) * (a - c))
        .sum();
    let disc = radius * radius - rest;
    let mut out = [0.0; 2];
    let mut n = 0;
    if disc < 0.0 {
        return (out, 0);
    }
    let s = disc.sqrt();
    let c = center[free_axis];
    let roots: &[f64] = if s == 0.0 { &[c] } else { &[c - s, c + s] };
    for &t in roots {
        if t >= span.lo - EPS_GEOM && t <= span.hi + EPS_GEOM {
            out[n] = t.clamp(span.lo, span.hi);
            n += 1;
        }
    }
    (out, n)
}

/// Points of the closed edge at exact distance `radius` from the ball center,
/// sorted by the free coordinate.
pub fn segment_sphere_intersection(edge: &BoxEdge, ball: &Ball) -> Vec<Vec<f64>> {
    let (ts, n) = line_sphere_params(
        &edge.anchor,
        edge.free_axis,
        edge.span,
        &ball.center,
        ball.radius,
    );
    ts[..n].iter().map(|&t| edge.point_at(t)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum SphereIntersection {
    Empty,
    TwoPoints(Vec<f64>, Vec<f64>),
    /// Intersection circle of two spheres in 3-D; `normal` is a unit vector
    /// along the center line with its first nonzero component positive.
    Circle {
        center: Vec<f64>,
        radius: f64,
        normal: Vec<f64>,
    },
    /// Tangent spheres or coincident identical spheres.
    Degenerate,
}

/// Intersection of the boundaries of two balls in two or three dimensions.
pub fn sphere_sphere_intersection(b1: &Ball, b2: &Ball, dim: usize) -> SphereIntersection {
    assert!(dim == 2 || dim == 3, "sphere intersection needs dim 2 or 3");
    let (r1, r2) = (b1.radius, b2.radius);
    let diff: Pt = b2
        .center
        .iter()
        .zip(&b1.center)
        .map(|(a, b)| a - b)
        .collect();
    let d = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
    if d < EPS_GEOM {
        return if (r1 - r2).abs() < EPS_GEOM {
            SphereIntersection::Degenerate
        } else {
            SphereIntersection::Empty
        };
    }
    if d > r1 + r2 + EPS_GEOM || d < (r1 - r2).abs() - EPS_GEOM {
        return SphereIntersection::Empty;
    }
    if (d - (r1 + r2)).abs() <= EPS_GEOM || (d - (r1 - r2).abs()).abs() <= EPS_GEOM {
        return SphereIntersection::Degenerate;
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let u: Pt = diff.iter().map(|v| v / d).collect();
    let base: Vec<f64> = b1.center.iter().zip(&u).map(|(c, ui)| c + a * ui).collect();
    if dim == 2 {
        let perp = [-u[1], u[0]];
        let p = vec![base[0] + h * perp[0], base[1] + h * perp[1]];
        let q = vec![base[0] - h * perp[0], base[1] - h * perp[1]];
        let (p, q) = if lex_less(&q, &p) { (q, p) } else { (p, q) };
        SphereIntersection::TwoPoints(p, q)
    } else {
        let mut normal = u.to_vec();
        if normal
            .iter()
            .find(|v| v.abs() > EPS_GEOM)
            .is_some_and(|v| *v < 0.0)
        {
            normal.iter_mut().for_each(|v| *v = -*v);
        }
        SphereIntersection::Circle {
            center: base,
            radius: h,
            normal,
        }
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    false
}

/// Points where a circle in 3-D meets the plane `x[axis] = value`.
pub fn circle_plane_intersection(
    center: &[f64],
    radius: f64,
    normal: &[f64],
    axis: usize,
    value: f64,
) -> Vec<Vec<f64>> {
    let (u, w) = orthonormal_complement(normal);
    let a = radius * u[axis];
    let b = radius * w[axis];
    let amp = (a * a + b * b).sqrt();
    if amp < EPS_GEOM {
        return Vec::new();
    }
    let ratio = (value - center[axis]) / amp;
    if ratio.abs() > 1.0 {
        return Vec::new();
    }
    let phi = b.atan2(a);
    let spread = ratio.acos();
    let angles: &[f64] = if spread == 0.0 {
        &[phi]
    } else {
        &[phi - spread, phi + spread]
    };
    angles
        .iter()
        .map(|&theta| {
            let (s, c) = theta.sin_cos();
            let mut p: Vec<f64> = (0..3)
                .map(|k| center[k] + radius * (c * u[k] + s * w[k]))
                .collect();
            p[axis] = value;
            p
        })
        .collect()
}

fn orthonormal_complement(n: &[f64]) -> ([f64; 3], [f64; 3]) {
    // Seed with the axis least aligned with n.
    let k = (0..3)
        .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let dot = n[k];
    let mut u = [e[0] - dot * n[0], e[1] - dot * n[1], e[2] - dot * n[2]];
    let nu = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u.iter_mut().for_each(|v| *v /= nu);
    let w = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    (u, w)
}

/// Sparse linear inequality `Σ coef·x[var] ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearCut {
    pub coefs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LinearCut {
    pub fn new(coefs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearCut { coefs, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(v, a)| a * x[v]).sum()
    }

    /// `rhs − activity`; positive when violated.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.rhs - self.activity(x)
    }

    pub fn negated(&self) -> LinearCut {
        LinearCut {
            coefs: self.coefs.iter().map(|&(v, a)| (v, -a)).collect(),
            rhs: -self.rhs,
        }
    }

    /// Rename coordinate `i` to `vars[i]`.
    pub fn remap(&self, vars: &[usize]) -> LinearCut {
        LinearCut {
            coefs: self.coefs.iter().map(|&(i, a)| (vars[i], a)).collect(),
            rhs: self.rhs,
        }
    }
}

/// Hyperplane `a·x = b` with `‖a‖ = 1` through `dim` points in `dim`-space,
/// returned as the cut `a·x ≥ b` over coordinates `0..dim`. `None` when the
/// points are affinely dependent.
pub fn hyperplane_through_points(points: &[Vec<f64>]) -> Option<LinearCut> {
    let d = points.first()?.len();
    if points.len() != d || points.iter().any(|p| p.len() != d) {
        return None;
    }
    let p0 = &points[0];
    let mut m: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let tol = EPS_GEOM * scale;

    // Reduced row echelon form with partial pivoting.
    let rows = m.len();
    let mut pivot_cols = Vec::with_capacity(rows);
    let mut r = 0;
    for c in 0..d {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if val <= tol {
            continue;
        }
        m.swap(r, best);
        let piv = m[r][c];
        m[r].iter_mut().for_each(|v| *v /= piv);
        for i in 0..rows {
            if i != r {
                let f = m[i][c];
                if f != 0.0 {
                    for k in 0..d {
                        m[i][k] -= f * m[r][k];
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if pivot_cols.len() != d - 1 {
        return None;
    }
    let free = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut a = vec![0.0; d];
    a[free] = 1.0;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        a[pc] = -m[row][free];
    }
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    a.iter_mut().for_each(|v| *v /= norm);
    let b = a.iter().zip(p0).map(|(x, y)| x * y).sum();
    Some(LinearCut::new(a.into_iter().enumerate().collect(), b))
}
