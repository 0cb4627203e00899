//! Bound propagation at a search node.

use crate::error::Infeasible;
use crate::geometry::{BoxDomain, Interval, LinearCut};
use crate::pair_mindc::{
    bisection_reduce, changed_pairs, facet_may_be_covered, geometric_reduce, register_pairs,
    validate_slab, MinDCPair,
};
use crate::single_mindc::{
    delta_upper_bound, locatelli_shrink, propagate_prop1, BoundChange, BoundSide, ChangeSet, Delta,
    MinDC,
};
use crate::symmetry::{lex_cols_propagate, lex_rows_propagate};
use crate::tolerances::EPS_BOUND;

use super::instance::{BallContainment, Instance, RadiusExpr, SphereMembership, VarLink};
use super::settings::{Counters, Settings};

pub const MAX_ROUNDS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationStatus {
    Fixpoint,
    Infeasible,
}

/// Implied bounds of `Σ a·x ≥ b` over the box.
pub fn propagate_linear_cut(
    cut: &LinearCut,
    bounds: &BoxDomain,
) -> Result<Vec<BoundChange>, Infeasible> {
    let term_max = |v: usize, a: f64| {
        let iv = bounds.get(v);
        if a >= 0.0 {
            a * iv.hi
        } else {
            a * iv.lo
        }
    };
    let max: f64 = cut.coefs.iter().map(|&(v, a)| term_max(v, a)).sum();
    if !max.is_finite() {
        return Ok(Vec::new());
    }
    if max < cut.rhs - EPS_BOUND {
        return Err(Infeasible);
    }
    let mut out = ChangeSet::default();
    for &(v, a) in &cut.coefs {
        if a.abs() < 1e-12 {
            continue;
        }
        let rest = max - term_max(v, a);
        let bound = (cut.rhs - rest) / a;
        let iv = bounds.get(v);
        if a > 0.0 {
            out.lower(v, iv.lo, iv.hi, bound)?;
        } else {
            out.upper(v, iv.lo, iv.hi, bound)?;
        }
    }
    Ok(out.changes)
}

fn min_gap(iv: Interval, c: f64) -> f64 {
    if c < iv.lo {
        iv.lo - c
    } else if c > iv.hi {
        c - iv.hi
    } else {
        0.0
    }
}

/// Coordinate bounds from `‖x − c‖ ≤ R` plus, for an affine radius, the
/// radius bound implied by the nearest point of the box.
pub fn propagate_ball_containment(
    ball: &BallContainment,
    bounds: &BoxDomain,
) -> Result<Vec<BoundChange>, Infeasible> {
    let r_max = ball.radius.upper(bounds);
    let gaps: Vec<f64> = ball
        .point
        .iter()
        .zip(&ball.center)
        .map(|(&v, &c)| min_gap(bounds.get(v), c))
        .collect();
    let total: f64 = gaps.iter().map(|g| g * g).sum();
    if !r_max.is_finite() {
        return Ok(Vec::new());
    }
    if r_max < -EPS_BOUND || total.sqrt() > r_max + EPS_BOUND {
        return Err(Infeasible);
    }
    let r_max = r_max.max(0.0);
    let mut out = ChangeSet::default();
    for (k, (&v, &c)) in ball.point.iter().zip(&ball.center).enumerate() {
        let room = (r_max * r_max - (total - gaps[k] * gaps[k]))
            .max(0.0)
            .sqrt();
        let iv = bounds.get(v);
        out.lower(v, iv.lo, iv.hi, c - room)?;
        out.upper(v, iv.lo, iv.hi, c + room)?;
    }
    if let RadiusExpr::Affine { var, scale, offset } = ball.radius {
        if scale != 0.0 {
            let need = (total.sqrt() - offset) / scale;
            let iv = bounds.get(var);
            if scale > 0.0 {
                out.lower(var, iv.lo, iv.hi, need)?;
            } else {
                out.upper(var, iv.lo, iv.hi, need)?;
            }
        }
    }
    Ok(out.changes)
}

/// Both sides of `R − band ≤ ‖x − c‖ ≤ R + band`.
pub fn propagate_sphere_membership(
    s: &SphereMembership,
    bounds: &BoxDomain,
) -> Result<Vec<BoundChange>, Infeasible> {
    let outer = BallContainment {
        point: s.point.clone(),
        center: s.center.clone(),
        radius: RadiusExpr::Constant(s.radius + s.band),
    };
    let mut out = propagate_ball_containment(&outer, bounds)?;
    let inner = s.radius - s.band;
    if inner <= 0.0 {
        return Ok(out);
    }
    let far: Vec<f64> = s
        .point
        .iter()
        .zip(&s.center)
        .map(|(&v, &c)| bounds.get(v).max_abs_diff(&Interval::point(c)))
        .collect();
    let total: f64 = far.iter().map(|f| f * f).sum();
    if total.sqrt() < inner - EPS_BOUND {
        return Err(Infeasible);
    }
    let mut cs = ChangeSet::default();
    for (k, (&v, &c)) in s.point.iter().zip(&s.center).enumerate() {
        let d2 = inner * inner - (total - far[k] * far[k]);
        if d2 <= 0.0 {
            continue;
        }
        let dk = d2.sqrt();
        let iv = bounds.get(v);
        let below_empty = iv.lo > c - dk;
        let above_empty = iv.hi < c + dk;
        if below_empty && above_empty {
            return Err(Infeasible);
        }
        if below_empty {
            cs.lower(v, iv.lo, iv.hi, c + dk)?;
        } else if above_empty {
            cs.upper(v, iv.lo, iv.hi, c - dk)?;
        }
    }
    out.extend(cs.changes);
    Ok(out)
}

fn square_range(iv: Interval) -> (f64, f64) {
    let hi = (iv.lo * iv.lo).max(iv.hi * iv.hi);
    let lo = if iv.lo <= 0.0 && iv.hi >= 0.0 {
        0.0
    } else {
        (iv.lo * iv.lo).min(iv.hi * iv.hi)
    };
    (lo, hi)
}

/// Bounds on `x` from `x² ≥ need`.
fn reverse_square(cs: &mut ChangeSet, v: usize, x: Interval, need: f64) -> Result<(), Infeasible> {
    if need <= 0.0 {
        return Ok(());
    }
    let r = need.sqrt();
    match (x.lo <= -r, x.hi >= r) {
        (false, false) => Err(Infeasible),
        (true, false) => cs.upper(v, x.lo, x.hi, -r),
        (false, true) => cs.lower(v, x.lo, x.hi, r),
        (true, true) => Ok(()),
    }
}

/// Bounds on `x` from `x·w ≤ −m` with `m > 0`.
fn reverse_product(
    cs: &mut ChangeSet,
    v: usize,
    x: Interval,
    w: Interval,
    m: f64,
) -> Result<(), Infeasible> {
    if m <= 0.0 {
        return Ok(());
    }
    if w.lo > 0.0 {
        cs.upper(v, x.lo, x.hi, -m / w.hi)
    } else if w.hi < 0.0 {
        cs.lower(v, x.lo, x.hi, -m / w.lo)
    } else if w.lo == 0.0 && w.hi == 0.0 {
        Err(Infeasible)
    } else {
        Ok(())
    }
}

/// Interval propagation of the constraint written the way a general-purpose
/// solver stores it, `Σ_i (y_i² − 2·y_i·z_i + z_i²) ≥ δ̄²`, with every square
/// and product treated as an independent term.
pub fn propagate_quadratic_fbbt(
    c: &MinDC,
    bounds: &BoxDomain,
) -> Result<Vec<BoundChange>, Infeasible> {
    let d = c.dim();
    if c.vars().any(|v| !bounds.get(v).is_finite()) {
        return Ok(Vec::new());
    }
    let delta = c.delta_lower(bounds);
    let target = delta * delta;
    // Largest value of each term: y², z², −2yz.
    let mut terms = Vec::with_capacity(d);
    for j in 0..d {
        let (y, z) = (bounds.get(c.y_vars[j]), bounds.get(c.z_vars[j]));
        let prods = [y.lo * z.lo, y.lo * z.hi, y.hi * z.lo, y.hi * z.hi];
        let pmin = prods.iter().copied().fold(f64::INFINITY, f64::min);
        terms.push([square_range(y).1, square_range(z).1, -2.0 * pmin]);
    }
    let total: f64 = terms.iter().flatten().sum();
    if total < target - EPS_BOUND {
        return Err(Infeasible);
    }
    let mut cs = ChangeSet::default();
    for (j, t) in terms.iter().enumerate() {
        let (yv, zv) = (c.y_vars[j], c.z_vars[j]);
        let (y, z) = (bounds.get(yv), bounds.get(zv));
        let need = |k: usize| target - (total - t[k]);
        reverse_square(&mut cs, yv, y, need(0))?;
        reverse_square(&mut cs, zv, z, need(1))?;
        let m = need(2) / 2.0;
        reverse_product(&mut cs, yv, y, z, m)?;
        reverse_product(&mut cs, zv, z, y, m)?;
    }
    Ok(cs.changes)
}

fn propagate_link(l: &VarLink, bounds: &BoxDomain) -> Result<Vec<BoundChange>, Infeasible> {
    let src = bounds.get(l.source);
    let dst = bounds.get(l.var);
    let (a, b) = (l.scale * src.lo, l.scale * src.hi);
    let mut cs = ChangeSet::default();
    cs.lower(l.var, dst.lo, dst.hi, a.min(b))?;
    cs.upper(l.var, dst.lo, dst.hi, a.max(b))?;
    if l.scale != 0.0 {
        let (a, b) = (dst.lo / l.scale, dst.hi / l.scale);
        cs.lower(l.source, src.lo, src.hi, a.min(b))?;
        cs.upper(l.source, src.lo, src.hi, a.max(b))?;
    }
    Ok(cs.changes)
}

/// Bounds together with the bookkeeping needed for event-driven
/// propagation: `stamp[v]` is the clock value of the last change to `v`.
pub(crate) struct Tracker<'a> {
    pub bounds: &'a mut BoxDomain,
    stamp: Vec<u64>,
    clock: u64,
    /// Variables that moved since the tracker was created.
    pub changed: Vec<bool>,
}

impl<'a> Tracker<'a> {
    pub fn new(bounds: &'a mut BoxDomain, initially_changed: &[usize]) -> Self {
        let n = bounds.dim();
        let mut stamp = vec![0; n];
        for &v in initially_changed {
            stamp[v] = 1;
        }
        Tracker {
            bounds,
            stamp,
            clock: 1,
            changed: vec![false; n],
        }
    }

    fn apply(&mut self, changes: &[BoundChange], counter: &mut u64) -> Result<bool, Infeasible> {
        let mut any = false;
        for ch in changes {
            if ch.apply(self.bounds)? {
                self.clock += 1;
                self.stamp[ch.var] = self.clock;
                self.changed[ch.var] = true;
                *counter += 1;
                any = true;
            }
        }
        Ok(any)
    }

    fn dirty_since(&self, t: u64, mut vars: impl Iterator<Item = usize>) -> bool {
        vars.any(|v| self.stamp[v] > t)
    }
}

/// Propagation context for one instance: the constraint pair registry is
/// built once and reused at every node.
pub struct Propagator<'a> {
    pub instance: &'a Instance,
    pub settings: &'a Settings,
    pub pairs: Vec<MinDCPair>,
}

impl<'a> Propagator<'a> {
    pub fn new(instance: &'a Instance, settings: &'a Settings) -> Self {
        let pairs = if settings.reductions && settings.pair == 1 {
            register_pairs(&instance.mindcs)
        } else {
            Vec::new()
        };
        Propagator {
            instance,
            settings,
            pairs,
        }
    }

    /// Run rounds until nothing moves by more than `EPS_BOUND` or
    /// `MAX_ROUNDS` is reached. Returns the number of rounds.
    pub(crate) fn run(
        &self,
        tr: &mut Tracker<'_>,
        cuts: &[&LinearCut],
        counters: &mut Counters,
    ) -> Result<usize, Infeasible> {
        let inst = self.instance;
        let set = self.settings;
        let mut mindc_seen = 0u64;
        let mut pair_seen = 0u64;
        let mut rounds = 0;
        while rounds < MAX_ROUNDS {
            rounds += 1;
            let mut any = false;

            for l in &inst.links {
                let ch = propagate_link(l, tr.bounds)?;
                any |= tr.apply(&ch, &mut counters.norm)?;
            }
            for b in &inst.ball_containments {
                let ch = propagate_ball_containment(b, tr.bounds)?;
                any |= tr.apply(&ch, &mut counters.norm)?;
            }
            for s in &inst.sphere_memberships {
                let ch = propagate_sphere_membership(s, tr.bounds)?;
                any |= tr.apply(&ch, &mut counters.norm)?;
            }
            for cut in inst.static_cuts.iter().chain(cuts.iter().copied()) {
                let ch = propagate_linear_cut(cut, tr.bounds)?;
                any |= tr.apply(&ch, &mut counters.linear)?;
            }

            let t0 = mindc_seen;
            mindc_seen = tr.clock;
            for c in &inst.mindcs {
                if !tr.dirty_since(t0, c.vars()) {
                    continue;
                }
                if let Delta::Variable(dv) = c.delta {
                    if let Some(ub) = delta_upper_bound(c, tr.bounds) {
                        let iv = tr.bounds.get(dv);
                        let mut cs = ChangeSet::default();
                        cs.upper(dv, iv.lo, iv.hi, ub)?;
                        any |= tr.apply(&cs.changes, &mut counters.fbbt)?;
                    }
                }
                if !set.reductions {
                    let ch = propagate_quadratic_fbbt(c, tr.bounds)?;
                    any |= tr.apply(&ch, &mut counters.fbbt)?;
                    continue;
                }
                let ch = propagate_prop1(c, tr.bounds)?;
                any |= tr.apply(&ch, &mut counters.prop1)?;
                if set.heur == 0 {
                    for oriented in [c.clone(), c.swapped()] {
                        for axis in 0..oriented.dim() {
                            for side in BoundSide::BOTH {
                                if let Some(ch) =
                                    locatelli_shrink(&oriented, tr.bounds, axis, side)?
                                {
                                    any |= tr.apply(&[ch], &mut counters.locatelli)?;
                                }
                            }
                        }
                    }
                }
            }

            if set.reductions && set.pair == 1 {
                let t0 = pair_seen;
                pair_seen = tr.clock;
                let stamps = &tr.stamp;
                let todo = changed_pairs(&self.pairs, |v| stamps[v] > t0);
                for p in todo {
                    let d = p.dim();
                    for axis in 0..d {
                        for side in BoundSide::BOTH {
                            if !facet_may_be_covered(p, axis, side, tr.bounds) {
                                continue;
                            }
                            if set.heur == 0 && (d == 2 || d == 3) {
                                let Some(cand) = geometric_reduce(p, axis, side, tr.bounds) else {
                                    continue;
                                };
                                if let Some(ch) = validate_slab(p, cand, tr.bounds) {
                                    any |= tr.apply(&[ch], &mut counters.pair_geo)?;
                                }
                            } else if let Some(ch) = bisection_reduce(p, axis, side, tr.bounds) {
                                any |= tr.apply(&[ch], &mut counters.pair_bisect)?;
                            }
                        }
                    }
                }
            }

            if let Some(layout) = &inst.layout {
                if inst.lex.rows && set.lex_rows {
                    let ch = lex_rows_propagate(layout, tr.bounds)?;
                    any |= tr.apply(&ch, &mut counters.lex)?;
                }
                if inst.lex.cols && set.lex_cols {
                    let ch = lex_cols_propagate(layout, tr.bounds)?;
                    any |= tr.apply(&ch, &mut counters.lex)?;
                }
            }

            if !any {
                break;
            }
        }
        Ok(rounds)
    }
}

/// Propagate `bounds` of a node in place. `changed_vars` lists the variables
/// whose domains differ from the parent (every variable at the root); the
/// variables that move here are appended to it.
pub fn propagate_node(
    bounds: &mut BoxDomain,
    changed_vars: &mut Vec<usize>,
    instance: &Instance,
    settings: &Settings,
) -> PropagationStatus {
    let prop = Propagator::new(instance, settings);
    let mut counters = Counters::default();
    let mut tr = Tracker::new(bounds, changed_vars);
    match prop.run(&mut tr, &[], &mut counters) {
        Ok(_) => {
            let moved: Vec<usize> = (0..tr.changed.len()).filter(|&v| tr.changed[v]).collect();
            for v in moved {
                if !changed_vars.contains(&v) {
                    changed_vars.push(v);
                }
            }
            PropagationStatus::Fixpoint
        }
        Err(Infeasible) => PropagationStatus::Infeasible,
    }
}
