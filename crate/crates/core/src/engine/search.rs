use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{BoxDomain, Interval, LinearCut};
use crate::single_mindc::{simplex_cut, Delta};
use crate::symmetry::separate_rotation_cut_specs;
use crate::tolerances::{FEAS_TOL, MIN_BRANCH_WIDTH};

use super::instance::{norm_to, Instance};
use super::propagate::{Propagator, Tracker};
use super::settings::{relative_gap, Counters, Settings, SolveResult, SolveStatus};

/// Cuts valid only below the node that produced them.
#[derive(Debug)]
pub struct LocalCuts {
    pub cut: LinearCut,
    pub parent: Option<Arc<LocalCuts>>,
}

fn chain_iter(mut c: Option<&Arc<LocalCuts>>) -> impl Iterator<Item = &LinearCut> {
    std::iter::from_fn(move || {
        let node = c?;
        c = node.parent.as_ref();
        Some(&node.cut)
    })
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub bounds: BoxDomain,
    pub depth: u32,
    pub changed_vars: Vec<usize>,
    /// Upper bound of the objective variable.
    pub local_upper: f64,
    pub local_cuts: Option<Arc<LocalCuts>>,
    pub id: u64,
}

impl SearchNode {
    pub fn root(instance: &Instance) -> Self {
        SearchNode {
            bounds: instance.var_bounds.clone(),
            depth: 0,
            changed_vars: (0..instance.num_vars).collect(),
            local_upper: instance.var_bounds.hi(instance.objective_var),
            local_cuts: None,
            id: 0,
        }
    }
}

struct Queued(SearchNode);

impl PartialEq for Queued {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Queued {
    // Largest bound first, then deepest, then oldest.
    fn cmp(&self, o: &Self) -> Ordering {
        self.0
            .local_upper
            .total_cmp(&o.0.local_upper)
            .then(self.0.depth.cmp(&o.0.depth))
            .then(o.0.id.cmp(&self.0.id))
    }
}

/// Variables eligible for branching: the point matrix when there is one,
/// otherwise everything except the objective and linked variables.
pub fn branch_candidates(instance: &Instance) -> Vec<usize> {
    match &instance.layout {
        Some(l) => l.vars.clone(),
        None => (0..instance.num_vars)
            .filter(|&v| v != instance.objective_var && !instance.is_linked(v))
            .collect(),
    }
}

/// Widest candidate relative to its root width (smallest index on ties),
/// or `None` when every candidate is narrower than `MIN_BRANCH_WIDTH`.
pub fn select_branch_var(
    bounds: &BoxDomain,
    root: &BoxDomain,
    candidates: &[usize],
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &v in candidates {
        let w = bounds.get(v).width();
        let rw = root.get(v).width();
        if !(w >= MIN_BRANCH_WIDTH) || !(rw > 0.0) || !w.is_finite() {
            continue;
        }
        let rel = w / rw;
        match best {
            Some((bv, br)) if rel < br || (rel == br && v > bv) => {}
            _ => best = Some((v, rel)),
        }
    }
    best.map(|(v, _)| v)
}

/// Split at the midpoint of the selected variable.
pub fn branch(
    node: &SearchNode,
    root: &BoxDomain,
    candidates: &[usize],
    next_id: &mut u64,
) -> Option<(SearchNode, SearchNode)> {
    let v = select_branch_var(&node.bounds, root, candidates)?;
    let iv = node.bounds.get(v);
    let mid = iv.mid();
    let mut make = |piece: Interval| {
        let mut b = node.bounds.clone();
        b.set(v, piece);
        *next_id += 1;
        SearchNode {
            bounds: b,
            depth: node.depth + 1,
            changed_vars: vec![v],
            local_upper: node.local_upper,
            local_cuts: node.local_cuts.clone(),
            id: *next_id,
        }
    };
    let left = make(Interval::new(iv.lo, mid));
    let right = make(Interval::new(mid, iv.hi));
    Some((left, right))
}

const REPAIR_SWEEPS: usize = 200;

/// Variables the repair heuristic may move.
fn movable(instance: &Instance) -> Vec<bool> {
    (0..instance.num_vars)
        .map(|v| {
            v != instance.objective_var
                && !instance.is_linked(v)
                && instance.var_bounds.get(v).width() > 0.0
        })
        .collect()
}

fn set_objective(instance: &Instance, x: &mut [f64], value: f64) {
    x[instance.objective_var] = value;
    for l in &instance.links {
        x[l.var] = l.scale * x[l.source];
    }
}

fn unit_dir(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

/// Push violated pairs apart and project back into the containers, with the
/// objective held at its current value in `x`.
fn repair(instance: &Instance, x: &mut [f64], mov: &[bool], rng: &mut ChaCha8Rng) -> bool {
    let root = &instance.var_bounds;
    for _ in 0..REPAIR_SWEEPS {
        for c in &instance.mindcs {
            let delta = match c.delta {
                Delta::Constant(v) => v,
                Delta::Variable(v) => x[v],
            };
            let diff: Vec<f64> = c
                .y_vars
                .iter()
                .zip(&c.z_vars)
                .map(|(&a, &b)| x[a] - x[b])
                .collect();
            let d = diff.iter().map(|a| a * a).sum::<f64>().sqrt();
            if d >= delta {
                continue;
            }
            let dir = if d > 1e-12 {
                diff.iter().map(|a| a / d).collect()
            } else {
                unit_dir(rng, diff.len())
            };
            let push = (delta - d) * (1.0 + 1e-9) + 1e-12;
            let my = c.y_vars.iter().all(|&v| mov[v]);
            let mz = c.z_vars.iter().all(|&v| mov[v]);
            let (fy, fz) = match (my, mz) {
                (true, true) => (0.5, 0.5),
                (true, false) => (1.0, 0.0),
                (false, true) => (0.0, 1.0),
                (false, false) => continue,
            };
            for (k, u) in dir.iter().enumerate() {
                x[c.y_vars[k]] += fy * push * u;
                x[c.z_vars[k]] -= fz * push * u;
            }
        }
        for b in &instance.ball_containments {
            if !b.point.iter().all(|&v| mov[v]) {
                continue;
            }
            let r = b.radius.eval(x).max(0.0);
            let d = norm_to(x, &b.point, &b.center);
            if d > r {
                for (&v, &c) in b.point.iter().zip(&b.center) {
                    x[v] = c + (x[v] - c) * r / d;
                }
            }
        }
        for s in &instance.sphere_memberships {
            if !s.point.iter().all(|&v| mov[v]) {
                continue;
            }
            let d = norm_to(x, &s.point, &s.center);
            if (d - s.radius).abs() <= s.band {
                continue;
            }
            let dir = if d > 1e-12 {
                s.point
                    .iter()
                    .zip(&s.center)
                    .map(|(&v, &c)| (x[v] - c) / d)
                    .collect()
            } else {
                unit_dir(rng, s.point.len())
            };
            for ((&v, &c), u) in s.point.iter().zip(&s.center).zip(dir) {
                x[v] = c + s.radius * u;
            }
        }
        for cut in &instance.static_cuts {
            let viol = cut.violation(x);
            if viol <= 0.0 {
                continue;
            }
            let norm2: f64 = cut
                .coefs
                .iter()
                .filter(|(v, _)| mov[*v])
                .map(|(_, a)| a * a)
                .sum();
            if norm2 <= 0.0 {
                continue;
            }
            let step = viol * (1.0 + 1e-9) / norm2;
            for &(v, a) in &cut.coefs {
                if mov[v] {
                    x[v] += step * a;
                }
            }
        }
        for v in 0..x.len() {
            if mov[v] {
                x[v] = x[v].clamp(root.lo(v), root.hi(v));
            }
        }
        if instance.max_violation(x) <= 1e-9 {
            return true;
        }
    }
    instance.max_violation(x) <= FEAS_TOL
}

/// Largest objective value for the point configuration in `x`.
fn best_objective(instance: &Instance, x: &mut [f64]) -> Option<f64> {
    let ob = instance.objective_var;
    let (lo, hi) = (instance.var_bounds.lo(ob), instance.var_bounds.hi(ob));
    set_objective(instance, x, lo);
    let base = instance.max_violation(x);
    if base > FEAS_TOL {
        return None;
    }
    let ok = |x: &mut [f64], t: f64| {
        set_objective(instance, x, t);
        instance.max_violation(x) <= base.max(1e-12)
    };
    let (mut a, mut b) = (lo, hi);
    if ok(x, b) {
        a = b;
    } else {
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if ok(x, m) {
                a = m;
            } else {
                b = m;
            }
        }
    }
    set_objective(instance, x, a);
    Some(a)
}

/// Midpoint of the node box repaired towards the given objective targets;
/// returns the best feasible `(value, point)` found.
pub(crate) fn incumbent_search(
    node: &SearchNode,
    instance: &Instance,
    targets: &[f64],
    rng: &mut ChaCha8Rng,
) -> Option<(f64, Vec<f64>)> {
    let mov = movable(instance);
    let mid = node.bounds.midpoint();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for &t in targets {
        let mut x = mid.clone();
        set_objective(instance, &mut x, t);
        repair(instance, &mut x, &mov, rng);
        if let Some(v) = best_objective(instance, &mut x) {
            if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
                best = Some((v, x));
            }
        }
    }
    best
}

/// One repair attempt from the node midpoint aimed at the node's objective
/// upper bound.
pub fn incumbent_try(node: &SearchNode, instance: &Instance, seed: u64) -> Option<(f64, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ node.id.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let t = node.bounds.hi(instance.objective_var);
    incumbent_search(node, instance, &[t], &mut rng)
}

const ROTATION_ROUNDS: usize = 5;
const POOL_CAP: usize = 2000;

fn same_cut(a: &LinearCut, b: &LinearCut) -> bool {
    a.coefs.len() == b.coefs.len()
        && (a.rhs - b.rhs).abs() <= 1e-12
        && a.coefs
            .iter()
            .zip(&b.coefs)
            .all(|(p, q)| p.0 == q.0 && (p.1 - q.1).abs() <= 1e-9)
}

/// Why a node left the search without being branched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneReason {
    /// Propagation or separation proved the box empty.
    Infeasible,
    /// Its upper bound does not exceed the incumbent.
    Bound,
}

/// Progress reported to an observer of [`solve_with_observer`].
#[derive(Debug, Clone, Copy)]
pub enum SearchEvent<'e> {
    /// Emitted before each node is selected.
    Progress {
        nodes: u64,
        dual_bound: f64,
        incumbent: Option<f64>,
    },
    /// `bounds` is the box the node had when it was created.
    Pruned {
        bounds: &'e BoxDomain,
        reason: PruneReason,
        incumbent: Option<f64>,
    },
}

type Observer<'o> = &'o mut dyn FnMut(SearchEvent<'_>);

struct Search<'a> {
    inst: &'a Instance,
    set: &'a Settings,
    prop: Propagator<'a>,
    candidates: Vec<usize>,
    pool: Vec<LinearCut>,
    counters: Counters,
    cuts_added: u64,
    incumbent: Option<(f64, Vec<f64>)>,
    rng: ChaCha8Rng,
    next_id: u64,
}

enum Processed {
    Pruned(PruneReason),
    Leaf(f64),
    Branched(SearchNode, SearchNode),
}

impl<'a> Search<'a> {
    fn incumbent_value(&self) -> Option<f64> {
        self.incumbent.as_ref().map(|(v, _)| *v)
    }

    fn offer(&mut self, cand: Option<(f64, Vec<f64>)>) {
        if let Some((v, x)) = cand {
            if self.incumbent_value().map_or(true, |b| v > b) {
                log::debug!("incumbent {v:.9}");
                self.incumbent = Some((v, x));
            }
        }
    }

    fn propagate(&mut self, node: &mut SearchNode, changed: &[usize]) -> bool {
        let ob = self.inst.objective_var;
        if let Some(inc) = self.incumbent_value() {
            let iv = node.bounds.get(ob);
            if inc > iv.hi {
                return false;
            }
            if inc > iv.lo {
                node.bounds.set(ob, Interval::new(inc, iv.hi));
            }
        }
        let local: Vec<LinearCut> = chain_iter(node.local_cuts.as_ref()).cloned().collect();
        let cuts: Vec<&LinearCut> = self.pool.iter().chain(local.iter()).collect();
        let mut changed = changed.to_vec();
        changed.push(ob);
        let mut tr = Tracker::new(&mut node.bounds, &changed);
        let ok = self.prop.run(&mut tr, &cuts, &mut self.counters).is_ok();
        node.local_upper = node.bounds.hi(ob);
        ok
    }

    fn push_local(node: &mut SearchNode, cut: LinearCut) {
        node.local_cuts = Some(Arc::new(LocalCuts {
            cut,
            parent: node.local_cuts.take(),
        }));
    }

    fn separate(&mut self, node: &mut SearchNode) -> bool {
        let mut changed_vars = Vec::new();
        if self.set.rotsym && self.inst.lex.rot {
            if let Some(layout) = &self.inst.layout {
                for _ in 0..ROTATION_ROUNDS {
                    let point = node.bounds.midpoint();
                    let found = separate_rotation_cut_specs(layout, &point, &node.bounds);
                    let mut added = false;
                    for (spec, cut) in found {
                        let dup = |c: &LinearCut| same_cut(c, &cut);
                        if spec.row == 0 {
                            if self.pool.len() >= POOL_CAP || self.pool.iter().any(dup) {
                                continue;
                            }
                            changed_vars.extend(cut.coefs.iter().map(|c| c.0));
                            self.pool.push(cut);
                        } else {
                            if chain_iter(node.local_cuts.as_ref()).any(dup) {
                                continue;
                            }
                            changed_vars.extend(cut.coefs.iter().map(|c| c.0));
                            Self::push_local(node, cut);
                        }
                        added = true;
                        self.counters.rotation_cuts += 1;
                        self.cuts_added += 1;
                    }
                    if !added {
                        break;
                    }
                    if !self.propagate(node, &changed_vars) {
                        return false;
                    }
                    changed_vars.clear();
                }
            }
        }
        if self.set.cutfreq > 0 && node.depth % self.set.cutfreq == 0 {
            let mut added = false;
            for c in &self.inst.mindcs {
                for oriented in [c.clone(), c.swapped()] {
                    let dy = node.bounds.view(&oriented.y_vars);
                    let verts: Vec<_> = dy.vertex_masks().map(|m| dy.vertex(m)).collect();
                    for v in verts {
                        if let Some(cut) = simplex_cut(&v, &oriented, &node.bounds) {
                            changed_vars.extend(cut.coefs.iter().map(|c| c.0));
                            Self::push_local(node, cut);
                            self.counters.simplex_cuts += 1;
                            self.cuts_added += 1;
                            added = true;
                        }
                    }
                }
            }
            if added && !self.propagate(node, &changed_vars) {
                return false;
            }
        }
        true
    }

    fn try_incumbent(&mut self, node: &SearchNode) {
        let ob = self.inst.objective_var;
        let hi = node.bounds.hi(ob);
        let lo = self
            .incumbent_value()
            .unwrap_or(node.bounds.lo(ob))
            .max(node.bounds.lo(ob));
        let targets = [hi, 0.5 * (hi + lo)];
        let found = incumbent_search(node, self.inst, &targets, &mut self.rng);
        self.offer(found);
    }

    fn process(&mut self, mut node: SearchNode, count: u64) -> Processed {
        let changed = std::mem::take(&mut node.changed_vars);
        if !self.propagate(&mut node, &changed) || !self.separate(&mut node) {
            return Processed::Pruned(PruneReason::Infeasible);
        }
        if self
            .incumbent_value()
            .is_some_and(|v| node.local_upper <= v)
        {
            return Processed::Pruned(PruneReason::Bound);
        }
        let leaf =
            select_branch_var(&node.bounds, &self.inst.var_bounds, &self.candidates).is_none();
        if leaf || count % 10 == 0 || self.incumbent.is_none() {
            self.try_incumbent(&node);
        }
        if self
            .incumbent_value()
            .is_some_and(|v| node.local_upper <= v)
        {
            return Processed::Pruned(PruneReason::Bound);
        }
        match branch(
            &node,
            &self.inst.var_bounds,
            &self.candidates,
            &mut self.next_id,
        ) {
            Some((a, b)) => Processed::Branched(a, b),
            None => Processed::Leaf(node.local_upper),
        }
    }
}

pub fn solve(instance: &Instance, settings: &Settings) -> SolveResult {
    run(instance, settings, None)
}

/// [`solve`], reporting progress and every pruned node to `observer`.
pub fn solve_with_observer(
    instance: &Instance,
    settings: &Settings,
    observer: &mut dyn FnMut(SearchEvent<'_>),
) -> SolveResult {
    run(instance, settings, Some(observer))
}

fn run(
    instance: &Instance,
    settings: &Settings,
    mut observer: Option<Observer<'_>>,
) -> SolveResult {
    let start = Instant::now();
    let mut s = Search {
        inst: instance,
        set: settings,
        prop: Propagator::new(instance, settings),
        candidates: branch_candidates(instance),
        pool: Vec::new(),
        counters: Counters::default(),
        cuts_added: 0,
        incumbent: None,
        rng: ChaCha8Rng::seed_from_u64(settings.seed),
        next_id: 0,
    };
    let mut heap = BinaryHeap::new();
    heap.push(Queued(SearchNode::root(instance)));
    let mut nodes = 0u64;
    let mut leaf_bound = f64::NEG_INFINITY;
    let status;

    let dual_of = |heap: &BinaryHeap<Queued>, leaf: f64, inc: Option<f64>| {
        let open = heap.peek().map_or(f64::NEG_INFINITY, |q| q.0.local_upper);
        let d = open.max(leaf);
        match inc {
            Some(v) => d.max(v),
            None => d,
        }
    };

    loop {
        let inc = s.incumbent_value();
        let dual = dual_of(&heap, leaf_bound, inc);
        if let Some(obs) = observer.as_mut() {
            obs(SearchEvent::Progress {
                nodes,
                dual_bound: dual,
                incumbent: inc,
            });
        }
        if heap.is_empty() {
            status = if inc.is_some() {
                if leaf_bound > inc.unwrap() && relative_gap(dual, inc) > settings.gap {
                    SolveStatus::GapReached
                } else {
                    SolveStatus::Optimal
                }
            } else {
                SolveStatus::Infeasible
            };
            break;
        }
        if inc.is_some() && relative_gap(dual, inc) <= settings.gap {
            status = SolveStatus::GapReached;
            break;
        }
        if nodes >= settings.node_limit {
            status = SolveStatus::NodeLimit;
            break;
        }
        if start.elapsed().as_secs_f64() >= settings.time_limit {
            status = SolveStatus::TimeLimit;
            break;
        }
        let Queued(node) = heap.pop().unwrap();
        if inc.is_some_and(|v| node.local_upper <= v) {
            if let Some(obs) = observer.as_mut() {
                obs(SearchEvent::Pruned {
                    bounds: &node.bounds,
                    reason: PruneReason::Bound,
                    incumbent: inc,
                });
            }
            continue;
        }
        nodes += 1;
        let entry = observer.as_ref().map(|_| node.bounds.clone());
        match s.process(node, nodes) {
            Processed::Pruned(reason) => {
                if let (Some(obs), Some(b)) = (observer.as_mut(), entry.as_ref()) {
                    obs(SearchEvent::Pruned {
                        bounds: b,
                        reason,
                        incumbent: s.incumbent_value(),
                    });
                }
            }
            Processed::Leaf(ub) => leaf_bound = leaf_bound.max(ub),
            Processed::Branched(a, b) => {
                heap.push(Queued(a));
                heap.push(Queued(b));
            }
        }
    }

    let inc = s.incumbent_value();
    let mut dual = dual_of(&heap, leaf_bound, inc);
    if status == SolveStatus::Optimal {
        dual = inc.unwrap();
    }
    let gap = relative_gap(dual, inc);
    let (incumbent_value, incumbent_point) = match s.incumbent {
        Some((v, x)) => (Some(v), Some(x)),
        None => (None, None),
    };
    SolveResult {
        status,
        incumbent_value,
        incumbent_point,
        dual_bound: dual,
        gap,
        nodes,
        time: start.elapsed().as_secs_f64(),
        cuts_added: s.cuts_added,
        reductions_by_algorithm: s.counters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{build_kissing, build_pack_in_sphere, SymmetryFlags};

    #[test]
    fn two_in_sphere() {
        let inst = build_pack_in_sphere(2, 2, SymmetryFlags::default());
        let r = solve(&inst, &Settings::default());
        assert!(matches!(
            r.status,
            SolveStatus::GapReached | SolveStatus::Optimal
        ));
        let v = r.incumbent_value.unwrap();
        assert!((v - 0.5).abs() <= 0.005 * 0.5, "{v}");
        assert!(r.dual_bound >= 0.5 - 1e-9);
        assert!(inst.max_violation(r.incumbent_point.as_ref().unwrap()) <= FEAS_TOL);
    }

    #[test]
    fn kissing_radius_forced_too_high() {
        let mut inst = build_kissing(6, 2, SymmetryFlags::default());
        let r = inst.objective_var;
        inst.var_bounds.set(r, Interval::new(1.05, 2.0));
        let res = solve(&inst, &Settings::default());
        assert_eq!(res.status, SolveStatus::Infeasible);
        assert!(res.incumbent_value.is_none());
    }

    #[test]
    fn zero_node_limit() {
        let inst = build_pack_in_sphere(3, 2, SymmetryFlags::default());
        let s = Settings {
            node_limit: 0,
            ..Settings::default()
        };
        let res = solve(&inst, &s);
        assert_eq!(res.status, SolveStatus::NodeLimit);
        assert_eq!(res.nodes, 0);
        assert_eq!(res.dual_bound, 1.0);
    }

    #[test]
    fn branching_rule() {
        let root = BoxDomain::from_bounds(&[(0.0, 4.0), (0.0, 4.0), (0.0, 4.0)]);
        let b = BoxDomain::from_bounds(&[(0.0, 2.0), (0.0, 0.5), (1.0, 2.0)]);
        assert_eq!(select_branch_var(&b, &root, &[0, 1, 2]), Some(0));
        let b = BoxDomain::from_bounds(&[(0.0, 1.0), (0.0, 1.0), (1.0, 2.0)]);
        assert_eq!(select_branch_var(&b, &root, &[2, 1, 0]), Some(0));
        let tiny = BoxDomain::from_bounds(&[(0.0, 1e-7), (0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(select_branch_var(&tiny, &root, &[0, 1, 2]), None);
    }

    #[test]
    fn repair_separates_coincident_points() {
        let inst = build_pack_in_sphere(2, 2, SymmetryFlags::default());
        let mut node = SearchNode::root(&inst);
        // Both points pinned near the origin, radius target 0.5.
        for v in 0..4 {
            node.bounds.set(v, Interval::new(-1e-3, 1e-3));
        }
        node.bounds.set(inst.objective_var, Interval::new(0.0, 0.5));
        let (v, x) = incumbent_try(&node, &inst, 3).unwrap();
        assert!(v > 0.5 - 1e-6, "{v}");
        let d = ((x[0] - x[2]).powi(2) + (x[1] - x[3]).powi(2)).sqrt();
        assert!((d - 1.0).abs() < 1e-5);
    }

    #[test]
    fn feasible_midpoint_is_kept() {
        let inst = build_pack_in_sphere(2, 1, SymmetryFlags::default());
        let mut node = SearchNode::root(&inst);
        node.bounds.set(0, Interval::point(0.5));
        node.bounds.set(1, Interval::point(-0.5));
        node.bounds.set(inst.objective_var, Interval::new(0.0, 0.5));
        let (v, x) = incumbent_try(&node, &inst, 0).unwrap();
        assert_eq!(&x[..2], &[0.5, -0.5]);
        assert!((v - 0.5).abs() < 1e-9);
    }
}
