//! Brute-force reference checks for reductions and cover tests.
//!
//! Everything here recomputes distances from scratch with plain loops and
//! does not call into the geometry helpers used by the algorithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Ball, BoxDomain, LinearCut};
use crate::single_mindc::{Delta, MinDC};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingPlan {
    pub seed: u64,
    pub samples_per_box: usize,
    pub grid_resolution: usize,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            seed: 0,
            samples_per_box: 10_000,
            grid_resolution: 200,
        }
    }
}

impl SamplingPlan {
    pub fn with_seed(seed: u64) -> Self {
        SamplingPlan {
            seed,
            ..Self::default()
        }
    }
}

/// Slack a point must have to count as a counterexample.
pub const SOUNDNESS_SLACK: f64 = 1e-7;

/// Coordinate in `[lo, hi]`, biased towards the ends.
fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    match rng.gen_range(0..10) {
        0 | 1 => lo,
        2 | 3 => hi,
        _ => rng.gen_range(lo..=hi),
    }
}

fn sample_box(rng: &mut ChaCha8Rng, b: &BoxDomain) -> Vec<f64> {
    b.intervals()
        .iter()
        .map(|iv| draw(rng, iv.lo, iv.hi))
        .collect()
}

/// Smallest `‖y − z‖ − δ̄` over the constraints, with `δ̄` taken from `weak`.
fn min_slack(x: &[f64], constraints: &[MinDC], weak: &BoxDomain) -> f64 {
    let mut worst = f64::INFINITY;
    for c in constraints {
        let mut s = 0.0;
        for k in 0..c.y_vars.len() {
            let d = x[c.y_vars[k]] - x[c.z_vars[k]];
            s += d * d;
        }
        let delta = match c.delta {
            Delta::Constant(v) => v,
            Delta::Variable(v) => weak.intervals()[v].lo,
        };
        worst = worst.min(s.sqrt() - delta);
    }
    worst
}

/// Samples of `before ∖ after` that satisfy every constraint (weakened to the
/// lower bound of a variable `δ` in `before`) with slack above
/// [`SOUNDNESS_SLACK`]. An empty result means no evidence of an unsound
/// reduction.
pub fn reduction_soundness_check(
    before: &BoxDomain,
    after: &BoxDomain,
    constraints: &[MinDC],
    plan: &SamplingPlan,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    // Removed slabs: one variable restricted to the cut-off part.
    let mut slabs = Vec::new();
    for (v, (b, a)) in before.intervals().iter().zip(after.intervals()).enumerate() {
        if a.lo > b.lo {
            slabs.push((v, b.lo, a.lo));
        }
        if a.hi < b.hi {
            slabs.push((v, a.hi, b.hi));
        }
    }
    let mut bad = Vec::new();
    if slabs.is_empty() {
        return bad;
    }
    for k in 0..plan.samples_per_box {
        let (v, lo, hi) = slabs[k % slabs.len()];
        let mut x = sample_box(&mut rng, before);
        // Stay strictly outside the kept interval.
        x[v] = if lo == before.intervals()[v].lo {
            rng.gen_range(lo..hi)
        } else {
            hi - rng.gen_range(0.0..hi - lo)
        };
        if x[v] <= after.intervals()[v].hi && x[v] >= after.intervals()[v].lo {
            continue;
        }
        if min_slack(&x, constraints, before) > SOUNDNESS_SLACK {
            bad.push(x);
        }
    }
    bad
}

/// Samples of `before` that satisfy every weakened constraint with slack
/// above [`SOUNDNESS_SLACK`]; used to check a claim that `before` holds no
/// feasible point.
pub fn infeasibility_soundness_check(
    before: &BoxDomain,
    constraints: &[MinDC],
    plan: &SamplingPlan,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    (0..plan.samples_per_box)
        .map(|_| sample_box(&mut rng, before))
        .filter(|x| min_slack(x, constraints, before) > SOUNDNESS_SLACK)
        .collect()
}

/// Samples of `before` cut off by `cut` that satisfy every weakened
/// constraint with slack above [`SOUNDNESS_SLACK`].
pub fn cut_soundness_check(
    cut: &LinearCut,
    before: &BoxDomain,
    constraints: &[MinDC],
    plan: &SamplingPlan,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut bad = Vec::new();
    let mut kept = 0;
    let mut tries = 0;
    while kept < plan.samples_per_box && tries < 50 * plan.samples_per_box {
        tries += 1;
        let mut x = sample_box(&mut rng, before);
        // Pull the cut variables towards the violated side half of the time.
        if rng.gen_bool(0.5) {
            for &(v, a) in &cut.coefs {
                let iv = before.intervals()[v];
                let end = if a > 0.0 { iv.lo } else { iv.hi };
                let t: f64 = rng.gen_range(0.0..1.0);
                x[v] = end + t * t * (x[v] - end);
            }
        }
        let act: f64 = cut.coefs.iter().map(|&(v, a)| a * x[v]).sum();
        if act >= cut.rhs {
            continue;
        }
        kept += 1;
        if min_slack(&x, constraints, before) > SOUNDNESS_SLACK {
            bad.push(x);
        }
    }
    bad
}

/// Result of testing a regular grid over a box against a union of balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridReport {
    pub covered: bool,
    /// Some grid point is within `near` of a sphere boundary.
    pub near_boundary: bool,
}

/// Calls `f` on every point of a `resolution`-per-axis grid over `dp`
/// (endpoints included; degenerate axes contribute one value).
fn for_each_grid_point(dp: &BoxDomain, resolution: usize, mut f: impl FnMut(&[f64])) {
    let d = dp.dim();
    let res = resolution.max(2);
    let axes: Vec<Vec<f64>> = dp
        .intervals()
        .iter()
        .map(|iv| {
            if iv.hi <= iv.lo {
                vec![iv.lo]
            } else {
                (0..res)
                    .map(|k| iv.lo + (iv.hi - iv.lo) * k as f64 / (res - 1) as f64)
                    .collect()
            }
        })
        .collect();
    let mut idx = vec![0usize; d];
    let mut point = vec![0.0; d];
    loop {
        for k in 0..d {
            point[k] = axes[k][idx[k]];
        }
        f(&point);
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == d {
                return;
            }
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `(inside the open ball, within near of its sphere)`.
fn ball_status(point: &[f64], center: &[f64], radius: f64, near: f64) -> (bool, bool) {
    let mut s = 0.0;
    for k in 0..point.len() {
        let t = point[k] - center[k];
        s += t * t;
    }
    let lo = (radius - near).max(0.0);
    let hi = radius + near;
    (s < radius * radius - 1e-9, lo * lo <= s && s <= hi * hi)
}

/// Every point of a `resolution`-per-axis grid over `dp` (endpoints
/// included) lies in some open ball.
pub fn grid_cover_report(
    dp: &BoxDomain,
    balls: &[Ball],
    resolution: usize,
    near: f64,
) -> GridReport {
    let mut rep = GridReport {
        covered: true,
        near_boundary: false,
    };
    for_each_grid_point(dp, resolution, |x| {
        let mut inside = false;
        for b in balls {
            let (i, n) = ball_status(x, &b.center, b.radius, near);
            inside |= i;
            rep.near_boundary |= n;
        }
        rep.covered &= inside;
    });
    rep
}

pub fn grid_cover_check(dp: &BoxDomain, balls: &[Ball], resolution: usize) -> bool {
    grid_cover_report(dp, balls, resolution, 0.0).covered
}

fn corners(b: &BoxDomain) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for iv in b.intervals() {
        let ends: &[f64] = if iv.hi > iv.lo {
            &[iv.lo, iv.hi]
        } else {
            &[iv.lo]
        };
        out = out
            .into_iter()
            .flat_map(|p| {
                ends.iter().map(move |&e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    out
}

/// Grid analogue of the pair cover test: for every vertex pair `(p, q)` the
/// grid over `dp` lies in `B_{δ1}(p) ∪ B_{δ2}(q)`. A point is covered for all
/// pairs exactly when it is inside every `B_{δ1}(p)` or inside every
/// `B_{δ2}(q)`, which is what is tested per grid point.
pub fn grid_pair_cover_report(
    dp: &BoxDomain,
    dz1: &BoxDomain,
    dz2: &BoxDomain,
    d1: f64,
    d2: f64,
    resolution: usize,
    near: f64,
) -> GridReport {
    let (v1, v2) = (corners(dz1), corners(dz2));
    let mut rep = GridReport {
        covered: true,
        near_boundary: false,
    };
    for_each_grid_point(dp, resolution, |x| {
        let mut all = |vs: &[Vec<f64>], r: f64| {
            let mut inside = true;
            for v in vs {
                let (i, n) = ball_status(x, v, r, near);
                inside &= i;
                rep.near_boundary |= n;
            }
            inside
        };
        let in1 = all(&v1, d1);
        let in2 = all(&v2, d2);
        rep.covered &= in1 || in2;
    });
    rep
}

/// Optimal radius for `n` points on a circle of radius 2: `2 sin(π/n)`.
pub fn kissing_optimum_2d(n: usize) -> f64 {
    assert!(n >= 2);
    2.0 * (std::f64::consts::PI / n as f64).sin()
}

/// `n ≤ 6` equal circles in the unit disk, centers on a concentric ring:
/// `sin(π/n) / (1 + sin(π/n))`.
pub fn pack_in_sphere_ring_2d(n: usize) -> f64 {
    assert!((2..=6).contains(&n));
    let s = (std::f64::consts::PI / n as f64).sin();
    s / (1.0 + s)
}

/// Two spheres in the unit cube placed on the main diagonal, maximizing the
/// radius over `steps` positions.
pub fn pack_in_box_diagonal_oracle(dim: usize, steps: usize) -> f64 {
    let sd = (dim as f64).sqrt();
    (0..=steps)
        .map(|k| {
            let t = 0.5 * k as f64 / steps as f64;
            t.min(sd * (1.0 - 2.0 * t) / 2.0)
        })
        .fold(0.0, f64::max)
}

/// Half the best minimum distance of `n` points on the sphere of radius 2
/// found by random restarts and shrinking perturbations.
pub fn spherical_code_oracle(
    n: usize,
    dim: usize,
    seed: u64,
    restarts: usize,
    iters: usize,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normalize = |v: &mut Vec<f64>| {
        let s = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a *= 2.0 / s);
    };
    let score = |pts: &[Vec<f64>]| {
        let mut m = f64::INFINITY;
        for i in 0..pts.len() {
            for k in i + 1..pts.len() {
                let s: f64 = pts[i]
                    .iter()
                    .zip(&pts[k])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                m = m.min(s.sqrt());
            }
        }
        m
    };
    let mut best = 0.0f64;
    for _ in 0..restarts {
        let mut pts: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                normalize(&mut v);
                v
            })
            .collect();
        let mut cur = score(&pts);
        let mut step = 0.5;
        for _ in 0..iters {
            let i = rng.gen_range(0..n);
            let old = pts[i].clone();
            for a in pts[i].iter_mut() {
                *a += rng.gen_range(-step..step);
            }
            normalize(&mut pts[i]);
            let s = score(&pts);
            if s >= cur {
                cur = s;
            } else {
                pts[i] = old;
                step = (step * 0.999).max(1e-7);
            }
        }
        best = best.max(cur);
    }
    best / 2.0
}
