//! Acceptance checks for the solver and the experiment driver. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any criterion fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use mindc_cli::{
    profile_data, read_records, run_suite, settings_grid, InstanceSource, Metric, SuiteSpec,
    RECORD_HEADER,
};
use mindc_core::engine::{solve, Settings, SolveResult, STANDARD_SETTINGS};
use mindc_core::geometry::box_vertices;
use mindc_core::instances::{ProblemKind, ProblemSpec};
use mindc_core::oracle::{
    cut_soundness_check, grid_pair_cover_report, infeasibility_soundness_check, kissing_optimum_2d,
    pack_in_sphere_ring_2d, reduction_soundness_check, SamplingPlan,
};
use mindc_core::pair_mindc::{
    bisection_reduce, geometric_reduce, pair_cover_check_boxes, validate_slab,
};
use mindc_core::single_mindc::{locatelli_shrink, propagate_prop1, simplex_cut};
use mindc_core::symmetry::{alpha_star, separate_rotation_cut_specs};
use mindc_core::tolerances::EPS_BOUND;
use mindc_core::{
    BoundChange, BoundSide, BoxDomain, Delta, Infeasible, Interval, MinDC, MinDCPair,
    PointMatrixLayout, Side,
};

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check {
        pass,
        detail: detail.into(),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 9] = [
        ("reduction soundness", Duration::from_secs(300), soundness),
        (
            "1-D facet shrink closed form",
            Duration::from_secs(1),
            locatelli_1d,
        ),
        (
            "pair cover test vs grid",
            Duration::from_secs(120),
            pair_cover_vs_grid,
        ),
        (
            "pair reduction beyond single shrink",
            Duration::from_secs(1),
            pair_premise,
        ),
        (
            "solver reproductions",
            Duration::from_secs(3000),
            reproductions,
        ),
        (
            "rotation symmetry node counts",
            Duration::from_secs(1200),
            rotation_effect,
        ),
        (
            "rotation cut properties",
            Duration::from_secs(60),
            rotation_properties,
        ),
        ("determinism", Duration::from_secs(3600), determinism),
        ("cli end to end", Duration::from_secs(600), cli_end_to_end),
    ];
    let mut failed = 0;
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let mut c = f();
        let el = t0.elapsed();
        if el > *budget {
            c.pass = false;
            c.detail
                .push_str(&format!("; over the {}s budget", budget.as_secs()));
        }
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {} [{tag}] {name}: {} ({:.2}s)",
            k + 1,
            c.detail,
            el.as_secs_f64()
        );
        failed += usize::from(!c.pass);
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    } else {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    }
}

fn apply_all(b: &BoxDomain, ch: &[BoundChange]) -> Result<BoxDomain, Infeasible> {
    let mut out = b.clone();
    for c in ch {
        c.apply(&mut out)?;
    }
    Ok(out)
}

fn around(center: f64, half: f64) -> (f64, f64) {
    (center - half, center + half)
}

/// `y` in `0..d`, `z` in `d..2d`, a variable `δ` (if any) in `2d`.
fn random_single(rng: &mut ChaCha8Rng, d: usize) -> (MinDC, BoxDomain) {
    let mut iv = Vec::with_capacity(2 * d + 1);
    let zc: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let singleton_z = rng.gen_bool(0.2);
    let mut zs = Vec::new();
    for &c in &zc {
        let h = if singleton_z {
            0.0
        } else {
            rng.gen_range(0.0..0.5)
        };
        zs.push(around(c, h));
    }
    for &c in &zc {
        let off = rng.gen_range(-1.5..1.5);
        let h = rng.gen_range(0.05..1.5);
        iv.push(around(c + off, h));
    }
    iv.extend(zs);
    let lo = rng.gen_range(0.3..2.5);
    let delta = if rng.gen_bool(0.3) {
        iv.push((lo, lo + rng.gen_range(0.0..1.0)));
        Delta::Variable(2 * d)
    } else {
        iv.push((0.0, 0.0));
        Delta::Constant(lo)
    };
    let y: Vec<usize> = (0..d).collect();
    let z: Vec<usize> = (d..2 * d).collect();
    (MinDC::new(y, z, delta), BoxDomain::from_bounds(&iv))
}

/// `y` in `0..d`, `z¹` in `d..2d`, `z²` in `2d..3d`; both constraints share `y`.
fn random_pair(rng: &mut ChaCha8Rng, d: usize) -> (MinDCPair, BoxDomain) {
    let mut iv: Vec<(f64, f64)> = (0..d).map(|_| (0.0, rng.gen_range(0.5..3.0))).collect();
    for _ in 0..2 {
        let single = rng.gen_bool(0.3);
        for k in 0..d {
            let c = rng.gen_range(-1.0..iv[k].1 + 1.0);
            let h = if single { 0.0 } else { rng.gen_range(0.0..0.4) };
            iv.push(around(c, h));
        }
    }
    let y: Vec<usize> = (0..d).collect();
    let c1 = MinDC::new(
        y.clone(),
        (d..2 * d).collect(),
        Delta::Constant(rng.gen_range(1.0..3.0)),
    );
    let c2 = MinDC::new(
        y,
        (2 * d..3 * d).collect(),
        Delta::Constant(rng.gen_range(1.0..3.0)),
    );
    (
        MinDCPair::new((0, 1), c1, c2, (Side::Y, Side::Y)),
        BoxDomain::from_bounds(&iv),
    )
}

#[derive(Default)]
struct Tally {
    checked: [usize; 6],
    bad: usize,
}

const KINDS: [&str; 6] = [
    "prop1",
    "shrink",
    "simplex",
    "bisect",
    "geometric",
    "infeasible",
];

impl Tally {
    fn record(&mut self, kind: usize, counterexamples: usize) {
        self.checked[kind] += 1;
        self.bad += counterexamples;
    }
}

fn soundness() -> Check {
    let mut t = Tally::default();
    let plan = |seed| SamplingPlan {
        seed,
        samples_per_box: 1000,
        grid_resolution: 0,
    };
    for d in 1..=5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + d as u64);
        for i in 0..500 {
            let (c, b) = random_single(&mut rng, d);
            let cs = [c.clone()];
            let p = plan(i);
            match propagate_prop1(&c, &b).and_then(|ch| apply_all(&b, &ch)) {
                Ok(after) if after != b => {
                    t.record(0, reduction_soundness_check(&b, &after, &cs, &p).len())
                }
                Ok(_) => {}
                Err(Infeasible) => t.record(5, infeasibility_soundness_check(&b, &cs, &p).len()),
            }
            for o in [c.clone(), c.swapped()] {
                for axis in 0..d {
                    for side in [BoundSide::Lower, BoundSide::Upper] {
                        match locatelli_shrink(&o, &b, axis, side) {
                            Ok(Some(ch)) => {
                                let after = apply_all(&b, &[ch]).expect("shrink leaves a box");
                                t.record(1, reduction_soundness_check(&b, &after, &cs, &p).len());
                            }
                            Ok(None) => {}
                            Err(Infeasible) => {
                                t.record(5, infeasibility_soundness_check(&b, &cs, &p).len())
                            }
                        }
                    }
                }
                let dy = b.project(&o.y_vars);
                for v in box_vertices(&dy).expect("finite box") {
                    if let Some(cut) = simplex_cut(&v, &o, &b) {
                        t.record(2, cut_soundness_check(&cut, &b, &cs, &p).len());
                    }
                }
            }
        }
    }
    for d in [2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + d as u64);
        for i in 0..200 {
            let (pair, b) = random_pair(&mut rng, d);
            let cs = [pair.c1.clone(), pair.c2.clone()];
            let p = plan(i);
            for axis in 0..d {
                for side in [BoundSide::Lower, BoundSide::Upper] {
                    if let Some(ch) = bisection_reduce(&pair, axis, side, &b) {
                        let after = apply_all(&b, &[ch]).expect("slab leaves a box");
                        t.record(3, reduction_soundness_check(&b, &after, &cs, &p).len());
                    }
                    let valid = geometric_reduce(&pair, axis, side, &b)
                        .and_then(|cand| validate_slab(&pair, cand, &b));
                    if let Some(ch) = valid {
                        let after = apply_all(&b, &[ch]).expect("slab leaves a box");
                        t.record(4, reduction_soundness_check(&b, &after, &cs, &p).len());
                    }
                }
            }
        }
    }
    let counts: Vec<String> = KINDS
        .iter()
        .zip(t.checked)
        .map(|(k, n)| format!("{k} {n}"))
        .collect();
    let covered = t.checked.iter().all(|&n| n > 0);
    check(
        t.bad == 0 && covered,
        format!(
            "{} counterexamples; reductions checked: {}",
            t.bad,
            counts.join(", ")
        ),
    )
}

fn locatelli_1d() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = MinDC::new(vec![0], vec![1], Delta::Constant(1.0));
    let mut worst = 0.0f64;
    let mut mismatches = 0;
    let mut hits = [0usize; 3];
    for _ in 0..1000 {
        let delta = rng.gen_range(0.5..2.0);
        let zl = rng.gen_range(-1.0..1.0);
        let zu = zl + rng.gen_range(0.0..1.0);
        let yl = rng.gen_range(-3.0..3.0);
        let yu = yl + rng.gen_range(0.05..3.0);
        let c = MinDC {
            delta: Delta::Constant(delta),
            ..c.clone()
        };
        let b = BoxDomain::from_bounds(&[(yl, yu), (zl, zu)]);
        // C = (ū_z − δ̄, l̄_z + δ̄).
        let (cl, cu) = (zu - delta, zl + delta);
        let inside = |v: f64| cl < v && v < cu;
        for side in [BoundSide::Upper, BoundSide::Lower] {
            let (facet, other, target) = match side {
                BoundSide::Upper => (yu, yl, cl),
                BoundSide::Lower => (yl, yu, cu),
            };
            let expect: Result<Option<f64>, Infeasible> = if !inside(facet) {
                Ok(None)
            } else if inside(other) {
                Err(Infeasible)
            } else if (facet - target).abs() > EPS_BOUND {
                Ok(Some(target))
            } else {
                Ok(None)
            };
            let got = locatelli_shrink(&c, &b, 0, side).map(|o| o.map(|ch| ch.value));
            match (expect, got) {
                (Ok(Some(e)), Ok(Some(g))) => {
                    hits[0] += 1;
                    worst = worst.max((e - g).abs());
                    if (e - g).abs() > 1e-12 {
                        mismatches += 1;
                    }
                }
                (Ok(None), Ok(None)) => hits[1] += 1,
                (Err(Infeasible), Err(Infeasible)) => hits[2] += 1,
                _ => mismatches += 1,
            }
        }
    }
    check(
        mismatches == 0,
        format!(
            "{mismatches} mismatches, max error {worst:.1e}; {} shrinks, {} unchanged, {} infeasible",
            hits[0], hits[1], hits[2]
        ),
    )
}

fn random_cover_config(
    rng: &mut ChaCha8Rng,
    d: usize,
) -> (BoxDomain, BoxDomain, BoxDomain, f64, f64) {
    let dp = BoxDomain::from_bounds(&vec![(0.0, 1.0); d]);
    let mut zbox = |near_origin: bool| {
        let single = rng.gen_bool(0.4);
        let iv: Vec<(f64, f64)> = (0..d)
            .map(|_| {
                let c = if near_origin {
                    rng.gen_range(-0.3..0.4)
                } else {
                    rng.gen_range(0.6..1.3)
                };
                let h = if single {
                    0.0
                } else {
                    rng.gen_range(0.0..0.15)
                };
                (c - h, c + h)
            })
            .collect();
        BoxDomain::from_bounds(&iv)
    };
    let (dz1, dz2) = (zbox(true), zbox(false));
    let reach = (d as f64).sqrt();
    let d1 = rng.gen_range(0.4..1.0) * reach;
    let d2 = rng.gen_range(0.4..1.0) * reach;
    (dp, dz1, dz2, d1, d2)
}

fn pair_cover_vs_grid() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // Grid step 1/200 of each side (201 points per axis) or finer.
    let mut configs = Vec::new();
    for (d, count, res) in [(2usize, 200usize, 401usize), (3, 100, 201)] {
        for _ in 0..count {
            configs.push((random_cover_config(&mut rng, d), res));
        }
    }
    // (exact, grid covered, near boundary)
    let results: Vec<(bool, bool, bool)> = configs
        .par_iter()
        .map(|((dp, dz1, dz2, d1, d2), res)| {
            let exact = pair_cover_check_boxes(dp, dz1, dz2, *d1, *d2);
            let grid = grid_pair_cover_report(dp, dz1, dz2, *d1, *d2, *res, 1e-6);
            (exact, grid.covered, grid.near_boundary)
        })
        .collect();
    let covered = results.iter().filter(|r| r.0).count();
    let differ = results.iter().filter(|r| r.0 != r.1);
    let excused = differ.clone().filter(|r| r.2).count();
    let disagree = differ.count() - excused;
    check(
        disagree == 0,
        format!(
            "{disagree} disagreements, {excused} near a sphere boundary; {covered} of {} covered",
            results.len()
        ),
    )
}

fn pair_premise() -> Check {
    let c1 = MinDC::new(vec![0, 1], vec![2, 3], Delta::Constant(2.5));
    let c2 = MinDC::new(vec![0, 1], vec![4, 5], Delta::Constant(2.5));
    let b = BoxDomain::from_bounds(&[
        (0.0, 4.0),
        (0.0, 2.0),
        (5.0, 5.0),
        (-1.0, -1.0),
        (5.2, 5.2),
        (3.0, 3.0),
    ]);
    let single = [&c1, &c2]
        .iter()
        .map(|c| locatelli_shrink(c, &b, 0, BoundSide::Upper))
        .collect::<Vec<_>>();
    let single_none = single.iter().all(|r| matches!(r, Ok(None)));
    let pair = MinDCPair::new((0, 1), c1, c2, (Side::Y, Side::Y));
    let Some(cand) = geometric_reduce(&pair, 0, BoundSide::Upper, &b) else {
        return check(false, "geometric reduction found no candidate");
    };
    let valid = validate_slab(&pair, cand, &b);
    let ok = single_none && (cand.new_bound - 3.605).abs() <= 1e-3 && valid.is_some();
    check(
        ok,
        format!(
            "single shrinks {single:?}; geometric bound {:.6}; validated {}",
            cand.new_bound,
            valid.map_or("no".to_string(), |ch| format!("at {:.6}", ch.value))
        ),
    )
}

fn regression_set() -> Vec<(ProblemSpec, f64)> {
    vec![
        (
            ProblemSpec::new(ProblemKind::PackInSphere, 2, 2),
            pack_in_sphere_ring_2d(2),
        ),
        (
            ProblemSpec::new(ProblemKind::PackInSphere, 3, 2),
            pack_in_sphere_ring_2d(3),
        ),
        (
            ProblemSpec::new(ProblemKind::Kissing, 6, 2),
            kissing_optimum_2d(6),
        ),
        (
            ProblemSpec::new(ProblemKind::Kissing, 7, 2),
            kissing_optimum_2d(7),
        ),
        (ProblemSpec::new(ProblemKind::PackInBox, 4, 2), 0.25),
    ]
}

fn reproductions() -> Check {
    let s = Settings::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (spec, opt) in regression_set() {
        let r = solve(&spec.build(), &s);
        let inc = r.incumbent_value.unwrap_or(f64::NAN);
        let close = (inc - opt).abs() <= 0.005 * opt;
        let valid_dual = r.dual_bound >= opt - 1e-6;
        let within_gap = r.gap <= s.gap;
        let fast = r.time <= 600.0;
        ok &= close && valid_dual && within_gap && fast;
        parts.push(format!(
            "{} {} inc {inc:.5} (opt {opt:.5}) dual {:.5} {}n",
            spec.name(),
            r.status,
            r.dual_bound,
            r.nodes
        ));
    }
    check(ok, parts.join("; "))
}

fn rotation_effect() -> Check {
    let mut le = true;
    let mut lt = false;
    let mut parts = Vec::new();
    for n in [5, 6] {
        let inst = ProblemSpec::new(ProblemKind::Kissing, n, 2).build();
        let off = solve(&inst, &Settings::with_heur_pair(0, 0));
        let on = solve(
            &inst,
            &Settings {
                rotsym: true,
                ..Settings::with_heur_pair(0, 0)
            },
        );
        le &= on.nodes <= off.nodes;
        lt |= on.nodes < off.nodes;
        parts.push(format!(
            "n={n}: {} nodes without, {} with",
            off.nodes, on.nodes
        ));
    }
    check(le && lt, parts.join("; "))
}

fn rotation_properties() -> Check {
    const GRID: usize = 1_000_000;
    let table: Vec<(f64, f64)> = (0..GRID)
        .map(|k| {
            let a = TAU * k as f64 / GRID as f64;
            (a.cos(), a.sin())
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut beaten = 0;
    let mut closed_form_err = 0.0f64;
    let mut worst_beat = 0.0f64;
    for _ in 0..1000 {
        let a: f64 = rng.gen_range(-5.0..5.0);
        let b: f64 = rng.gen_range(-5.0..5.0);
        let st = alpha_star(a, b).expect("nonzero point");
        closed_form_err = closed_form_err
            .max((st.min_value - (a - a.hypot(b))).abs())
            .max((st.min_value - ((1.0 - st.alpha.cos()) * a + st.alpha.sin() * b)).abs());
        let grid_min = table
            .iter()
            .map(|&(c, s)| (1.0 - c) * a + s * b)
            .fold(f64::INFINITY, f64::min);
        let beat = st.min_value - grid_min;
        worst_beat = worst_beat.max(beat);
        if beat > 1e-9 {
            beaten += 1;
        }
    }

    // The copy rotated so that the cut row becomes (‖(a, b)‖, 0) satisfies
    // every cut emitted for that row and axis pair.
    let mut violated = 0;
    let mut cuts = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=5);
        let dim = rng.gen_range(2..=4);
        let layout = PointMatrixLayout::contiguous(n, dim, 0);
        let mut bounds = BoxDomain::from_bounds(&vec![(-1.0, 1.0); n * dim]);
        let mut x: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // Sometimes pin leading rows to zero so later rows become eligible.
        let pinned = if rng.gen_bool(0.3) {
            rng.gen_range(1..n)
        } else {
            0
        };
        for i in 0..pinned {
            for j in 0..dim {
                let v = layout.var_of(i, j);
                x[v] = 0.0;
                bounds.set(v, Interval::point(0.0));
            }
        }
        for (spec, cut) in separate_rotation_cut_specs(&layout, &x, &bounds) {
            cuts += 1;
            let (j, jp) = spec.axes;
            let (a, b) = (
                x[layout.var_of(spec.row, j)],
                x[layout.var_of(spec.row, jp)],
            );
            let rho = a.hypot(b);
            let (c, s) = (a / rho, b / rho);
            let mut xr = x.clone();
            for i in 0..n {
                let (vj, vjp) = (layout.var_of(i, j), layout.var_of(i, jp));
                let (p, q) = (x[vj], x[vjp]);
                xr[vj] = c * p + s * q;
                xr[vjp] = -s * p + c * q;
            }
            if cut.activity(&xr) < cut.rhs - 1e-12 {
                violated += 1;
            }
        }
    }
    check(
        beaten == 0 && closed_form_err <= 1e-12 && violated == 0 && cuts > 0,
        format!(
            "grid beats closed form on {beaten} of 1000 (max {worst_beat:.1e}), closed form error {closed_form_err:.1e}; {violated} of {cuts} cuts violated by rotated copies"
        ),
    )
}

fn same(a: &SolveResult, b: &SolveResult) -> bool {
    a.nodes == b.nodes
        && a.status == b.status
        && a.incumbent_value.map(f64::to_bits) == b.incumbent_value.map(f64::to_bits)
        && a.incumbent_point == b.incumbent_point
        && a.dual_bound.to_bits() == b.dual_bound.to_bits()
        && a.reductions_by_algorithm == b.reductions_by_algorithm
}

fn determinism() -> Check {
    let mut runs = Vec::new();
    for (spec, _) in regression_set() {
        runs.push((spec, Settings::default()));
    }
    for label in STANDARD_SETTINGS {
        let base = Settings {
            rotsym: true,
            seed: 5,
            ..Settings::default()
        };
        let s = Settings::from_label(label, &base).expect("known label");
        runs.push((ProblemSpec::new(ProblemKind::PackInSphere, 4, 2), s.clone()));
        runs.push((ProblemSpec::new(ProblemKind::Kissing, 5, 2), s));
    }
    let mut differ = Vec::new();
    for (spec, s) in &runs {
        let inst = spec.build();
        if !same(&solve(&inst, s), &solve(&inst, s)) {
            differ.push(format!("{} {}", spec.name(), s.label()));
        }
    }
    check(
        differ.is_empty(),
        format!(
            "{} runs repeated, {} differ {:?}",
            runs.len(),
            differ.len(),
            differ
        ),
    )
}

fn cli_end_to_end() -> Check {
    let dir = tempfile::tempdir().expect("temp dir");
    let out = dir.path().join("runs.csv");
    let suite = SuiteSpec {
        instances: (2..=4)
            .map(|n| InstanceSource::Generated(ProblemSpec::new(ProblemKind::PackInSphere, n, 2)))
            .collect(),
        jobs: 1,
    };
    let grid = settings_grid(&STANDARD_SETTINGS, &[false], &Settings::default()).expect("grid");
    let outcome = match run_suite(&suite, &grid, &out) {
        Ok(o) => o,
        Err(e) => return check(false, format!("run_suite failed: {e:#}")),
    };
    let mut reader = csv::Reader::from_path(&out).expect("csv written");
    let header: Vec<String> = reader
        .headers()
        .expect("header")
        .iter()
        .map(String::from)
        .collect();
    let header_ok = header == RECORD_HEADER;
    let rows = read_records(&out).expect("rows parse");
    let names_ok = rows
        .iter()
        .all(|r| STANDARD_SETTINGS.contains(&r.setting_name.as_str()));

    let mut monotone = true;
    let mut points = 0;
    for metric in [Metric::Time, Metric::Gap] {
        let pout = dir.path().join(format!("profile-{metric:?}.csv"));
        let profile = match profile_data(&out, metric, &pout) {
            Ok(p) => p,
            Err(e) => return check(false, format!("profile_data failed: {e:#}")),
        };
        for s in &profile.settings {
            let curve = profile.curve(s);
            points += curve.len();
            monotone &= curve
                .windows(2)
                .all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1);
            monotone &= curve
                .iter()
                .all(|&(r, f)| r >= 1.0 && (0.0..=1.0).contains(&f));
        }
    }
    check(
        outcome.failures == 0
            && header_ok
            && rows.len() == 15
            && names_ok
            && monotone
            && points > 0,
        format!(
            "{} rows, header {}, {} failed runs, {points} profile points, monotone {monotone}",
            rows.len(),
            if header_ok { "ok" } else { "wrong" },
            outcome.failures
        ),
    )
}
