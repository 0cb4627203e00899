use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use mindc_bench::{pair, single};
use mindc_core::pair_mindc::{bisection_reduce, geometric_reduce, validate_slab};
use mindc_core::single_mindc::{locatelli_shrink, propagate_prop1};
use mindc_core::symmetry::alpha_star;
use mindc_core::{solve, BoundSide, ProblemKind, ProblemSpec, Settings};

fn single_reductions(c: &mut Criterion) {
    let mut g = c.benchmark_group("single");
    for d in [2, 3, 5] {
        let (con, b) = single(d);
        g.bench_with_input(BenchmarkId::new("prop1", d), &d, |bch, _| {
            bch.iter(|| propagate_prop1(black_box(&con), black_box(&b)))
        });
        g.bench_with_input(BenchmarkId::new("locatelli", d), &d, |bch, _| {
            bch.iter(|| locatelli_shrink(black_box(&con), black_box(&b), 0, BoundSide::Upper))
        });
    }
    g.finish();
}

fn pair_reductions(c: &mut Criterion) {
    let mut g = c.benchmark_group("pair");
    for d in [2, 3] {
        let (p, b) = pair(d);
        g.bench_with_input(BenchmarkId::new("geometric", d), &d, |bch, _| {
            bch.iter(|| {
                geometric_reduce(black_box(&p), 0, BoundSide::Upper, black_box(&b))
                    .and_then(|cand| validate_slab(&p, cand, &b))
            })
        });
        g.bench_with_input(BenchmarkId::new("bisection", d), &d, |bch, _| {
            bch.iter(|| bisection_reduce(black_box(&p), 0, BoundSide::Upper, black_box(&b)))
        });
    }
    g.finish();
}

fn rotation(c: &mut Criterion) {
    c.bench_function("alpha_star", |bch| {
        bch.iter(|| alpha_star(black_box(0.3), black_box(-1.7)))
    });
}

fn small_solve(c: &mut Criterion) {
    let inst = ProblemSpec::new(ProblemKind::PackInSphere, 3, 2).build();
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    for label in ["heur_0_pair_0", "heur_1_pair_1"] {
        let set = Settings::from_label(label, &Settings::default()).unwrap();
        g.bench_function(label, |bch| bch.iter(|| solve(black_box(&inst), &set)));
    }
    g.finish();
}

criterion_group!(
    benches,
    single_reductions,
    pair_reductions,
    rotation,
    small_solve
);
criterion_main!(benches);
