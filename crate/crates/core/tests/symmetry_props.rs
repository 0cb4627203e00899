use std::f64::consts::TAU;

use mindc_core::symmetry::{
    alpha_star, lex_cols_propagate, lex_rows_propagate, separate_rotation_cut_specs,
};
use mindc_core::tolerances::EPS_CUT;
use mindc_core::{BoundKind, BoxDomain, Interval, PointMatrixLayout};
use proptest::prelude::*;

/// A point matrix with its layout, a box around it and how many leading rows
/// are pinned at the origin.
fn matrix() -> impl Strategy<Value = (PointMatrixLayout, Vec<f64>, Vec<(f64, f64)>, usize)> {
    (2usize..=5, 1usize..=4)
        .prop_flat_map(|(n, dim)| {
            (
                Just((n, dim)),
                prop::collection::vec((-1.0..1.0f64, 0.0..0.6f64, 0.0..0.6f64), n * dim),
                0..n,
            )
        })
        .prop_map(|((n, dim), cells, pinned)| {
            let layout = PointMatrixLayout::contiguous(n, dim, 0);
            let mut x: Vec<f64> = cells.iter().map(|c| c.0).collect();
            let mut iv: Vec<(f64, f64)> = cells.iter().map(|&(v, l, h)| (v - l, v + h)).collect();
            for k in 0..pinned * dim {
                x[k] = 0.0;
                iv[k] = (0.0, 0.0);
            }
            (layout, x, iv, pinned)
        })
}

fn contains(b: &BoxDomain, x: &[f64]) -> bool {
    b.intervals()
        .iter()
        .zip(x)
        .all(|(iv, &v)| iv.lo - 1e-12 <= v && v <= iv.hi + 1e-12)
}

fn apply(b: &BoxDomain, ch: &[mindc_core::BoundChange]) -> BoxDomain {
    let mut out = b.clone();
    for c in ch {
        let mut iv = out.get(c.var);
        match c.kind {
            BoundKind::RaiseLower => iv.lo = iv.lo.max(c.value),
            BoundKind::LowerUpper => iv.hi = iv.hi.min(c.value),
        }
        out.set(c.var, Interval::new(iv.lo.min(iv.hi), iv.hi.max(iv.lo)));
    }
    out
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap()
}

proptest! {
    #[test]
    fn alpha_star_is_the_minimum(
        a in -5.0..5.0f64,
        b in -5.0..5.0f64,
        probes in prop::collection::vec(0.0..TAU, 64),
    ) {
        prop_assume!(a.hypot(b) > 1e-9);
        let st = alpha_star(a, b).unwrap();
        let f = |t: f64| (1.0 - t.cos()) * a + t.sin() * b;
        prop_assert!((0.0..TAU).contains(&st.alpha));
        prop_assert!((st.min_value - (a - a.hypot(b))).abs() <= 1e-12);
        prop_assert!((f(st.alpha) - st.min_value).abs() <= 1e-12);
        prop_assert!((st.cos - st.alpha.cos()).abs() <= 1e-12);
        prop_assert!((st.sin - st.alpha.sin()).abs() <= 1e-12);
        for t in probes {
            prop_assert!(f(t) >= st.min_value - 1e-12);
        }
    }

    #[test]
    fn separated_cuts_cut_off_the_point((layout, x, iv, _) in matrix()) {
        let b = BoxDomain::from_bounds(&iv);
        for (_, cut) in separate_rotation_cut_specs(&layout, &x, &b) {
            prop_assert!(cut.activity(&x) < cut.rhs - EPS_CUT);
        }
    }

    #[test]
    fn some_rotation_satisfies_each_cut((layout, x, iv, pinned) in matrix()) {
        let b = BoxDomain::from_bounds(&iv);
        for (spec, cut) in separate_rotation_cut_specs(&layout, &x, &b) {
            prop_assert!(spec.row <= pinned);
            let (j, jp) = spec.axes;
            let (a, bb) = (x[layout.var_of(spec.row, j)], x[layout.var_of(spec.row, jp)]);
            let rho = a.hypot(bb);
            let (c, s) = (a / rho, bb / rho);
            // Rotate every row in the (j, j′) plane; distances are unchanged.
            let mut xr = x.clone();
            for i in 0..layout.n {
                let (vj, vjp) = (layout.var_of(i, j), layout.var_of(i, jp));
                xr[vj] = c * x[vj] + s * x[vjp];
                xr[vjp] = -s * x[vj] + c * x[vjp];
            }
            prop_assert!(cut.activity(&xr) >= cut.rhs - 1e-12);
        }
    }

    #[test]
    fn lex_rows_keep_sorted_points((layout, x, iv, _) in matrix()) {
        let mut rows: Vec<Vec<f64>> = (0..layout.n)
            .map(|i| layout.row(i).iter().map(|&v| x[v]).collect())
            .collect();
        rows.sort_by(|a, b| lex_cmp(b, a));
        let sorted: Vec<f64> = rows.concat();
        // Shift the box so it contains the sorted matrix.
        let iv: Vec<(f64, f64)> = iv
            .iter()
            .zip(&x)
            .zip(&sorted)
            .map(|((&(l, h), &old), &new)| (l - old + new, h - old + new))
            .collect();
        let b = BoxDomain::from_bounds(&iv);
        let ch = lex_rows_propagate(&layout, &b);
        prop_assert!(ch.is_ok());
        prop_assert!(contains(&apply(&b, &ch.unwrap()), &sorted));
    }

    #[test]
    fn lex_cols_keep_sorted_points((layout, x, iv, _) in matrix()) {
        let mut cols: Vec<Vec<f64>> = (0..layout.dim)
            .map(|j| layout.col(j).iter().map(|&v| x[v]).collect())
            .collect();
        cols.sort_by(|a, b| lex_cmp(b, a));
        let mut sorted = x.clone();
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                sorted[layout.var_of(i, j)] = v;
            }
        }
        let iv: Vec<(f64, f64)> = iv
            .iter()
            .zip(&x)
            .zip(&sorted)
            .map(|((&(l, h), &old), &new)| (l - old + new, h - old + new))
            .collect();
        let b = BoxDomain::from_bounds(&iv);
        let ch = lex_cols_propagate(&layout, &b);
        prop_assert!(ch.is_ok());
        prop_assert!(contains(&apply(&b, &ch.unwrap()), &sorted));
    }
}
