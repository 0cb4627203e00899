//! Symmetry handling on a point matrix `X ∈ R^{n×dim}`: lexicographic
//! ordering of rows and columns, and cuts that pick a representative under
//! rotations in one coordinate plane.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Infeasible, Result};
use crate::geometry::{BoxDomain, LinearCut};
use crate::single_mindc::{BoundChange, ChangeSet};
use crate::tolerances::{EPS_BOUND, EPS_CUT, EPS_FIX};

/// Variable indices of `X`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMatrixLayout {
    pub n: usize,
    pub dim: usize,
    pub vars: Vec<usize>,
}

impl PointMatrixLayout {
    pub fn new(n: usize, dim: usize, vars: Vec<usize>) -> Self {
        assert_eq!(vars.len(), n * dim, "layout needs n·dim variables");
        PointMatrixLayout { n, dim, vars }
    }

    /// `X_{i,j} ↦ i·dim + j + offset`.
    pub fn contiguous(n: usize, dim: usize, offset: usize) -> Self {
        Self::new(n, dim, (offset..offset + n * dim).collect())
    }

    pub fn var_of(&self, i: usize, j: usize) -> usize {
        self.vars[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.vars[i * self.dim..(i + 1) * self.dim]
    }

    pub fn col(&self, j: usize) -> Vec<usize> {
        (0..self.n).map(|i| self.var_of(i, j)).collect()
    }

    pub(crate) fn is_injective(&self) -> bool {
        let mut v = self.vars.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// One cut `(1 − s_j cos α)·X_{i,j} + s_{j′} sin α·X_{i,j′} ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationCutSpec {
    pub row: usize,
    pub axes: (usize, usize),
    pub signs: (i8, i8),
    pub alpha: f64,
}

/// Minimizer of `f(α) = (1 − cos α)·a + sin α·b` over `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaStar {
    pub alpha: f64,
    pub cos: f64,
    pub sin: f64,
    pub min_value: f64,
}

pub fn alpha_star(a: f64, b: f64) -> Result<AlphaStar> {
    let rho = a.hypot(b);
    if rho == 0.0 {
        return Err(Error::DegeneratePoint);
    }
    let cos = a / rho;
    let sin = -b / rho;
    let mut alpha = sin.atan2(cos);
    if alpha < 0.0 {
        alpha += TAU;
    }
    if alpha >= TAU {
        alpha = 0.0;
    }
    Ok(AlphaStar {
        alpha,
        cos,
        sin,
        min_value: a - rho,
    })
}

/// Propagate `a ≥_lex b` on `scratch`, recording every change in `out`.
fn lex_geq(
    a: &[usize],
    b: &[usize],
    scratch: &mut BoxDomain,
    out: &mut Vec<BoundChange>,
) -> Result<(), Infeasible> {
    for (&va, &vb) in a.iter().zip(b) {
        let (ia, ib) = (scratch.get(va), scratch.get(vb));
        if ia.hi < ib.lo - EPS_BOUND {
            return Err(Infeasible);
        }
        let mut cs = ChangeSet::default();
        cs.lower(va, ia.lo, ia.hi, ib.lo)?;
        cs.upper(vb, ib.lo, ib.hi, ia.hi)?;
        for ch in cs.changes {
            ch.apply(scratch)?;
            out.push(ch);
        }
        // a_k ≤ ū_a ≤ l̄_b ≤ b_k together with a_k ≥ b_k forces equality.
        if !(scratch.hi(va) <= scratch.lo(vb)) {
            break;
        }
    }
    Ok(())
}

/// `X^i ≥_lex X^{i+1}` for consecutive rows.
pub fn lex_rows_propagate(
    layout: &PointMatrixLayout,
    bounds: &BoxDomain,
) -> Result<Vec<BoundChange>, Infeasible> {
    let mut scratch = bounds.clone();
    let mut out = Vec::new();
    for i in 0..layout.n.saturating_sub(1) {
        lex_geq(layout.row(i), layout.row(i + 1), &mut scratch, &mut out)?;
    }
    Ok(out)
}

/// `X_j ≥_lex X_{j+1}` for consecutive columns.
pub fn lex_cols_propagate(
    layout: &PointMatrixLayout,
    bounds: &BoxDomain,
) -> Result<Vec<BoundChange>, Infeasible> {
    let mut scratch = bounds.clone();
    let mut out = Vec::new();
    for j in 0..layout.dim.saturating_sub(1) {
        lex_geq(&layout.col(j), &layout.col(j + 1), &mut scratch, &mut out)?;
    }
    Ok(out)
}

fn fixed_zero(bounds: &BoxDomain, v: usize) -> bool {
    let iv = bounds.get(v);
    iv.lo >= -EPS_FIX && iv.hi <= EPS_FIX
}

/// Rows `i` whose predecessors all have `X_{i′,j} = X_{i′,j′} = 0`. Row 0 is
/// always included. Rows past the first are only valid in the subtree where
/// those fixings hold.
pub fn applicable_rows(
    layout: &PointMatrixLayout,
    bounds: &BoxDomain,
    axes: (usize, usize),
) -> Vec<usize> {
    let mut rows = Vec::new();
    for i in 0..layout.n {
        rows.push(i);
        let (j, jp) = axes;
        if !(fixed_zero(bounds, layout.var_of(i, j)) && fixed_zero(bounds, layout.var_of(i, jp))) {
            break;
        }
    }
    rows
}

pub fn rotation_cut(layout: &PointMatrixLayout, spec: &RotationCutSpec) -> LinearCut {
    let (j, jp) = spec.axes;
    let (sj, sjp) = (f64::from(spec.signs.0), f64::from(spec.signs.1));
    LinearCut::new(
        vec![
            (layout.var_of(spec.row, j), 1.0 - sj * spec.alpha.cos()),
            (layout.var_of(spec.row, jp), sjp * spec.alpha.sin()),
        ],
        0.0,
    )
}

const SIGNS: [(i8, i8); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

/// Most violated rotation cut per applicable `(row, j, j′)`, paired with the
/// parameters that produced it.
pub fn separate_rotation_cut_specs(
    layout: &PointMatrixLayout,
    point: &[f64],
    bounds: &BoxDomain,
) -> Vec<(RotationCutSpec, LinearCut)> {
    let mut out = Vec::new();
    for j in 0..layout.dim {
        for jp in j + 1..layout.dim {
            for row in applicable_rows(layout, bounds, (j, jp)) {
                let (vj, vjp) = (layout.var_of(row, j), layout.var_of(row, jp));
                let (a, b) = (point[vj], point[vjp]);
                let mut best: Option<(f64, RotationCutSpec, LinearCut)> = None;
                for (sj, sjp) in SIGNS {
                    let Ok(st) = alpha_star(f64::from(sj) * a, f64::from(sjp) * b) else {
                        continue;
                    };
                    let cut = LinearCut::new(
                        vec![
                            (vj, 1.0 - f64::from(sj) * st.cos),
                            (vjp, f64::from(sjp) * st.sin),
                        ],
                        0.0,
                    );
                    let lhs = cut.activity(point);
                    if lhs >= -EPS_CUT || best.as_ref().is_some_and(|(v, ..)| lhs >= *v) {
                        continue;
                    }
                    let spec = RotationCutSpec {
                        row,
                        axes: (j, jp),
                        signs: (sj, sjp),
                        alpha: st.alpha,
                    };
                    best = Some((lhs, spec, cut));
                }
                if let Some((_, spec, cut)) = best {
                    out.push((spec, cut));
                }
            }
        }
    }
    out
}

pub fn separate_rotation_cuts(
    layout: &PointMatrixLayout,
    point: &[f64],
    bounds: &BoxDomain,
) -> Vec<LinearCut> {
    separate_rotation_cut_specs(layout, point, bounds)
        .into_iter()
        .map(|(_, c)| c)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn layout_2x1() -> PointMatrixLayout {
        PointMatrixLayout::contiguous(2, 1, 0)
    }

    #[test]
    fn lex_rows_examples() {
        let l = layout_2x1();
        let b = BoxDomain::from_bounds(&[(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(lex_rows_propagate(&l, &b), Err(Infeasible));

        let b = BoxDomain::from_bounds(&[(0.0, 5.0), (3.0, 8.0)]);
        let ch = lex_rows_propagate(&l, &b).unwrap();
        assert!(ch.contains(&BoundChange::lower(0, 3.0)));
        assert!(ch.contains(&BoundChange::upper(1, 5.0)));

        let l = PointMatrixLayout::contiguous(2, 2, 0);
        let b = BoxDomain::from_bounds(&[(1.0, 1.0), (2.0, 2.0), (1.0, 1.0), (2.0, 2.0)]);
        assert!(lex_rows_propagate(&l, &b).unwrap().is_empty());
    }

    #[test]
    fn lex_rows_advance_past_forced_equal() {
        let l = PointMatrixLayout::contiguous(2, 2, 0);
        let b = BoxDomain::from_bounds(&[(1.0, 1.0), (0.0, 5.0), (1.0, 1.0), (3.0, 8.0)]);
        let ch = lex_rows_propagate(&l, &b).unwrap();
        assert_eq!(
            ch,
            vec![BoundChange::lower(1, 3.0), BoundChange::upper(3, 5.0)]
        );
        // Undecided first entry stops the scan.
        let b = BoxDomain::from_bounds(&[(0.0, 2.0), (0.0, 5.0), (1.0, 1.0), (3.0, 8.0)]);
        let ch = lex_rows_propagate(&l, &b).unwrap();
        assert_eq!(ch, vec![BoundChange::lower(0, 1.0)]);
    }

    #[test]
    fn lex_cols_examples() {
        // Columns of a 2×2 matrix: col0 = (v0, v2), col1 = (v1, v3).
        let l = PointMatrixLayout::contiguous(2, 2, 0);
        let b = BoxDomain::from_bounds(&[(0.0, 1.0), (2.0, 3.0), (0.0, 9.0), (0.0, 9.0)]);
        assert_eq!(lex_cols_propagate(&l, &b), Err(Infeasible));
        let b = BoxDomain::from_bounds(&[(4.0, 4.0), (4.0, 4.0), (4.0, 4.0), (4.0, 4.0)]);
        assert!(lex_cols_propagate(&l, &b).unwrap().is_empty());
        let b = BoxDomain::from_bounds(&[(1.0, 1.0), (1.0, 1.0), (0.0, 5.0), (3.0, 8.0)]);
        let ch = lex_cols_propagate(&l, &b).unwrap();
        assert_eq!(
            ch,
            vec![BoundChange::lower(2, 3.0), BoundChange::upper(3, 5.0)]
        );
    }

    #[test]
    fn alpha_star_examples() {
        assert_eq!(alpha_star(1.0, 0.0).unwrap().min_value, 0.0);
        let s = alpha_star(0.0, 1.0).unwrap();
        assert!((s.alpha - 1.5 * PI).abs() < 1e-12);
        assert!((s.min_value + 1.0).abs() < 1e-15);
        let s = alpha_star(3.0, 4.0).unwrap();
        assert!((s.min_value + 2.0).abs() < 1e-15);
        assert!(matches!(alpha_star(0.0, 0.0), Err(Error::DegeneratePoint)));
    }

    #[test]
    fn alpha_star_beats_sweep() {
        for &(a, b) in &[(0.3, -1.7), (-2.0, 0.1), (1.0, 1.0), (-0.5, -0.5)] {
            let s = alpha_star(a, b).unwrap();
            let f = |t: f64| (1.0 - t.cos()) * a + t.sin() * b;
            assert!((f(s.alpha) - s.min_value).abs() < 1e-12);
            let sweep = (0..10_000)
                .map(|k| f(TAU * k as f64 / 10_000.0))
                .fold(f64::INFINITY, f64::min);
            assert!(sweep >= s.min_value - 1e-12);
        }
    }

    #[test]
    fn applicable_rows_prefix() {
        let l = PointMatrixLayout::contiguous(3, 2, 0);
        let free = BoxDomain::from_bounds(&[(-1.0, 1.0); 6]);
        assert_eq!(applicable_rows(&l, &free, (0, 1)), vec![0]);
        let mut b = free.clone();
        b.set(0, crate::Interval::point(0.0));
        b.set(1, crate::Interval::point(0.0));
        assert_eq!(applicable_rows(&l, &b, (0, 1)), vec![0, 1]);
        b.set(2, crate::Interval::point(0.0));
        b.set(3, crate::Interval::new(-1e-10, 1e-10));
        assert_eq!(applicable_rows(&l, &b, (0, 1)), vec![0, 1, 2]);
    }

    #[test]
    fn separation_examples() {
        let l = PointMatrixLayout::contiguous(1, 2, 0);
        let b = BoxDomain::from_bounds(&[(-5.0, 5.0), (-5.0, 5.0)]);
        assert!(separate_rotation_cuts(&l, &[2.0, 0.0], &b).is_empty());

        let cuts = separate_rotation_cuts(&l, &[0.0, 1.0], &b);
        assert_eq!(cuts.len(), 1);
        let c = &cuts[0];
        assert!((c.coefs[0].1 - 1.0).abs() < 1e-15 && (c.coefs[1].1 + 1.0).abs() < 1e-15);
        assert!((c.violation(&[0.0, 1.0]) - 1.0).abs() < 1e-12);

        let cuts = separate_rotation_cuts(&l, &[3.0, 4.0], &b);
        let c = &cuts[0];
        assert!((c.coefs[0].1 - 0.4).abs() < 1e-15 && (c.coefs[1].1 + 0.8).abs() < 1e-15);
        assert!((c.violation(&[3.0, 4.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spec_rebuilds_cut() {
        let l = PointMatrixLayout::contiguous(2, 3, 0);
        let b = BoxDomain::from_bounds(&[(-5.0, 5.0); 6]);
        let x = [0.5, -1.0, 2.0, 0.0, 0.0, 0.0];
        for (spec, cut) in separate_rotation_cut_specs(&l, &x, &b) {
            let re = rotation_cut(&l, &spec);
            for (p, q) in re.coefs.iter().zip(&cut.coefs) {
                assert_eq!(p.0, q.0);
                assert!((p.1 - q.1).abs() < 1e-12);
            }
        }
    }
}
