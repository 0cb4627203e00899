#![allow(dead_code)]

use mindc_core::{BoundChange, BoxDomain, Delta, Infeasible, MinDC, MinDCPair, Side};
use proptest::prelude::*;

/// A single constraint with `y` in `0..d`, `z` in `d..2d` and `δ` either
/// constant or the variable `2d`.
#[derive(Debug, Clone)]
pub struct Single {
    pub c: MinDC,
    pub b: BoxDomain,
}

pub fn single(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Single> {
    dims.prop_flat_map(|d| {
        (
            prop::collection::vec((-1.0..1.0f64, 0.0..0.5f64, -1.5..1.5f64, 0.05..1.5f64), d),
            any::<bool>(),
            0.3..2.5f64,
            prop_oneof![Just(None), (0.0..1.0f64).prop_map(Some)],
        )
    })
    .prop_map(|(coords, z_single, delta, var_width)| {
        let d = coords.len();
        let mut iv = Vec::with_capacity(2 * d + 1);
        for &(zc, _, off, h) in &coords {
            iv.push((zc + off - h, zc + off + h));
        }
        for &(zc, zh, _, _) in &coords {
            let zh = if z_single { 0.0 } else { zh };
            iv.push((zc - zh, zc + zh));
        }
        let delta = match var_width {
            Some(w) => {
                iv.push((delta, delta + w));
                Delta::Variable(2 * d)
            }
            None => {
                iv.push((0.0, 0.0));
                Delta::Constant(delta)
            }
        };
        Single {
            c: MinDC::new((0..d).collect(), (d..2 * d).collect(), delta),
            b: BoxDomain::from_bounds(&iv),
        }
    })
}

pub fn apply_all(b: &BoxDomain, ch: &[BoundChange]) -> Result<BoxDomain, Infeasible> {
    let mut out = b.clone();
    for c in ch {
        c.apply(&mut out)?;
    }
    Ok(out)
}

/// A box inside `b`, each interval shrunk by random fractions from both ends.
pub fn shrink(b: &BoxDomain, fracs: &[(f64, f64)]) -> BoxDomain {
    let iv: Vec<(f64, f64)> = b
        .intervals()
        .iter()
        .zip(fracs.iter().cycle())
        .map(|(iv, &(l, h))| {
            let w = iv.hi - iv.lo;
            let lo = iv.lo + 0.5 * l * w;
            let hi = iv.hi - 0.5 * h * w;
            (lo, hi.max(lo))
        })
        .collect();
    BoxDomain::from_bounds(&iv)
}

/// Two constraints `‖y − z¹‖ ≥ δ₁` and `‖z² − y‖ ≥ δ₂` with `y` in `0..d`,
/// `z¹` in `d..2d` and `z²` in `2d..3d`. Both `δ` are constant.
#[derive(Debug, Clone)]
pub struct Pair {
    pub pair: MinDCPair,
    pub b: BoxDomain,
}

impl Pair {
    pub fn constraints(&self) -> [MinDC; 2] {
        [self.pair.c1.clone(), self.pair.c2.clone()]
    }
}

pub fn pair(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Pair> {
    dims.prop_flat_map(|d| {
        (
            prop::collection::vec((-1.0..1.0f64, 0.05..1.2f64), d),
            prop::collection::vec((-1.5..1.5f64, 0.0..0.3f64), d),
            prop::collection::vec((-1.5..1.5f64, 0.0..0.3f64), d),
            0.3..2.5f64,
            0.3..2.5f64,
        )
    })
    .prop_map(|(y, z1, z2, d1, d2)| {
        let d = y.len();
        let mut iv: Vec<(f64, f64)> = y.iter().map(|&(c, h)| (c - h, c + h)).collect();
        iv.extend(z1.iter().chain(&z2).map(|&(c, h)| (c - h, c + h)));
        let c1 = MinDC::new((0..d).collect(), (d..2 * d).collect(), Delta::Constant(d1));
        let c2 = MinDC::new(
            (2 * d..3 * d).collect(),
            (0..d).collect(),
            Delta::Constant(d2),
        );
        Pair {
            pair: MinDCPair::new((0, 1), c1, c2, (Side::Y, Side::Z)),
            b: BoxDomain::from_bounds(&iv),
        }
    })
}
