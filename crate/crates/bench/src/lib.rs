//! Fixed inputs shared by the benchmarks.

use mindc_core::{BoxDomain, Delta, MinDC, MinDCPair, Side};

/// One constraint in dimension `d` with `δ = 1`: `y` in `0..d` is wide on
/// the first axis and sits close to the small `z` box in `d..2d` on the
/// others, so both single reductions fire on axis 0.
pub fn single(d: usize) -> (MinDC, BoxDomain) {
    let mut iv = Vec::with_capacity(2 * d);
    iv.push((-1.2, 0.4));
    for k in 1..d {
        let c = 0.05 * k as f64;
        iv.push((c - 0.1, c + 0.1));
    }
    for k in 0..d {
        let c = 0.05 * k as f64;
        iv.push((c - 0.05, c + 0.05));
    }
    let c = MinDC::new((0..d).collect(), (d..2 * d).collect(), Delta::Constant(1.0));
    (c, BoxDomain::from_bounds(&iv))
}

/// Two constraints sharing `y` where neither alone reduces `y` but the pair
/// does; `d` is 2 or 3.
pub fn pair(d: usize) -> (MinDCPair, BoxDomain) {
    let mut iv = vec![(0.0, 4.0), (0.0, 2.0)];
    let mut p = vec![5.0, -1.0];
    let mut q = vec![5.2, 3.0];
    if d == 3 {
        iv.push((0.0, 1.0));
        p.push(0.5);
        q.push(0.5);
    }
    iv.extend(p.iter().chain(&q).map(|&v| (v, v)));
    let c1 = MinDC::new((0..d).collect(), (d..2 * d).collect(), Delta::Constant(2.5));
    let c2 = MinDC::new(
        (2 * d..3 * d).collect(),
        (0..d).collect(),
        Delta::Constant(2.5),
    );
    (
        MinDCPair::new((0, 1), c1, c2, (Side::Y, Side::Z)),
        BoxDomain::from_bounds(&iv),
    )
}
