//! Nice points `u_n`: lowest-order preimages of `|q|` closest to `c`.

use serde::{Deserialize, Serialize};

use super::niceness_violation;
use crate::dynamics::{orientation_reversing_fixed_point, Family};
use crate::error::{Error, Result};

/// Default limit on the preimage depth searched for the next nice point.
pub const DEFAULT_DEPTH_CAP: usize = 40;
/// Breadth-first frontiers larger than this are abandoned.
const FRONTIER_CAP: usize = 4_000_000;

/// A nice point with its preimage order relative to `u_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NicePoint {
    pub value: f64,
    pub order: usize,
}

/// `u_0, ..., u_{n_max - 1}` with the default depth cap.
pub fn nice_point_sequence(fam: &Family, n_max: usize) -> Result<Vec<NicePoint>> {
    nice_point_sequence_with(fam, n_max, DEFAULT_DEPTH_CAP)
}

/// `u_0 = |q|`; `u_n` is the preimage of `u_0` of lowest order lying in
/// `(-u_{n-1}, u_{n-1})`, and among those the one closest to `c`.
/// Preimages are generated breadth-first by order.
pub fn nice_point_sequence_with(fam: &Family, n_max: usize, depth_cap: usize) -> Result<Vec<NicePoint>> {
    if has_attracting_cycle(fam) {
        return Err(Error::PeriodicAttractor);
    }
    let q = orientation_reversing_fixed_point(fam)?;
    let u0 = -q;
    let mut out = vec![NicePoint { value: u0, order: 0 }];
    let c1 = fam.critical_value();
    let l = fam.ell();
    let mut frontier = vec![u0];
    let mut order = 0;
    while out.len() < n_max {
        order += 1;
        if order > depth_cap {
            return Err(Error::Renormalizable { depth: order - 1 });
        }
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &y in &frontier {
            if y >= c1 {
                let r = (y - c1).powf(1.0 / l);
                next.push(r);
                next.push(-r);
            }
        }
        next.sort_by(f64::total_cmp);
        next.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-300));
        if next.len() > FRONTIER_CAP {
            return Err(Error::Renormalizable { depth: order });
        }
        frontier = next;
        let w = out.last().unwrap().value;
        let best = frontier.iter().map(|y| y.abs()).filter(|&a| a < w * (1.0 - 1e-12)).fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            if niceness_violation(fam, best, 10 * order + 10).is_some() {
                return Err(Error::Degenerate(format!("preimage {best} fails the niceness check")));
            }
            out.push(NicePoint { value: best, order });
        }
    }
    Ok(out)
}

/// Attracting cycle of period <= 64 reached by the critical orbit.
pub(crate) fn has_attracting_cycle(fam: &Family) -> bool {
    let mut x = 0.0;
    for _ in 0..4000 {
        x = fam.apply(x);
        if !(x.abs() <= fam.escape_radius()) {
            return false;
        }
    }
    for p in 1..=64 {
        let y = fam.iterate(x, p);
        if (y - x).abs() < 1e-10 {
            return fam.derivative_iterate(x, p).abs() < 1.0;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_first_point() {
        let fam = Family::new(2, -2.0).unwrap();
        let u = nice_point_sequence(&fam, 1).unwrap();
        assert!((u[0].value - 1.0).abs() < 1e-13);
    }

    #[test]
    fn strictly_decreasing_and_nice() {
        let fam = Family::new(2, -1.9).unwrap();
        let u = nice_point_sequence(&fam, 6).unwrap();
        for p in u.windows(2) {
            assert!(p[1].value < p[0].value && p[1].order > p[0].order);
        }
        for p in &u {
            assert!(niceness_violation(&fam, p.value, 200).is_none());
        }
    }

    #[test]
    fn superstable_map_is_rejected() {
        let fam = Family::new(2, -1.0).unwrap();
        assert_eq!(nice_point_sequence(&fam, 3), Err(Error::PeriodicAttractor));
    }
}
