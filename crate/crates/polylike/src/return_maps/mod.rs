//! Nice intervals, first return maps and their combinatorics.

mod fibonacci;
mod generalized;
mod nice;
mod renorm;

pub use fibonacci::{
    closest_return_times, cutting_times, fibonacci_nice_points, fibonacci_numbers, fibonacci_return_times,
    RETURN_BUDGET,
};
pub use generalized::{
    central_cascade_intervals, escape_interval, renorm_low, EscapeInterval, GBranch, GeneralizedFirstReturn,
};
pub use nice::{nice_point_sequence, nice_point_sequence_with, NicePoint};
pub use renorm::{central_nest, detect_renormalization, LevelData, LevelKind, NestLevel, Renormalization};

use serde::{Deserialize, Serialize};

use crate::dynamics::{Family, RealInterval};
use crate::error::{Error, Result};
use crate::numeric::bisect_predicate;

/// Relative slack used when an orbit point sits on the boundary of a nice interval.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Orbit points closer than this (relative) to a branch boundary are degenerate.
pub const DEGENERATE_TOL: f64 = 1e-10;

/// `[-endpoint, endpoint]` whose endpoint orbit stays out of the interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricNiceInterval {
    pub endpoint: f64,
    pub niceness_horizon: usize,
}

impl SymmetricNiceInterval {
    /// Checks niceness up to `horizon` iterates.
    pub fn new(fam: &Family, endpoint: f64, horizon: usize) -> Result<Self> {
        if !(endpoint > 0.0) {
            return Err(Error::Domain(format!("endpoint {endpoint} must be positive")));
        }
        if let Some(i) = niceness_violation(fam, endpoint, horizon) {
            return Err(Error::Domain(format!("endpoint {endpoint} re-enters at iterate {i}")));
        }
        Ok(SymmetricNiceInterval { endpoint, niceness_horizon: horizon })
    }

    pub fn interval(&self) -> RealInterval {
        RealInterval::symmetric(self.endpoint)
    }
}

/// First iterate `i <= horizon` with `f^i(e)` inside `(-e, e)`, if any.
///
/// Once `|f^i(e)|` repeats an earlier value of the orbit (relative 1e-7) the
/// orbit of `|e|` is periodic and the remaining iterates add nothing; the
/// check stops there instead of following round-off drift.
pub fn niceness_violation(fam: &Family, e: f64, horizon: usize) -> Option<usize> {
    let mut seen: Vec<f64> = vec![e.abs()];
    let mut x = e;
    for i in 1..=horizon {
        x = fam.apply(x);
        let a = x.abs();
        if a < e * (1.0 - BOUNDARY_TOL) {
            return Some(i);
        }
        if seen.iter().any(|&s| (s - a).abs() <= 1e-7 * s.max(e)) {
            return None;
        }
        seen.push(a);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    Monotone,
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Preserving,
    Reversing,
    Folding,
}

/// A branch `f^iterate` of a first return map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub domain: RealInterval,
    pub iterate: usize,
    pub kind: BranchKind,
    pub orientation: Orientation,
}

/// Branches of the first return map to a nice interval that meet the
/// forward critical orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnMapStructure {
    pub family: Family,
    pub base: SymmetricNiceInterval,
    pub branches: Vec<Branch>,
    pub central_index: usize,
}

impl ReturnMapStructure {
    pub fn central(&self) -> &Branch {
        &self.branches[self.central_index]
    }

    pub fn branch_of(&self, x: f64) -> Option<&Branch> {
        self.branches.iter().find(|b| b.domain.contains(x))
    }

    /// `R_W(x)` when `x` lies in a known branch.
    pub fn apply(&self, x: f64) -> Option<f64> {
        self.branch_of(x).map(|b| self.family.iterate(x, b.iterate))
    }
}

/// Image of an interval under `f^n` (exact for the real unimodal map).
pub fn interval_image(fam: &Family, mut iv: RealInterval, n: usize) -> RealInterval {
    for _ in 0..n {
        iv = iv.image(fam);
    }
    iv
}

/// First `k >= 1` with `f^k(x)` in the open interval `(-w, w)`.
pub fn entry_time(fam: &Family, x: f64, w: f64, budget: usize) -> Option<usize> {
    let mut y = x;
    for k in 1..=budget {
        y = fam.apply(y);
        if y.abs() < w {
            return Some(k);
        }
        if !(y.abs() <= fam.escape_radius()) {
            return None;
        }
    }
    None
}

/// True when `f^j(hull(y, x))` avoids `(-w, w)` for `1 <= j < k` and lands
/// in `[-w, w]` at `j = k`.
fn returns_as_block(fam: &Family, y: f64, x: f64, k: usize, w: f64) -> bool {
    let tol = BOUNDARY_TOL * w;
    let mut iv = RealInterval::hull(y, x);
    for j in 1..=k {
        iv = iv.image(fam);
        if j < k {
            if !(iv.hi <= -w + tol || iv.lo >= w - tol) {
                return false;
            }
        } else if !(iv.lo >= -w - tol && iv.hi <= w + tol) {
            return false;
        }
    }
    true
}

/// Maximal interval around `y` on which the first entry time into `(-w, w)` is `k`.
fn branch_domain(fam: &Family, y: f64, k: usize, w: f64) -> RealInterval {
    let side = |bound: f64| {
        if returns_as_block(fam, y, bound, k, w) {
            bound
        } else {
            bisect_predicate(|x| returns_as_block(fam, y, x, k, w), y, bound, 200)
        }
    };
    RealInterval { lo: side(-w), hi: side(w) }
}

/// Branch decomposition of the first return map to `W`, restricted to
/// branches containing a point of the critical orbit within `orbit_budget`.
pub fn first_return_map(fam: &Family, w: &SymmetricNiceInterval, orbit_budget: usize) -> Result<ReturnMapStructure> {
    let e = w.endpoint;
    let orbit = crate::dynamics::OrbitSegment::of(fam, 0.0, orbit_budget);
    if let Some(step) = orbit.escaped_at {
        return Err(Error::Escaped { step });
    }
    let k0 = entry_time(fam, 0.0, e, orbit_budget).ok_or(Error::BudgetExhausted { budget: orbit_budget })?;
    let central = branch_domain(fam, 0.0, k0, e);
    let mut branches =
        vec![Branch { domain: central, iterate: k0, kind: BranchKind::Central, orientation: Orientation::Folding }];
    for (m, &y) in orbit.points.iter().enumerate().skip(1) {
        if y.abs() >= e || branches.iter().any(|b| b.domain.contains(y)) {
            continue;
        }
        let Some(k) = entry_time(fam, y, e, orbit_budget.saturating_sub(m).max(1)) else {
            continue;
        };
        let domain = branch_domain(fam, y, k, e);
        let d = fam.derivative_iterate(domain.mid(), k);
        branches.push(Branch {
            domain,
            iterate: k,
            kind: BranchKind::Monotone,
            orientation: if d > 0.0 { Orientation::Preserving } else { Orientation::Reversing },
        });
    }
    Ok(ReturnMapStructure { family: *fam, base: *w, branches, central_index: 0 })
}

/// High/low and central/non-central type of the central return.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnClass {
    pub high: bool,
    pub central: bool,
    /// Distance from `c` to the boundary of `f^s(U)`, negative for a low return.
    pub margin: f64,
}

pub fn classify_return(rms: &ReturnMapStructure) -> Result<ReturnClass> {
    let fam = &rms.family;
    let b = rms.central();
    let s = b.iterate;
    let u = b.domain.hi;
    let cs = fam.critical_point_image(s);
    let fsu = fam.iterate(u, s);
    let scale = rms.base.endpoint;
    if cs != 0.0 {
        for br in &rms.branches {
            for edge in [br.domain.lo, br.domain.hi] {
                if (cs - edge).abs() <= DEGENERATE_TOL * scale {
                    return Err(Error::Degenerate(format!("c_{s} = {cs} sits on a branch boundary")));
                }
            }
        }
    }
    let high = cs == 0.0 || cs * fsu < 0.0;
    let dist = cs.abs().min(fsu.abs());
    Ok(ReturnClass { high, central: cs.abs() < u, margin: if high { dist } else { -dist } })
}
