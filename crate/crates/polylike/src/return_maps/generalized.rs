//! Generalized first return maps and the operators that deepen them:
//! the low-return renormalization and the escape-interval return.

use serde::{Deserialize, Serialize};

use super::{first_return_map, interval_image, BranchKind, SymmetricNiceInterval};
use crate::dynamics::{Family, RealInterval};
use crate::error::{Error, Result};
use crate::numeric::bisect_predicate;

/// Orbit steps after which searches for `s_0`, `s` or `k` give up.
const STEP_BUDGET: usize = 10_000;

/// A branch `f^iterate` of a generalized return map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GBranch {
    pub domain: RealInterval,
    pub iterate: usize,
    pub central: bool,
    /// Interval `H ⊇ f(domain)` mapped monotonically onto `outer` by
    /// `f^(iterate - 1)`; `None` when no such extension was found.
    pub extension: Option<RealInterval>,
}

/// Branches (all hit by the critical orbit) mapping into `range`, with
/// the inverse of each branch extending over `outer`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedFirstReturn {
    pub family: Family,
    /// `T^{-1}`.
    pub outer: RealInterval,
    /// `T^0`: the interval whose first return produced the central domain.
    pub base: RealInterval,
    /// Interval onto which the non-central branches map.
    pub range: RealInterval,
    pub branches: Vec<GBranch>,
    pub central_index: usize,
    /// Length of the critical `f`-orbit whose points the branches cover.
    pub budget: usize,
}

/// Maximal `H ⊇ f(domain)` with `f^(k-1)` monotone on `H` and image inside
/// `outer`; returned only when the image covers `outer`.
fn extension_witness(fam: &Family, domain: RealInterval, k: usize, outer: RealInterval) -> Option<RealInterval> {
    if k < 2 {
        return None;
    }
    let j = domain.image(fam);
    let n = k - 1;
    let tol = 1e-9 * outer.length();
    let ok = |lo: f64, hi: f64| {
        let mut iv = RealInterval { lo, hi };
        for _ in 0..n {
            if iv.contains_open(0.0) {
                return false;
            }
            iv = iv.image(fam);
        }
        iv.lo >= outer.lo - tol && iv.hi <= outer.hi + tol
    };
    if !ok(j.lo, j.hi) {
        return None;
    }
    let cap = fam.escape_radius();
    let grow = |dir: f64| {
        let mut step = j.length().max(1e-12);
        let mut good = if dir < 0.0 { j.lo } else { j.hi };
        loop {
            let cand = good + dir * step;
            if cand.abs() > cap {
                break;
            }
            let fine = if dir < 0.0 { ok(cand, j.hi) } else { ok(j.lo, cand) };
            if !fine {
                let bad = cand;
                return if dir < 0.0 {
                    bisect_predicate(|x| ok(x, j.hi), good, bad, 200)
                } else {
                    bisect_predicate(|x| ok(j.lo, x), good, bad, 200)
                };
            }
            good = cand;
            step *= 2.0;
        }
        good
    };
    let h = RealInterval { lo: grow(-1.0), hi: grow(1.0) };
    let img = interval_image(fam, h, n);
    (img.lo <= outer.lo + tol && img.hi >= outer.hi - tol).then_some(h)
}

impl GeneralizedFirstReturn {
    /// First return map to `[-base, base]` (branches hit by the critical
    /// orbit) with extensions over `[-outer, outer]`.
    pub fn from_nest(fam: &Family, outer: f64, base: f64, budget: usize) -> Result<Self> {
        let w = SymmetricNiceInterval { endpoint: base, niceness_horizon: 0 };
        let rms = first_return_map(fam, &w, budget)?;
        let outer_iv = RealInterval::symmetric(outer);
        let branches = rms
            .branches
            .iter()
            .map(|b| GBranch {
                domain: b.domain,
                iterate: b.iterate,
                central: b.kind == BranchKind::Central,
                extension: extension_witness(fam, b.domain, b.iterate, outer_iv),
            })
            .collect();
        Ok(GeneralizedFirstReturn {
            family: *fam,
            outer: outer_iv,
            base: w.interval(),
            range: w.interval(),
            branches,
            central_index: rms.central_index,
            budget,
        })
    }

    /// Every branch has an extension witness over `outer`.
    pub fn is_in_class(&self) -> bool {
        self.branches.iter().all(|b| b.extension.is_some())
    }

    pub fn central(&self) -> &GBranch {
        &self.branches[self.central_index]
    }

    /// Half-length of the central domain.
    pub fn central_endpoint(&self) -> f64 {
        self.central().domain.hi
    }

    pub fn branch_index(&self, x: f64) -> Option<usize> {
        self.branches.iter().position(|b| b.domain.contains(x))
    }

    pub fn apply(&self, x: f64) -> Option<f64> {
        self.branch_index(x).map(|i| self.family.iterate(x, self.branches[i].iterate))
    }

    /// `g^n(x)` or `None` once the orbit leaves the known branches.
    pub fn apply_n(&self, mut x: f64, n: usize) -> Option<f64> {
        for _ in 0..n {
            x = self.apply(x)?;
        }
        Some(x)
    }

    /// `(g^i(c), branch index)` for `i = 0..n` while defined.
    pub fn critical_itinerary(&self, n: usize) -> Vec<(f64, usize)> {
        let mut out = Vec::with_capacity(n);
        let mut x = 0.0;
        for _ in 0..n {
            let Some(b) = self.branch_index(x) else { break };
            out.push((x, b));
            x = self.family.iterate(x, self.branches[b].iterate);
        }
        out
    }

    /// True when `g(central)` misses `c`.
    pub fn has_low_return(&self) -> bool {
        let b = self.central();
        let gc = self.family.iterate(0.0, b.iterate);
        let gt = self.family.iterate(b.domain.hi, b.iterate);
        gc * gt > 0.0
    }

    /// Sum of `f`-iterates along a branch itinerary.
    fn iterate_sum(&self, itinerary: &[usize]) -> usize {
        itinerary.iter().map(|&b| self.branches[b].iterate).sum()
    }

    /// Does `hull(a, b)` follow `itinerary` branch by branch, optionally
    /// avoiding the open `(-avoid, avoid)` at intermediate steps and landing
    /// in `[-land, land]` at the end?
    fn follows(&self, a: f64, b: f64, itinerary: &[usize], avoid: Option<f64>, land: Option<f64>) -> bool {
        let mut iv = RealInterval::hull(a, b);
        for (i, &br) in itinerary.iter().enumerate() {
            if i > 0 {
                if let Some(r) = avoid {
                    let tol = 1e-12 * r;
                    if !(iv.hi <= -r + tol || iv.lo >= r - tol) {
                        return false;
                    }
                }
            }
            if !self.branches[br].domain.contains_interval(&iv) {
                return false;
            }
            iv = interval_image(&self.family, iv, self.branches[br].iterate);
        }
        match land {
            Some(r) => iv.lo >= -r * (1.0 + 1e-12) && iv.hi <= r * (1.0 + 1e-12),
            None => true,
        }
    }

    /// Maximal interval around `y` inside `[lo, hi]` following `itinerary`.
    fn component(
        &self,
        y: f64,
        itinerary: &[usize],
        lo: f64,
        hi: f64,
        avoid: Option<f64>,
        land: Option<f64>,
    ) -> RealInterval {
        let side = |bound: f64| {
            if self.follows(y, bound, itinerary, avoid, land) {
                bound
            } else {
                bisect_predicate(|x| self.follows(y, x, itinerary, avoid, land), y, bound, 200)
            }
        };
        RealInterval { lo: side(lo), hi: side(hi) }
    }
}

/// `s_0 >= 2` minimal with `g^{s_0 - 1}(c)` outside the central domain.
fn first_exit(g: &GeneralizedFirstReturn) -> Result<usize> {
    let t = g.central_endpoint();
    let it = g.critical_itinerary(STEP_BUDGET);
    for (j, &(x, _)) in it.iter().enumerate().skip(1) {
        if x.abs() >= t {
            return Ok(j + 1);
        }
    }
    if it.len() < STEP_BUDGET {
        return Err(Error::BudgetExhausted { budget: g.budget });
    }
    Err(Error::AttractorDetected)
}

/// The low-return renormalization `Rg`.
///
/// `s_0` is the first exit of the central orbit from `T^1`, `s >= s_0` the
/// first time the central component `T^{2,s-1}` of the domain of `g^s`
/// maps onto something meeting `T^1`, and `T^2 = T^{2,s-1}`. On `T^1 \ T^2`
/// a point `x` follows `c` until the first `s(x)` where `g^{s(x)}(x)` and
/// `g^{s(x)}(c)` lie in different branches; there `Rg = g^{s(x)+1}`.
/// Elsewhere `Rg = g`. The result keeps `T^0` as its range and outer interval.
pub fn renorm_low(g: &GeneralizedFirstReturn) -> Result<GeneralizedFirstReturn> {
    if !g.has_low_return() {
        return Err(Error::HighReturn);
    }
    let fam = &g.family;
    let t = g.central_endpoint();
    let s0 = first_exit(g)?;
    let it: Vec<usize> = g.critical_itinerary(STEP_BUDGET).into_iter().map(|(_, b)| b).collect();
    let mut s = s0;
    let (t2, m) = loop {
        if s > it.len() {
            return Err(Error::BudgetExhausted { budget: g.budget });
        }
        let path = &it[..s];
        let comp = g.component(0.0, path, -t, t, None, None);
        let img = interval_image(fam, comp, g.iterate_sum(path));
        if img.lo < t && img.hi > -t {
            break (comp, g.iterate_sum(path));
        }
        s += 1;
    };

    let mut branches: Vec<GBranch> =
        g.branches.iter().enumerate().filter(|&(i, _)| i != g.central_index).map(|(_, b)| *b).collect();
    let central_index = branches.len();
    branches.push(GBranch { domain: t2, iterate: m, central: true, extension: extension_witness(fam, t2, m, g.range) });
    let mut r = GeneralizedFirstReturn {
        family: *fam,
        outer: g.range,
        base: g.central().domain,
        range: g.range,
        branches,
        central_index,
        budget: g.budget,
    };

    // follow the critical orbit of Rg, adding branches on T^1 \ T^2
    let mut y = fam.iterate(0.0, m);
    let mut spent = m;
    while spent < g.budget {
        if let Some(b) = r.branch_index(y) {
            let k = r.branches[b].iterate;
            spent += k;
            y = fam.iterate(y, k);
            continue;
        }
        if y.abs() >= t {
            break;
        }
        // y in T^1 \ T^2: find s(y)
        let mut path = Vec::new();
        let (mut a, mut c) = (y, 0.0);
        let mut split = None;
        for i in 0..=s {
            let (Some(ba), Some(bc)) = (g.branch_index(a), g.branch_index(c)) else {
                break;
            };
            path.push(ba);
            if i > 0 && ba != bc {
                split = Some(i);
                break;
            }
            a = fam.iterate(a, g.branches[ba].iterate);
            c = fam.iterate(c, g.branches[bc].iterate);
        }
        let Some(_) = split else {
            return Err(Error::Degenerate(format!("orbit point {y} never separates from c")));
        };
        let domain = g.component(y, &path, -t, t, None, None);
        let k = g.iterate_sum(&path);
        r.branches.push(GBranch {
            domain,
            iterate: k,
            central: false,
            extension: extension_witness(fam, domain, k, g.range),
        });
        spent += k;
        y = fam.iterate(y, k);
    }
    Ok(r)
}

/// The escape interval of a high-return map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeInterval {
    /// `W^1 = U_k = [z_k, tau(z_k)]`.
    pub interval: RealInterval,
    /// Orientation-preserving fixed point of the central branch.
    pub fixed_point: f64,
    /// `z_0 = ∂T^0, z_1, ..., z_k` on the side of the fixed point.
    pub chain: Vec<f64>,
    pub k: usize,
}

impl EscapeInterval {
    /// The staged map: `g^{i+1}` on `U_i \ U_{i+1}` for `i < k`, the first
    /// return of `g` to `U_k` on `U_k`.
    pub fn staged_map(&self, g: &GeneralizedFirstReturn, x: f64) -> Option<f64> {
        let a = x.abs();
        let zk = self.chain[self.k].abs();
        if a < zk {
            let mut y = g.apply(x)?;
            for _ in 0..STEP_BUDGET {
                if y.abs() < zk {
                    return Some(y);
                }
                y = g.apply(y)?;
            }
            return None;
        }
        let i = (0..self.k).find(|&i| a < self.chain[i].abs() && a >= self.chain[i + 1].abs())?;
        g.apply_n(x, i + 1)
    }
}

/// `W^1` and the first return map of `g` to it, as a member of the class
/// with outer interval `T^0`.
pub fn escape_interval(g: &GeneralizedFirstReturn) -> Result<(EscapeInterval, GeneralizedFirstReturn)> {
    if g.has_low_return() {
        return Err(Error::Degenerate("escape interval needs a high return".into()));
    }
    let fam = &g.family;
    let b = *g.central();
    let t = b.domain.hi;
    let gmap = |y: f64| fam.iterate(y, b.iterate);
    let sigma = if fam.derivative_iterate(0.5 * t, b.iterate) > 0.0 { 1.0 } else { -1.0 };
    let x = crate::numeric::bisect(|y| gmap(y) - y, 0.0, sigma * t, 0.0)?;
    let gc = gmap(0.0);
    let w0 = g.range.hi;
    let mut chain = vec![sigma * w0, sigma * t];
    let k = loop {
        let k = chain.len() - 1;
        let zk = chain[k];
        if gc * sigma < 0.0 && gc.abs() >= zk.abs() {
            break k;
        }
        if k >= STEP_BUDGET || (zk - x).abs() <= 1e-14 * t || gc * sigma >= 0.0 {
            return Err(Error::Renormalizable { depth: k });
        }
        let next = crate::numeric::bisect(|y| gmap(y) - zk, x, zk, 0.0)?;
        chain.push(next);
    };
    let z = chain[k].abs();
    let esc = EscapeInterval { interval: RealInterval::symmetric(z), fixed_point: x, chain, k };

    // first return of g to U_k along the critical orbit
    let it = g.critical_itinerary(STEP_BUDGET);
    let mut branches: Vec<GBranch> = Vec::new();
    for (n, &(y, _)) in it.iter().enumerate() {
        if y.abs() >= z || branches.iter().any(|br| br.domain.contains(y)) {
            continue;
        }
        let mut path = Vec::new();
        let mut a = y;
        let mut returned = false;
        for _ in 0..(it.len() - n) {
            let Some(bi) = g.branch_index(a) else { break };
            path.push(bi);
            a = fam.iterate(a, g.branches[bi].iterate);
            if a.abs() < z {
                returned = true;
                break;
            }
        }
        if !returned {
            continue;
        }
        let domain = g.component(y, &path, -z, z, Some(z), Some(z));
        let iterate = g.iterate_sum(&path);
        branches.push(GBranch {
            domain,
            iterate,
            central: n == 0,
            extension: extension_witness(fam, domain, iterate, g.base),
        });
    }
    if branches.first().map(|b| b.central) != Some(true) {
        return Err(Error::BudgetExhausted { budget: g.budget });
    }
    let wg = GeneralizedFirstReturn {
        family: *fam,
        outer: g.base,
        base: esc.interval,
        range: esc.interval,
        branches,
        central_index: 0,
        budget: g.budget,
    };
    Ok((esc, wg))
}

/// `T^{2,0} = T^1 ⊃ T^{2,1} ⊃ ... ⊃ T^{2,s_0-2}` with
/// `g(∂T^{2,i}) ⊂ ∂T^{2,i-1}`; empty when `s_0 = 2`.
pub fn central_cascade_intervals(g: &GeneralizedFirstReturn) -> Result<Vec<RealInterval>> {
    let s0 = first_exit(g)?;
    let fam = &g.family;
    let b = g.central();
    let mut out = Vec::new();
    let mut a = b.domain.hi;
    for _ in 1..=s0.saturating_sub(2) {
        let prev = a;
        a = bisect_predicate(|y| fam.iterate(y, b.iterate).abs() < prev, 0.0, prev, 200);
        out.push(RealInterval::symmetric(a));
    }
    Ok(out)
}
