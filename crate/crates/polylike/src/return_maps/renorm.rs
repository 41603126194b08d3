//! Periodic central intervals and the nest of central return domains.

use serde::{Deserialize, Serialize};

use crate::dynamics::{orientation_reversing_fixed_point, Family};
use crate::error::{Error, Result};
use crate::numeric::{bisect, bisect_predicate};

/// A periodic central interval `[-u, u]` of period `period`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Renormalization {
    pub period: usize,
    pub endpoint: f64,
    /// `f^period(u)`: equal to `u` or `-u`.
    pub endpoint_image: f64,
    /// `(f^period)'(u)`.
    pub endpoint_derivative: f64,
    /// Also renormalizable with period `period / 2`.
    pub half_period: bool,
}

/// Nearest positive point with `f^j = 0` for some `1 <= j < order`,
/// given the critical orbit `orbit[j] = c_j`.
pub(crate) fn closest_precritical(fam: &Family, orbit: &[f64], order: usize) -> Option<f64> {
    let c1 = fam.critical_value();
    if c1 > 0.0 {
        return None;
    }
    let mut a = (-c1).powf(1.0 / fam.ell());
    for (j, &cj) in orbit.iter().enumerate().take(order).skip(2) {
        if cj * fam.iterate(a, j) < 0.0 {
            a = bisect(|x| fam.iterate(x, j), 0.0, a, 0.0).ok()?;
        }
    }
    Some(a)
}

/// Grid size for the periodic endpoint scan.
const SCAN_POINTS: usize = 4000;

/// Returns the periodic central intervals with period `2..=max_period`.
///
/// For each candidate period `s` the endpoint is the largest solution of
/// `f^s(x) = ±x` below the nearest precritical point of order `< s` such
/// that `f^i([0, x])` misses `(-x, x)` for `1 <= i < s` and `c_s ∈ [-x, x]`.
pub fn detect_renormalization(fam: &Family, max_period: usize) -> Vec<Renormalization> {
    let orbit: Vec<f64> = (0..=max_period).map(|j| fam.critical_point_image(j)).collect();
    if orbit.iter().any(|c| !(c.abs() <= fam.escape_radius())) || fam.critical_value() > 0.0 {
        return Vec::new();
    }
    let l = fam.ell();
    let mut a = (-fam.critical_value()).powf(1.0 / l);
    let mut found: Vec<Renormalization> = Vec::new();
    for s in 2..=max_period {
        let j = s - 1;
        if j >= 2 && orbit[j] * fam.iterate(a, j) < 0.0 {
            match bisect(|x| fam.iterate(x, j), 0.0, a, 0.0) {
                Ok(r) => a = r,
                Err(_) => continue,
            }
        }
        let ok = |x: f64| {
            let tol = 1e-11 * x;
            (1..s).all(|i| {
                let (p, q) = (orbit[i], fam.iterate(x, i));
                let (lo, hi) = (p.min(q), p.max(q));
                hi <= -x + tol || lo >= x - tol
            })
        };
        // f^s is monotone on (0, a): roots of f^s(x) = ±x are few
        let mut best: Option<f64> = None;
        for sign in [1.0, -1.0] {
            let h = |x: f64| fam.iterate(x, s) - sign * x;
            let n = SCAN_POINTS;
            let mut prev = (1e-3 * a / n as f64, h(1e-3 * a / n as f64));
            for i in 1..n {
                let x = a * i as f64 / n as f64;
                let hx = h(x);
                if prev.1 * hx <= 0.0 {
                    if let Ok(r) = bisect(h, prev.0, x, 0.0) {
                        if r > 0.0 && orbit[s].abs() <= r * (1.0 + 1e-9) && ok(r) {
                            best = Some(best.map_or(r, |b: f64| b.max(r)));
                        }
                    }
                }
                prev = (x, hx);
            }
        }
        let Some(x) = best else { continue };
        let fx = fam.iterate(x, s);
        if (fx.abs() - x).abs() > 1e-7 * x {
            continue;
        }
        let half_period = s % 2 == 0 && found.iter().any(|r| r.period == s / 2);
        found.push(Renormalization {
            period: s,
            endpoint: x,
            endpoint_image: fx,
            endpoint_derivative: fam.derivative_iterate(x, s),
            half_period,
        });
    }
    found
}

/// One level of the nest of central return domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestLevel {
    /// Endpoint of `W_n = [-w, w]`.
    pub endpoint: f64,
    /// Return time of `c` to `W_{n-1}` (the iterate of the central branch
    /// whose domain is `W_n`); `None` for the starting level.
    pub return_time: Option<usize>,
}

/// Central domain of the first return map to `(-w, w)` and its iterate.
pub(crate) fn central_return_domain(fam: &Family, w: f64, budget: usize) -> Result<(f64, usize)> {
    let k0 = super::entry_time(fam, 0.0, w, budget).ok_or(Error::BudgetExhausted { budget })?;
    let orbit: Vec<f64> = (0..=k0).map(|j| fam.critical_point_image(j)).collect();
    let a = closest_precritical(fam, &orbit, k0).ok_or(Error::Degenerate("no precritical point".into()))?;
    // f^k0 is monotone on [0, a]
    if fam.iterate(a, k0).abs() < w {
        return Ok((a, k0));
    }
    let x = bisect_predicate(|t| fam.iterate(t, k0).abs() < w, 0.0, a, 200);
    Ok((x, k0))
}

/// `W_0 = [q, -q]` and `W_{n+1}` the central domain of the first return map to `W_n`.
pub fn central_nest(fam: &Family, levels: usize, budget: usize) -> Result<Vec<NestLevel>> {
    let q = orientation_reversing_fixed_point(fam)?;
    let mut out = vec![NestLevel { endpoint: -q, return_time: None }];
    let mut w = -q;
    for _ in 0..levels {
        let (next, k) = central_return_domain(fam, w, budget)?;
        if !(next < w) {
            return Err(Error::Renormalizable { depth: out.len() });
        }
        out.push(NestLevel { endpoint: next, return_time: Some(k) });
        w = next;
    }
    Ok(out)
}

/// How the central domain `U` of the return to `V` returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelKind {
    /// `U = V` is periodic; `half_period` when also renormalizable with period `s/2`.
    Renormalizable {
        half_period: bool,
    },
    HighReturn,
    LowReturn,
}

/// The data a construction needs at one level: `V = [-v, v]`, its central
/// return domain `U = [-u, u]` and the return time `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelData {
    pub v: f64,
    pub u: f64,
    pub period: usize,
    pub kind: LevelKind,
}

impl LevelData {
    pub fn from_renormalization(r: &Renormalization) -> Self {
        LevelData {
            v: r.endpoint,
            u: r.endpoint,
            period: r.period,
            kind: LevelKind::Renormalizable { half_period: r.half_period },
        }
    }

    /// Levels `(W_n, W_{n+1})` of the central nest, `n = 1..=count`.
    pub fn from_nest(fam: &Family, count: usize, budget: usize) -> Result<Vec<LevelData>> {
        let nest = central_nest(fam, count + 1, budget)?;
        Ok((1..=count)
            .map(|n| {
                let v = nest[n].endpoint;
                let u = nest[n + 1].endpoint;
                let s = nest[n + 1].return_time.unwrap_or(1);
                let high = fam.critical_point_image(s) * fam.iterate(u, s) <= 0.0;
                LevelData { v, u, period: s, kind: if high { LevelKind::HighReturn } else { LevelKind::LowReturn } }
            })
            .collect())
    }

    pub fn is_renormalizable(&self) -> bool {
        matches!(self.kind, LevelKind::Renormalizable { .. })
    }
}
