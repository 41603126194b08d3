//! Parameters `c_1` with prescribed combinatorics: superstable periods,
//! the period-doubling cascade and Fibonacci closest returns.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Family, RealInterval};
use crate::error::{Error, Result};
use crate::numeric::{bisect, bisect_predicate};
use crate::return_maps::{closest_return_times, cutting_times, fibonacci_numbers};

/// Grid size of the coarse scans that precede bisection.
pub const SCAN_GRID: usize = 10_000;

/// `-2^{1/(ℓ-1)}`, the left end of the real connectedness locus.
pub fn min_real_parameter(degree: u32) -> f64 {
    -(2f64.powf(1.0 / (degree as f64 - 1.0)))
}

fn family(degree: u32, c1: f64) -> Result<Family> {
    Family::new(degree, c1)
}

fn critical_orbit_value(degree: u32, c1: f64, n: usize) -> f64 {
    Family::new_unchecked(degree, c1).critical_point_image(n)
}

/// True when no proper divisor `j` of `p` has `f^j(0) = 0` (to `1e-9`).
fn minimal_period_is(degree: u32, c1: f64, p: usize) -> Option<usize> {
    (1..p).filter(|j| p.is_multiple_of(*j)).find(|&j| critical_orbit_value(degree, c1, j).abs() < 1e-9)
}

/// Root of `c ↦ f_c^p(0)` in `bracket` with minimal period `p`.
pub fn superstable_parameter(degree: u32, period: usize, bracket: RealInterval) -> Result<f64> {
    family(degree, bracket.lo)?;
    let g = |c: f64| critical_orbit_value(degree, c, period);
    let c = bisect(g, bracket.lo, bracket.hi, 0.0)?;
    if let Some(found) = minimal_period_is(degree, c, period) {
        return Err(Error::WrongMinimalPeriod { found, wanted: period });
    }
    Ok(c)
}

/// Scans from `start` towards `end` in steps of `step` and returns the first
/// root of minimal period `p`.
fn first_superstable(degree: u32, period: usize, start: f64, end: f64, step: f64) -> Result<f64> {
    let dir = (end - start).signum();
    let g = |c: f64| critical_orbit_value(degree, c, period);
    let mut a = start;
    let mut ga = g(a);
    while (end - a) * dir > 0.0 {
        let b = if ((end - a) * dir) < step { end } else { a + dir * step };
        let gb = g(b);
        if ga * gb <= 0.0 {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if let Ok(c) = superstable_parameter(degree, period, RealInterval { lo, hi }) {
                return Ok(c);
            }
        }
        a = b;
        ga = gb;
    }
    Err(Error::NoRoot { lo: start.min(end), hi: start.max(end) })
}

/// Superstable parameter of period `p` closest to `0` on `[c_min, 0)`.
pub fn superstable_parameter_scan(degree: u32, period: usize) -> Result<f64> {
    let lo = min_real_parameter(degree);
    first_superstable(degree, period, -1e-12, lo, -lo / SCAN_GRID as f64)
}

/// The period-doubling cascade: superstable parameters of period
/// `2, 4, ..., 2^depth`.
pub fn doubling_cascade(degree: u32, depth: usize) -> Result<Vec<f64>> {
    let cmin = min_real_parameter(degree);
    let mut out: Vec<f64> = Vec::with_capacity(depth);
    for k in 1..=depth {
        let (prev, prev2) = match out.len() {
            0 => (0.0, 0.0),
            1 => (out[0], 0.0),
            n => (out[n - 1], out[n - 2]),
        };
        let c = if k == 1 {
            first_superstable(degree, 2, -1e-9, cmin, -cmin / SCAN_GRID as f64)?
        } else {
            let gap = prev2 - prev;
            first_superstable(degree, 1 << k, prev - gap / 200.0, cmin, gap / 200.0)?
        };
        out.push(c);
    }
    Ok(out)
}

/// The deepest superstable parameter of period `2^depth`, standing in for
/// the cascade limit.
pub fn cascade_limit(degree: u32, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::Domain("cascade depth must be at least 1".into()));
    }
    Ok(*doubling_cascade(degree, depth)?.last().unwrap())
}

/// `S_i = Fib(i)` for the first `depth` closest returns.
pub fn has_fibonacci_returns(degree: u32, c1: f64, depth: usize) -> bool {
    let fib = fibonacci_numbers(depth);
    let fam = Family::new_unchecked(degree, c1);
    closest_return_times(&fam, fib[depth - 1] + 1, depth) == fib
}

/// `S_i = Fib(i)` for the first `depth` cutting times.
fn has_fibonacci_kneading(degree: u32, c1: f64, depth: usize) -> bool {
    let fib = fibonacci_numbers(depth);
    cutting_times(&Family::new_unchecked(degree, c1), fib[depth - 1] + 1, depth) == fib
}

/// Window of parameters in `[a, b]` with Fibonacci cutting times to depth `d`:
/// the hull of the grid hits with both edges refined by bisection.
fn fibonacci_window(degree: u32, d: usize, a: f64, b: f64) -> Option<RealInterval> {
    let p = |c: f64| has_fibonacci_kneading(degree, c, d);
    let grid: Vec<f64> = (0..=SCAN_GRID).map(|i| a + (b - a) * i as f64 / SCAN_GRID as f64).collect();
    let hits: Vec<usize> = (0..=SCAN_GRID).filter(|&i| p(grid[i])).collect();
    let (&i0, &i1) = (hits.first()?, hits.last()?);
    let lo = if i0 > 0 { bisect_predicate(p, grid[i0], grid[i0 - 1], 200) } else { grid[0] };
    let hi = if i1 < SCAN_GRID { bisect_predicate(p, grid[i1], grid[i1 + 1], 200) } else { grid[SCAN_GRID] };
    (hi > lo && p(0.5 * (lo + hi))).then_some(RealInterval { lo, hi })
}

/// Nested windows of parameters with Fibonacci cutting times to depth
/// `1..=depth` inside `[c_min, -1]`, shallowest first.
pub fn fibonacci_windows(degree: u32, depth: usize) -> Result<Vec<RealInterval>> {
    family(degree, -1.0)?;
    let mut w = RealInterval { lo: min_real_parameter(degree), hi: -1.0 };
    let mut out = Vec::with_capacity(depth);
    for d in 1..=depth {
        w = fibonacci_window(degree, d, w.lo, w.hi).ok_or(Error::NoParameterInBracket { depth: d })?;
        out.push(w);
    }
    Ok(out)
}

/// Maximal nesting depth tried by [`fibonacci_parameter`].
pub const FIBONACCI_MAX_DEPTH: usize = 40;

/// A parameter whose first `depth` closest returns are Fibonacci numbers:
/// the midpoint of the deepest window reachable in double precision (a
/// shallow window's midpoint can have the right cutting times but not the
/// right closest returns), certified at `depth`.
pub fn fibonacci_parameter(degree: u32, depth: usize) -> Result<f64> {
    if depth == 0 {
        return Err(Error::Domain("Fibonacci depth must be at least 1".into()));
    }
    let (c, reached) = fibonacci_parameter_deepest(degree, FIBONACCI_MAX_DEPTH.max(depth))?;
    if reached < depth || !has_fibonacci_returns(degree, c, depth) {
        return Err(Error::NoParameterInBracket { depth });
    }
    Ok(c)
}

/// Deepest Fibonacci window reachable in double precision, up to
/// `max_depth`: its midpoint and depth.
pub fn fibonacci_parameter_deepest(degree: u32, max_depth: usize) -> Result<(f64, usize)> {
    family(degree, -1.0)?;
    let mut w = RealInterval { lo: min_real_parameter(degree), hi: -1.0 };
    let mut best = None;
    for d in 1..=max_depth {
        let Some(next) = fibonacci_window(degree, d, w.lo, w.hi) else { break };
        w = next;
        best = Some((w.mid(), d));
    }
    best.ok_or(Error::NoParameterInBracket { depth: 1 })
}

/// What a [`ParameterQuery`] looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchTarget {
    Superstable { period: usize },
    CascadeLimit { depth: usize },
    Fibonacci { depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterQuery {
    pub degree: u32,
    pub target: SearchTarget,
    /// Only used for superstable targets; otherwise the scan covers `[c_min, 0)`.
    pub bracket: Option<RealInterval>,
}

impl FromStr for SearchTarget {
    type Err = Error;

    /// `superstable:P`, `cascade:D` or `fibonacci:D`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, n) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("parameter query `{s}` is not of the form kind:N")))?;
        let n: usize = n.trim().parse().map_err(|_| Error::Config(format!("bad number in `{s}`")))?;
        match kind.trim() {
            "superstable" => Ok(SearchTarget::Superstable { period: n }),
            "cascade" => Ok(SearchTarget::CascadeLimit { depth: n }),
            "fibonacci" => Ok(SearchTarget::Fibonacci { depth: n }),
            other => Err(Error::Config(format!("unknown parameter query kind `{other}`"))),
        }
    }
}

impl ParameterQuery {
    pub fn resolve(&self) -> Result<f64> {
        match self.target {
            SearchTarget::Superstable { period } => match self.bracket {
                Some(b) => superstable_parameter(self.degree, period, b),
                None => superstable_parameter_scan(self.degree, period),
            },
            SearchTarget::CascadeLimit { depth } => cascade_limit(self.degree, depth),
            SearchTarget::Fibonacci { depth } => fibonacci_parameter(self.degree, depth),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_periods() {
        assert!((superstable_parameter_scan(2, 2).unwrap() + 1.0).abs() < 1e-14);
        let c3 = superstable_parameter_scan(2, 3).unwrap();
        // real root of c^3 + 2c^2 + c + 1
        let oracle = bisect(|c| c * c * c + 2.0 * c * c + c + 1.0, -2.0, -1.5, 0.0).unwrap();
        assert!((c3 - oracle).abs() < 1e-12);
        assert!((superstable_parameter_scan(2, 4).unwrap() + 1.310_702_641_336_833).abs() < 1e-12);
    }

    #[test]
    fn wrong_minimal_period() {
        let b = RealInterval { lo: -1.1, hi: -0.9 };
        assert_eq!(superstable_parameter(2, 4, b), Err(Error::WrongMinimalPeriod { found: 2, wanted: 4 }));
    }

    #[test]
    fn quadratic_cascade() {
        let c = doubling_cascade(2, 5).unwrap();
        let want = [-1.0, -1.310702641336833, -1.3815474844320614, -1.3969453597045605, -1.400253081214783];
        for (a, b) in c.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn fibonacci_windows_nest() {
        let w = fibonacci_windows(2, 8).unwrap();
        assert!(w.windows(2).all(|p| p[0].contains_interval(&p[1])));
        let c = fibonacci_parameter(2, 8).unwrap();
        assert!(w.last().unwrap().contains(c));
        assert!(has_fibonacci_returns(2, c, 8) && has_fibonacci_returns(2, c, 5));
        assert!((c + 1.8705286321646).abs() < 1e-9);
        let c4 = fibonacci_parameter(4, 8).unwrap();
        assert!((c4 + 1.2492567428350043).abs() < 1e-9);
    }

    #[test]
    fn query_parsing() {
        assert_eq!("cascade:6".parse::<SearchTarget>().unwrap(), SearchTarget::CascadeLimit { depth: 6 });
        assert!("spiral:2".parse::<SearchTarget>().is_err());
        assert!("fibonacci".parse::<SearchTarget>().is_err());
    }
}
