//! Closest-return times of the critical orbit.

use crate::dynamics::{orientation_reversing_fixed_point, Family, OrbitSegment};
use crate::error::{Error, Result};

/// Orbit length after which the closest-return search gives up.
pub const RETURN_BUDGET: usize = 1 << 22;

/// `1, 2, 3, 5, 8, ...` (`n` terms).
pub fn fibonacci_numbers(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let next = if i < 2 { i + 1 } else { v[i - 1] + v[i - 2] };
        v.push(next);
    }
    v
}

/// Closest-return times within the first `max_k` iterates: `S_0 = 1` and
/// `S_i` the first `k > S_{i-1}` with `|c_k| < |c_{S_{i-1}}|`. Stops at escape
/// or after `limit` terms.
pub fn closest_return_times(fam: &Family, max_k: usize, limit: usize) -> Vec<usize> {
    let mut s = vec![1usize];
    let r = fam.escape_radius();
    let mut x = fam.critical_value();
    let mut best = x.abs();
    for k in 2..=max_k {
        if s.len() >= limit {
            break;
        }
        x = fam.apply(x);
        if !(x.abs() <= r) {
            break;
        }
        if x.abs() < best {
            best = x.abs();
            s.push(k);
        }
    }
    s
}

/// Cutting times within the first `max_k` iterates: `S_0 = 1` and `S_i` the
/// first `k > S_{i-1}` with `c_k` and `c_{k - S_{i-1}}` on opposite sides of
/// `c` (closed). They agree with the closest returns for Fibonacci maps and,
/// unlike them, vary monotonically with the kneading sequence.
pub fn cutting_times(fam: &Family, max_k: usize, limit: usize) -> Vec<usize> {
    let mut s = vec![1usize];
    let r = fam.escape_radius();
    let mut orbit = vec![0.0, fam.critical_value()];
    for k in 2..=max_k {
        if s.len() >= limit {
            break;
        }
        let x = fam.apply(orbit[k - 1]);
        if !(x.abs() <= r) {
            break;
        }
        orbit.push(x);
        let prev = *s.last().unwrap();
        if orbit[k] * orbit[k - prev] <= 0.0 {
            s.push(k);
        }
    }
    s
}

/// The first `depth` closest-return times.
pub fn fibonacci_return_times(fam: &Family, depth: usize) -> Result<Vec<usize>> {
    let s = closest_return_times(fam, RETURN_BUDGET, depth);
    if s.len() < depth {
        let step = OrbitSegment::of(fam, 0.0, RETURN_BUDGET.min(1 << 16)).escaped_at;
        return Err(match step {
            Some(step) => Error::Escaped { step },
            None => Error::DepthExhausted { found: s.len() },
        });
    }
    Ok(s)
}

/// `x_0 = q`, `x_{n+1}` the point of `f^{-S_n}(x_n)` closest to `c`
/// (positive representative).
pub fn fibonacci_nice_points(fam: &Family, count: usize) -> Result<Vec<f64>> {
    let q = orientation_reversing_fixed_point(fam)?;
    let times = fibonacci_return_times(fam, count.max(1))?;
    let c1 = fam.critical_value();
    let l = fam.ell();
    let mut out = vec![q];
    while out.len() < count {
        let n = out.len() - 1;
        let mut frontier = vec![*out.last().unwrap()];
        for _ in 0..times[n] {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for &y in &frontier {
                if y >= c1 {
                    let r = (y - c1).powf(1.0 / l);
                    next.push(r);
                    next.push(-r);
                }
            }
            next.sort_by(f64::total_cmp);
            next.dedup();
            frontier = next;
        }
        let best = frontier.iter().map(|y| y.abs()).fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            return Err(Error::DepthExhausted { found: out.len() });
        }
        out.push(best);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_prefix() {
        assert_eq!(fibonacci_numbers(8), vec![1, 2, 3, 5, 8, 13, 21, 34]);
    }

    #[test]
    fn doubling_closest_returns() {
        let fam = Family::new(2, -1.3815474844320614).unwrap();
        assert_eq!(fibonacci_return_times(&fam, 4).unwrap(), vec![1, 2, 4, 8]);
    }

    #[test]
    fn fibonacci_map_returns_at_fibonacci_times() {
        let fam = Family::new(2, -1.8705286321646).unwrap();
        let s = fibonacci_return_times(&fam, 10).unwrap();
        assert_eq!(s, fibonacci_numbers(10));
    }
}
