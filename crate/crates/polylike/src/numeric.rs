//! Bracketed root finding, predicate bisection and sign-change scans.

use crate::error::{Error, Result};

/// Absolute width at which bracketing bisection stops.
pub const BISECT_TOL: f64 = 1e-13;

/// Bisection on a sign change of `f` in `[lo, hi]`, stopped at `tol` width.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoRoot { lo: a, hi: b });
    }
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// One damped Newton step from `x`, kept only if it stays in `[lo, hi]`
/// and does not increase `|f|`.
pub fn newton_polish<F, D>(f: F, df: D, x: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let fx = f(x);
    let d = df(x);
    if fx == 0.0 || d == 0.0 || !d.is_finite() {
        return x;
    }
    let mut step = fx / d;
    for _ in 0..8 {
        let y = x - step;
        if y >= lo.min(hi) && y <= lo.max(hi) && f(y).abs() <= fx.abs() {
            return y;
        }
        step *= 0.5;
    }
    x
}

/// Bisection followed by a single damped Newton polish.
pub fn root<F, D>(f: F, df: D, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let x = bisect(&f, lo, hi, BISECT_TOL)?;
    Ok(newton_polish(&f, &df, x, lo, hi))
}

/// Boundary of a monotone predicate: `pred(good)` holds, `pred(bad)` fails.
/// Returns the last point known to satisfy the predicate.
pub fn bisect_predicate<P: Fn(f64) -> bool>(pred: P, mut good: f64, mut bad: f64, iters: usize) -> f64 {
    for _ in 0..iters {
        let m = 0.5 * (good + bad);
        if m == good || m == bad {
            break;
        }
        if pred(m) {
            good = m;
        } else {
            bad = m;
        }
    }
    good
}

/// A root reported by [`scan_roots`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScannedRoot {
    pub x: f64,
    /// 1 for a sign change, 2 for a touching (double) root.
    pub multiplicity: u8,
}

/// All roots of `f` on `[lo, hi]`: sign changes on a grid of width `step`
/// refined by bisection, plus touching roots found where `df` changes sign
/// and `|f|` is below `double_tol` at the critical point.
pub fn scan_roots<F, D>(f: F, df: D, lo: f64, hi: f64, step: f64, double_tol: f64) -> Vec<ScannedRoot>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let n = (((hi - lo) / step).ceil() as usize).max(1);
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    let mut d0 = df(x0);
    if f0 == 0.0 {
        out.push(ScannedRoot { x: x0, multiplicity: 1 });
    }
    for i in 1..=n {
        let x1 = if i == n { hi } else { lo + h * i as f64 };
        let f1 = f(x1);
        let d1 = df(x1);
        if f1 == 0.0 {
            let after = f(x1 + h);
            let touching = f0 != 0.0 && after != 0.0 && f0.signum() == after.signum();
            out.push(ScannedRoot { x: x1, multiplicity: if touching { 2 } else { 1 } });
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            if let Ok(r) = root(&f, &df, x0, x1) {
                out.push(ScannedRoot { x: r, multiplicity: 1 });
            }
        } else if d0.signum() != d1.signum() && d0 != 0.0 {
            // extremum inside the cell: a touching root if |f| vanishes there
            if let Ok(xc) = bisect(&df, x0, x1, 1e-15) {
                if f(xc).abs() < double_tol && f0.signum() == f1.signum() {
                    out.push(ScannedRoot { x: xc, multiplicity: 2 });
                }
            }
        }
        x0 = x1;
        f0 = f1;
        d0 = d1;
    }
    out
}

/// Total multiplicity of a root list.
pub fn root_count(roots: &[ScannedRoot]) -> usize {
    roots.iter().map(|r| r.multiplicity as usize).sum()
}
