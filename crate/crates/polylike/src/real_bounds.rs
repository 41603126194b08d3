//! Cross-ratios, the explicit bounds `K_ℓ` and `K*_ℓ`, measured space
//! ratios, the expansion point near a renormalization interval and the
//! `|R'|/|I'|` ratio of a low-return cascade.

use serde::{Deserialize, Serialize};

use crate::dynamics::{dynamical_interval, pullback_along_critical_orbit, Family, RealInterval, Side};
use crate::error::{Error, Result};
use crate::numeric::bisect_predicate;
use crate::return_maps::{interval_image, GeneralizedFirstReturn, LevelData, LevelKind};

/// An interval `T` with a strictly interior `J`; `L`, `R` are the
/// components of `T \ J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossRatioFrame {
    pub t: RealInterval,
    pub j: RealInterval,
}

impl CrossRatioFrame {
    pub fn new(t: RealInterval, j: RealInterval) -> Result<Self> {
        if !(t.lo < j.lo && j.hi < t.hi && j.lo < j.hi) {
            return Err(Error::Domain(format!("{j:?} is not strictly inside {t:?}")));
        }
        Ok(CrossRatioFrame { t, j })
    }

    pub fn left(&self) -> RealInterval {
        RealInterval { lo: self.t.lo, hi: self.j.lo }
    }

    pub fn right(&self) -> RealInterval {
        RealInterval { lo: self.j.hi, hi: self.t.hi }
    }
}

/// `C(T, J) = |J||T| / (|L||R|)`.
pub fn cross_ratio_c(frame: &CrossRatioFrame) -> f64 {
    frame.j.length() * frame.t.length() / (frame.left().length() * frame.right().length())
}

/// `B(t, j) = |t||j| / (|l ∪ j||r ∪ j|)`.
pub fn cross_ratio_b(t: RealInterval, j: RealInterval) -> Result<f64> {
    if !t.contains_interval(&j) {
        return Err(Error::Domain(format!("{j:?} is not inside {t:?}")));
    }
    let lj = j.hi - t.lo;
    let rj = t.hi - j.lo;
    Ok(t.length() * j.length() / (lj * rj))
}

fn check_degree(ell: u32) -> Result<f64> {
    if ell < 2 || !ell.is_multiple_of(2) {
        return Err(Error::Domain(format!("degree {ell} must be even and at least 2")));
    }
    Ok(ell as f64)
}

fn check_unit(name: &str, y: f64) -> Result<()> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain(format!("{name} = {y} must lie in (0, 1)")));
    }
    Ok(())
}

/// `t (y^{1/ℓ} - t^{1/ℓ}) / (t^{1/ℓ} y (1 - y^{1/ℓ}))`, for `0 < t < y < 1`.
///
/// As a function of `t` this increases up to `t* = y (1 - 1/ℓ)^ℓ`, where it
/// equals [`k_star`], and decreases afterwards.
pub fn k_bound(ell: u32, t: f64, y: f64) -> Result<f64> {
    let l = check_degree(ell)?;
    check_unit("y", y)?;
    if !(t > 0.0 && t < y) {
        return Err(Error::Domain(format!("t = {t} must lie in (0, {y})")));
    }
    let (tr, yr) = (t.powf(1.0 / l), y.powf(1.0 / l));
    Ok(t * (yr - tr) / (tr * y * (1.0 - yr)))
}

/// The maximizer `t* = y (1 - 1/ℓ)^ℓ` of [`k_bound`].
pub fn k_bound_argmax(ell: u32, y: f64) -> Result<f64> {
    let l = check_degree(ell)?;
    check_unit("y", y)?;
    Ok(y * (1.0 - 1.0 / l).powf(l))
}

/// `K*_ℓ(y) = (1 - 1/ℓ)^{ℓ-1} / (ℓ (1 - y^{1/ℓ}))`.
pub fn k_star(ell: u32, y: f64) -> Result<f64> {
    let l = check_degree(ell)?;
    check_unit("y", y)?;
    Ok((1.0 - 1.0 / l).powf(l - 1.0) / (l * (1.0 - y.powf(1.0 / l))))
}

/// `lim_{ℓ→∞} K*_ℓ(y) = 1 / (e ln(1/y))`.
pub fn k_star_limit(y: f64) -> Result<f64> {
    check_unit("y", y)?;
    Ok(1.0 / (std::f64::consts::E * (1.0 / y).ln()))
}

/// `y = 1 / (1 + space)` for a one-sided space `|L| / |J ∪ R|`.
pub fn y_from_space(space: f64) -> Result<f64> {
    if !(space > 0.0) {
        return Err(Error::Domain(format!("space {space} must be positive")));
    }
    Ok(1.0 / (1.0 + space))
}

/// Largest interval `l` adjacent to `adjacent_to` on side `direction` on
/// which `f^s` is monotone, capped at the boundary of the dynamical interval
/// `[-β, β]`.
pub fn maximal_monotone_interval(
    fam: &Family,
    adjacent_to: RealInterval,
    s: usize,
    direction: Side,
) -> Result<RealInterval> {
    let sign = direction.sign();
    let e = if sign > 0.0 { adjacent_to.hi } else { adjacent_to.lo };
    let monotone = |x: f64| {
        let mut iv = RealInterval::hull(e, x);
        for _ in 0..s {
            if iv.contains_open(0.0) {
                return false;
            }
            iv = iv.image(fam);
        }
        true
    };
    let cap = dynamical_interval(fam).hi.max(e.abs());
    let scale = adjacent_to.length().max(e.abs()).max(1e-300);
    if !monotone(e + sign * 1e-12 * scale) {
        return Err(Error::EmptyInterval);
    }
    let mut step = 1e-3 * scale;
    let mut good = e;
    let far = loop {
        let cand = e + sign * step;
        if cand.abs() >= cap {
            break if monotone(sign * cap) { None } else { Some(sign * cap) };
        }
        if !monotone(cand) {
            break Some(cand);
        }
        good = cand;
        step *= 2.0;
    };
    let end = match far {
        None => sign * cap,
        Some(bad) => bisect_predicate(monotone, good, bad, 200),
    };
    Ok(RealInterval::hull(e, end))
}

/// Which lower bound applies to a measured space ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceBound {
    /// Renormalizable, not of half period: `0.6`.
    Renormalizable,
    /// Renormalizable of period `s` and `s/2`: `0.5`.
    HalfPeriod,
    /// High return, not renormalizable: `1/3`.
    HighReturn,
}

impl SpaceBound {
    pub fn value(self) -> f64 {
        match self {
            SpaceBound::Renormalizable => 0.6,
            SpaceBound::HalfPeriod => 0.5,
            SpaceBound::HighReturn => 1.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceMeasurement {
    pub level: LevelData,
    /// `|L| / |f(V)|`, with `L = L_0` in the high-return case.
    pub ratio: f64,
    /// `|f^s(l)| / |f(V)|`.
    pub image_ratio: f64,
    pub bound: Option<SpaceBound>,
    /// `ratio - bound`.
    pub margin: Option<f64>,
    /// Interval `l` left of `Û` on which `f^s` is monotone.
    pub l: RealInterval,
    /// `Û ∋ c_1` with `f^{s-1}(Û) = V`.
    pub u_hat: RealInterval,
}

/// `Û`: the component of `f^{-(s-1)}(V)` containing `c_1`.
fn critical_value_pullback(fam: &Family, v: f64, s: usize) -> Result<RealInterval> {
    let a = pullback_along_critical_orbit(fam, v, s)?;
    let b = pullback_along_critical_orbit(fam, -v, s)?;
    Ok(RealInterval::hull(a, b))
}

/// `|L_0| / |f(V)|` where `L_0` spans from `f(V)` to the nearest disjoint
/// `f^i(V)`, `2 <= i <= s''`, and `s''` is the first time `f^{s''-1}(V) ∋ c`.
fn l0_ratio(fam: &Family, v: f64, s: usize) -> Option<f64> {
    let l = fam.ell();
    let vf = fam.critical_value() + v.powf(l);
    let mut iv = RealInterval::symmetric(v).image(fam);
    let mut best = f64::INFINITY;
    for _ in 2..=s {
        let contained_c = iv.contains(0.0);
        iv = iv.image(fam);
        if iv.lo > vf {
            best = best.min(iv.hi);
        }
        if contained_c {
            // iv = f^i(V) with f^{i-1}(V) ∋ c, so i = s''
            break;
        }
    }
    best.is_finite().then(|| (best - vf) / v.powf(l))
}

/// Space around `f(V)` at one level.
pub fn measure_space_ratio(fam: &Family, level: &LevelData) -> Result<SpaceMeasurement> {
    let s = level.period;
    let v = level.v;
    let fv = v.powf(fam.ell());
    let u_hat = critical_value_pullback(fam, v, s)?;
    let l = maximal_monotone_interval(fam, u_hat, s, Side::Minus)?;
    let big_l = interval_image(fam, l, s);
    let image_ratio = big_l.length() / fv;
    let (ratio, bound) = match level.kind {
        LevelKind::Renormalizable { half_period: true } => (image_ratio, Some(SpaceBound::HalfPeriod)),
        LevelKind::Renormalizable { half_period: false } => (image_ratio, Some(SpaceBound::Renormalizable)),
        LevelKind::HighReturn => {
            let r0 = l0_ratio(fam, v, s).ok_or(Error::Degenerate("no image disjoint from f(V)".into()))?;
            (r0, Some(SpaceBound::HighReturn))
        }
        LevelKind::LowReturn => (image_ratio, None),
    };
    Ok(SpaceMeasurement {
        level: *level,
        ratio,
        image_ratio,
        bound,
        margin: bound.map(|b| ratio - b.value()),
        l,
        u_hat,
    })
}

/// A point `ũ` right of `u` expanded by `f^s`, and `u_*` with
/// `f^{s-1}(u_*) = -f^s(ũ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionPoint {
    pub u_tilde: f64,
    pub u_star: f64,
    /// Measured `ℓ |T \ U| / |u|` on one side.
    pub c0: f64,
    /// Largest `C_1 <= C_0` for which the search succeeded.
    pub c1: f64,
    /// `ℓ² (|f^s(ũ)| / |ũ| - 1)`.
    pub c2: f64,
    /// `|f^s(ũ)| - |ũ|`.
    pub expansion_margin: f64,
    /// `|f^{s-1}(u_*) + f^s(ũ)|`.
    pub residual: f64,
}

/// Search for `ũ` in the monotone extension `T` right of `u` with
/// `|f^s(ũ)| - u ∈ [C_1/(2ℓ), C_1/ℓ] u` and `|f^s(ũ)| >= (1 + C_2/ℓ²) ũ`,
/// maximizing `C_2`. `C_1` starts at the measured space and is halved
/// until a point is found.
pub fn find_expansion_point(fam: &Family, s: usize, u: f64) -> Result<ExpansionPoint> {
    let l = fam.ell();
    let t = maximal_monotone_interval(fam, RealInterval::symmetric(u), s, Side::Plus)?;
    let c0 = l * (t.hi - u) / u;
    const SAMPLES: usize = 2000;
    let mut c1 = c0;
    for _ in 0..40 {
        let mut best: Option<(f64, f64)> = None;
        for i in 1..SAMPLES {
            let x = u + (t.hi - u) * i as f64 / SAMPLES as f64;
            let y = fam.iterate(x, s).abs();
            let gain = (y - u) / u;
            if gain < c1 / (2.0 * l) || gain > c1 / l {
                continue;
            }
            let c2 = l * l * (y / x - 1.0);
            if c2 > 0.0 && best.is_none_or(|(_, b)| c2 > b) {
                best = Some((x, c2));
            }
        }
        if let Some((x, c2)) = best {
            let fx = fam.iterate(x, s);
            let u_star = pullback_along_critical_orbit(fam, -fx, s)?;
            let residual = (fam.iterate(u_star, s - 1) + fx).abs();
            return Ok(ExpansionPoint { u_tilde: x, u_star, c0, c1, c2, expansion_margin: fx.abs() - x, residual });
        }
        c1 *= 0.5;
    }
    Err(Error::SearchFailed(format!("no expanded point in ({u}, {}) for C_1 down to {c1:e} (C_0 = {c0})", t.hi)))
}

/// `|R'| / |I'|` for the central branch of `g` (a cascade member `R^k g`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiRatio {
    /// `A ⊃ f(T^{k+1})` mapped onto `T^0` by `f^{m-1}`.
    pub a: RealInterval,
    /// `|R'| = (t^{k+1})^ℓ` with `t^{k+1}` the half-length of `T^{k+1}`.
    pub r_prime: f64,
    /// `|I'|`, the part of `A` left of `c_1`.
    pub i_prime: f64,
    pub ratio: f64,
    /// `(|T^{k+1}| / |T^0|)^ℓ`.
    pub comparison: f64,
}

pub fn measure_ri_ratio(g: &GeneralizedFirstReturn) -> Result<RiRatio> {
    let fam = &g.family;
    let b = g.central();
    let t0 = g.range.hi;
    let m = b.iterate;
    let a = critical_value_pullback(fam, t0, m)?;
    let c1 = fam.critical_value();
    let tk = b.domain.hi;
    let r_prime = tk.powf(fam.ell());
    let i_prime = c1 - a.lo;
    if !(i_prime > 0.0) {
        return Err(Error::Degenerate(format!("pullback {a:?} does not extend left of c_1")));
    }
    Ok(RiRatio {
        a,
        r_prime,
        i_prime,
        ratio: r_prime / i_prime,
        comparison: (b.domain.length() / g.range.length()).powf(fam.ell()),
    })
}
