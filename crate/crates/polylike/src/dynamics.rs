//! The family `f(z) = z^l + c1`: evaluation, orbits, fixed points and
//! inverse branches followed along real reference orbits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

/// Points of the complex plane.
pub type ComplexPoint = Complex64;

/// Relative tolerance under which two inverse roots count as equidistant.
pub const AMBIGUITY_TOL: f64 = 1e-8;

/// `f(z) = z^degree + c1` with even degree; the critical point is 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Family {
    degree: u32,
    c1: f64,
}

impl Family {
    pub fn new(degree: u32, c1: f64) -> Result<Self> {
        if degree < 2 || !degree.is_multiple_of(2) {
            return Err(Error::InvalidFamily(format!("degree {degree} must be even and >= 2")));
        }
        if !c1.is_finite() {
            return Err(Error::InvalidFamily("critical value must be finite".into()));
        }
        Ok(Family { degree, c1 })
    }

    /// For callers that already validated `degree` and scan finite `c1`.
    pub(crate) fn new_unchecked(degree: u32, c1: f64) -> Self {
        Family { degree, c1 }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The `l` of the family as a float.
    pub fn ell(&self) -> f64 {
        self.degree as f64
    }

    pub fn critical_value(&self) -> f64 {
        self.c1
    }

    /// Orbits leaving the disc of this radius go to infinity.
    pub fn escape_radius(&self) -> f64 {
        self.c1.abs().max(2.0) + 1.0
    }

    /// Real evaluation.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        x.powi(self.degree as i32) + self.c1
    }

    /// `f^n(x)` on the real line.
    pub fn iterate(&self, mut x: f64, n: usize) -> f64 {
        for _ in 0..n {
            x = self.apply(x);
        }
        x
    }

    /// `f'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        self.ell() * x.powi(self.degree as i32 - 1)
    }

    /// `(f^n)'(x)` by the chain rule.
    pub fn derivative_iterate(&self, mut x: f64, n: usize) -> f64 {
        let mut d = 1.0;
        for _ in 0..n {
            d *= self.derivative(x);
            x = self.apply(x);
        }
        d
    }

    /// `c_k = f^k(0)`, with `c_0 = 0`.
    pub fn critical_point_image(&self, k: usize) -> f64 {
        self.iterate(0.0, k)
    }

    /// Complex evaluation; real inputs give real outputs.
    pub fn evaluate(&self, z: ComplexPoint) -> ComplexPoint {
        if z.im == 0.0 {
            return Complex64::new(self.apply(z.re), 0.0);
        }
        z.powu(self.degree) + self.c1
    }

    /// Like [`Family::evaluate`] but reports escape beyond the escape radius.
    pub fn evaluate_checked(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        let w = self.evaluate(z);
        if !(w.norm() <= self.escape_radius()) {
            return Err(Error::Escaped { step: 1 });
        }
        Ok(w)
    }

    /// `f^n(z)` in the complex plane.
    pub fn evaluate_n(&self, mut z: ComplexPoint, n: usize) -> ComplexPoint {
        for _ in 0..n {
            z = self.evaluate(z);
        }
        z
    }
}

/// The symmetry `tau(w) = -w` with `f(tau(w)) = f(w)`.
pub fn tau(_fam: &Family, w: f64) -> f64 {
    -w
}

/// Which real root of `x^l = w - c1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn of(x: f64) -> Side {
        if x < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// Closed real interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Domain(format!("interval [{lo}, {hi}] is empty")));
        }
        Ok(RealInterval { lo, hi })
    }

    /// `[-r, r]`.
    pub fn symmetric(r: f64) -> Self {
        RealInterval { lo: -r.abs(), hi: r.abs() }
    }

    /// Smallest interval containing both points (may be degenerate).
    pub fn hull(a: f64, b: f64) -> Self {
        RealInterval { lo: a.min(b), hi: a.max(b) }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_open(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when the interiors meet.
    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    /// Exact image of the interval under the real map `f`.
    pub fn image(&self, fam: &Family) -> RealInterval {
        let (a, b) = (fam.apply(self.lo), fam.apply(self.hi));
        if self.lo < 0.0 && self.hi > 0.0 {
            RealInterval { lo: fam.critical_value(), hi: a.max(b) }
        } else {
            RealInterval::hull(a, b)
        }
    }
}

/// A real orbit `x, f(x), ..., f^n(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSegment {
    pub points: Vec<f64>,
    /// First index whose point lies beyond the escape radius.
    pub escaped_at: Option<usize>,
}

impl OrbitSegment {
    /// The orbit of `x` of length `n` (`n + 1` points).
    pub fn of(fam: &Family, x: f64, n: usize) -> Self {
        let r = fam.escape_radius();
        let mut points = Vec::with_capacity(n + 1);
        let mut escaped_at = None;
        let mut y = x;
        for k in 0..=n {
            points.push(y);
            if escaped_at.is_none() && !(y.abs() <= r) {
                escaped_at = Some(k);
                break;
            }
            y = fam.apply(y);
        }
        OrbitSegment { points, escaped_at }
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() <= 1
    }

    pub fn escaped(&self) -> bool {
        self.escaped_at.is_some()
    }
}

/// `(c_1, ..., c_n)`; escape is recorded, not raised.
pub fn critical_orbit(fam: &Family, n: usize) -> OrbitSegment {
    let mut full = OrbitSegment::of(fam, 0.0, n);
    full.points.remove(0);
    full.escaped_at = full.escaped_at.map(|k| k - 1);
    full
}

/// The fixed point `q < 0` with `f'(q) < 0`.
/// The largest fixed point `β > 0`; `[-β, β]` is then invariant.
pub fn orientation_preserving_fixed_point(fam: &Family) -> Result<f64> {
    let g = |x: f64| fam.apply(x) - x;
    let dg = |x: f64| fam.derivative(x) - 1.0;
    // g is convex on the positive axis with its minimum at x_min
    let x_min = fam.ell().powf(-1.0 / (fam.ell() - 1.0));
    if g(x_min) > 0.0 {
        return Err(Error::NoSuchFixedPoint);
    }
    numeric::root(g, dg, x_min, fam.escape_radius())
}

/// `[-β, β]` when the positive fixed point exists, otherwise the escape disc
/// on the real line.
pub fn dynamical_interval(fam: &Family) -> RealInterval {
    let b = orientation_preserving_fixed_point(fam).unwrap_or_else(|_| fam.escape_radius());
    RealInterval::symmetric(b)
}

pub fn orientation_reversing_fixed_point(fam: &Family) -> Result<f64> {
    if fam.critical_value() >= 0.0 {
        return Err(Error::NoSuchFixedPoint);
    }
    // x^l + c1 - x is strictly decreasing on the negative axis
    let g = |x: f64| fam.apply(x) - x;
    let dg = |x: f64| fam.derivative(x) - 1.0;
    let q = numeric::root(g, dg, -fam.escape_radius(), 0.0)?;
    if fam.derivative(q) >= 0.0 {
        return Err(Error::NoSuchFixedPoint);
    }
    Ok(q)
}

/// `±(w - c1)^(1/l)`.
pub fn inverse_branch_real(fam: &Family, w: f64, side: Side) -> Result<f64> {
    let d = w - fam.critical_value();
    if d < 0.0 {
        return Err(Error::Domain(format!("{w} lies below the critical value")));
    }
    Ok(side.sign() * d.powf(1.0 / fam.ell()))
}

/// All `l` complex solutions of `z^l + c1 = w`.
/// `x_1` near `c_1` with `f^{s-1}(x_1) = w`, pulling back along the signs of
/// `c_{s-1}, ..., c_1`.
pub fn pullback_along_critical_orbit(fam: &Family, w: f64, s: usize) -> Result<f64> {
    let c1 = fam.critical_value();
    let mut x = w;
    for j in (1..s).rev() {
        let d = x - c1;
        if d < 0.0 {
            return Err(Error::ExtensionTooShort { step: j });
        }
        let cj = fam.critical_point_image(j);
        x = if cj < 0.0 { -d.powf(1.0 / fam.ell()) } else { d.powf(1.0 / fam.ell()) };
    }
    Ok(x)
}

pub fn inverse_roots(fam: &Family, w: ComplexPoint) -> Vec<ComplexPoint> {
    let d = w - fam.critical_value();
    let l = fam.ell();
    let r = d.norm().powf(1.0 / l);
    let a = d.arg() / l;
    let half = fam.degree() / 2;
    let real = w.im == 0.0 && d.re >= 0.0;
    (0..fam.degree())
        .map(|k| match k {
            // keep real preimages of real points exactly real
            0 if real => Complex64::new(r, 0.0),
            k if real && k == half => Complex64::new(-r, 0.0),
            _ => Complex64::from_polar(r, a + std::f64::consts::TAU * k as f64 / l),
        })
        .collect()
}

/// Root of `z^l + c1 = w` nearest `reference`, with the distance ratio
/// `d_nearest / d_second` as a confidence measure.
pub fn nearest_inverse(fam: &Family, w: ComplexPoint, reference: ComplexPoint) -> (ComplexPoint, f64) {
    let roots = inverse_roots(fam, w);
    let (mut best, mut d1, mut d2) = (roots[0], f64::INFINITY, f64::INFINITY);
    for z in roots {
        let d = (z - reference).norm();
        if d < d1 {
            d2 = d1;
            d1 = d;
            best = z;
        } else if d < d2 {
            d2 = d;
        }
    }
    (best, if d2 > 0.0 { d1 / d2 } else { 1.0 })
}

/// Preimage of `target` under `f^n` following the real orbit
/// `reference = (x_0, ..., x_n)`: each inverse step takes the root nearest
/// the corresponding reference point.
pub fn pullback_complex_along_orbit(
    fam: &Family,
    target: ComplexPoint,
    reference: &OrbitSegment,
) -> Result<ComplexPoint> {
    let n = reference.len();
    let mut w = target;
    for k in (0..n).rev() {
        let (z, ratio) = nearest_inverse(fam, w, Complex64::new(reference.points[k], 0.0));
        if 1.0 - ratio <= AMBIGUITY_TOL {
            return Err(Error::BranchAmbiguity { step: n - k });
        }
        w = z;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(l: u32, c: f64) -> Family {
        Family::new(l, c).unwrap()
    }

    #[test]
    fn rejects_odd_degree() {
        assert!(Family::new(3, -1.0).is_err());
        assert!(Family::new(0, -1.0).is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(fam(2, 0.0).evaluate(Complex64::new(2.0, 0.0)), Complex64::new(4.0, 0.0));
        assert_eq!(fam(2, -1.0).evaluate(Complex64::new(0.0, 0.0)), Complex64::new(-1.0, 0.0));
        assert_eq!(fam(4, -1.5).evaluate(Complex64::new(1.0, 0.0)), Complex64::new(-0.5, 0.0));
        assert!(fam(2, 0.0).evaluate_checked(Complex64::new(5.0, 0.0)).is_err());
    }

    #[test]
    fn tau_examples() {
        let f = fam(2, -1.0);
        assert_eq!(tau(&f, 0.3), -0.3);
        assert_eq!(tau(&f, 0.0), 0.0);
        assert_eq!(tau(&f, -1.2), 1.2);
    }

    #[test]
    fn critical_orbit_period_two() {
        let o = critical_orbit(&fam(2, -1.0), 4);
        assert_eq!(o.points, vec![-1.0, 0.0, -1.0, 0.0]);
        assert!(!o.escaped());
        assert!(critical_orbit(&fam(2, 0.5), 20).escaped());
    }

    #[test]
    fn critical_orbit_period_three() {
        // real root of c^3 + 2c^2 + c + 1 = 0
        let c = numeric::bisect(|c| c * c * c + 2.0 * c * c + c + 1.0, -2.0, -1.5, 1e-15).unwrap();
        let o = critical_orbit(&fam(2, c), 6);
        assert!(o.points[2].abs() < 1e-6 && o.points[5].abs() < 1e-6);
    }

    #[test]
    fn reversing_fixed_point() {
        let q = orientation_reversing_fixed_point(&fam(2, -1.0)).unwrap();
        assert!((q - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-13);
        let q = orientation_reversing_fixed_point(&fam(2, -2.0)).unwrap();
        assert!((q + 1.0).abs() < 1e-13);
        assert_eq!(orientation_reversing_fixed_point(&fam(2, 0.0)), Err(Error::NoSuchFixedPoint));
    }

    #[test]
    fn inverse_branch_examples() {
        assert_eq!(inverse_branch_real(&fam(2, -1.0), 0.0, Side::Plus).unwrap(), 1.0);
        assert_eq!(inverse_branch_real(&fam(2, -1.0), 0.0, Side::Minus).unwrap(), -1.0);
        assert_eq!(inverse_branch_real(&fam(4, -1.0), -1.0, Side::Plus).unwrap(), 0.0);
        assert!(inverse_branch_real(&fam(2, -1.0), -2.0, Side::Plus).is_err());
    }

    #[test]
    fn pullback_real_consistency_and_round_trip() {
        let f = fam(2, -1.0);
        let q = orientation_reversing_fixed_point(&f).unwrap();
        let reference = OrbitSegment::of(&f, q, 2);
        let target = Complex64::new(q, 0.1);
        let p = pullback_complex_along_orbit(&f, target, &reference).unwrap();
        assert!((f.evaluate_n(p, 2) - target).norm() < 1e-10);

        let x0 = 0.3;
        let reference = OrbitSegment::of(&f, x0, 3);
        let p = pullback_complex_along_orbit(&f, Complex64::new(reference.points[3], 0.0), &reference).unwrap();
        assert!((p.re - x0).abs() < 1e-12 && p.im == 0.0);

        let empty = OrbitSegment::of(&f, 0.7, 0);
        assert_eq!(pullback_complex_along_orbit(&f, target, &empty).unwrap(), target);
    }

    #[test]
    fn pullback_detects_critical_reference() {
        let f = fam(2, -1.0);
        let reference = OrbitSegment { points: vec![0.0, -1.0], escaped_at: None };
        assert!(matches!(
            pullback_complex_along_orbit(&f, Complex64::new(-1.0, 0.0), &reference),
            Err(Error::BranchAmbiguity { .. })
        ));
    }

    #[test]
    fn interval_image_is_exact() {
        let f = fam(2, -1.0);
        let i = RealInterval::new(-0.5, 0.25).unwrap().image(&f);
        assert_eq!((i.lo, i.hi), (-1.0, -0.75));
        let i = RealInterval::new(0.5, 1.0).unwrap().image(&f);
        assert_eq!((i.lo, i.hi), (-0.75, 0.0));
    }
}
