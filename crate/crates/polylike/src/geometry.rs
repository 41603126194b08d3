//! Poincaré neighborhoods `D(T;θ)`, unions of discs, power images, the
//! intersection point `Z(K,θ)`, logarithmic spirals and the scalar
//! equations whose roots control the constructions.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::RealInterval;
use crate::error::{Error, Result};
use crate::numeric::{scan_roots, ScannedRoot};

/// Angles used to trace the boundary of a star-shaped region.
pub const BOUNDARY_ANGLES: usize = 4096;
/// Step of the scalar root scans.
pub const ROOT_SCAN_STEP: f64 = 1e-4;
/// `|f| <` this at a derivative sign change counts as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

impl Disc {
    /// Round disc on the diameter `t`.
    pub fn on_diameter(t: RealInterval) -> Self {
        Disc { center: Complex64::new(t.mid(), 0.0), radius: 0.5 * t.length() }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// Inside/outside verdict with the signed Euclidean distance to the
/// boundary (positive inside).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub inside: bool,
    pub margin: f64,
}

/// Finite union of open discs with the arcs of each circle that lie on the
/// boundary of the union.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscUnion {
    discs: Vec<Disc>,
    /// For each disc, the angular intervals `[a, b] ⊂ [0, 2π]` of its circle
    /// not covered by other discs.
    exposed: Vec<Vec<(f64, f64)>>,
}

fn norm_angle(a: f64) -> f64 {
    a.rem_euclid(TAU)
}

/// Complement in `[0, 2π]` of a union of arcs given by center and half-width.
fn uncovered(arcs: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut iv: Vec<(f64, f64)> = Vec::new();
    for &(c, w) in arcs {
        if w >= PI {
            return Vec::new();
        }
        let (a, b) = (norm_angle(c - w), norm_angle(c - w) + 2.0 * w);
        if b <= TAU {
            iv.push((a, b));
        } else {
            iv.push((a, TAU));
            iv.push((0.0, b - TAU));
        }
    }
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out = Vec::new();
    let mut cur = 0.0;
    for (a, b) in iv {
        if a > cur {
            out.push((cur, a));
        }
        cur = f64::max(cur, b);
    }
    if cur < TAU {
        out.push((cur, TAU));
    }
    out
}

impl DiscUnion {
    pub fn new(mut discs: Vec<Disc>) -> Self {
        discs.dedup_by(|a, b| a == b);
        let mut unique: Vec<Disc> = Vec::with_capacity(discs.len());
        for d in discs {
            if !unique.contains(&d) {
                unique.push(d);
            }
        }
        let exposed = (0..unique.len())
            .map(|i| {
                let di = unique[i];
                let mut covers = Vec::new();
                for (j, dj) in unique.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let d = (dj.center - di.center).norm();
                    if d + di.radius <= dj.radius {
                        covers.push((0.0, PI));
                    } else if d < di.radius + dj.radius && d + dj.radius > di.radius {
                        let c = (d * d + di.radius * di.radius - dj.radius * dj.radius) / (2.0 * d * di.radius);
                        let w = c.clamp(-1.0, 1.0).acos();
                        covers.push(((dj.center - di.center).arg(), w));
                    }
                }
                uncovered(&covers)
            })
            .collect();
        DiscUnion { discs: unique, exposed }
    }

    pub fn discs(&self) -> &[Disc] {
        &self.discs
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.discs.iter().any(|d| d.contains(z))
    }

    /// Exact signed distance to the boundary, positive inside.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        if !self.contains(z) {
            return -self.discs.iter().map(|d| (z - d.center).norm() - d.radius).fold(f64::INFINITY, f64::min);
        }
        let mut best = f64::INFINITY;
        for (d, arcs) in self.discs.iter().zip(&self.exposed) {
            let w = z - d.center;
            let r = w.norm();
            let phi = norm_angle(w.arg());
            for &(a, b) in arcs {
                let dist = if r == 0.0 || (a <= phi && phi <= b) {
                    (r - d.radius).abs()
                } else {
                    let pa = d.center + Complex64::from_polar(d.radius, a);
                    let pb = d.center + Complex64::from_polar(d.radius, b);
                    (z - pa).norm().min((z - pb).norm())
                };
                best = best.min(dist);
            }
        }
        best
    }

    pub fn containment(&self, z: Complex64) -> Containment {
        let margin = self.signed_distance(z);
        Containment { inside: self.contains(z), margin }
    }

    /// Farthest boundary point on the ray `origin + t e^{iφ}`, `t >= 0`.
    pub fn radial(&self, origin: Complex64, phi: f64) -> f64 {
        let dir = Complex64::from_polar(1.0, phi);
        let mut best = 0.0f64;
        for d in &self.discs {
            let c = d.center - origin;
            let b = (c.conj() * dir).re;
            let disc = b * b - (c.norm_sqr() - d.radius * d.radius);
            if disc >= 0.0 {
                best = best.max(b + disc.sqrt());
            }
        }
        best
    }

    /// Boundary point in direction `φ` from `origin`.
    pub fn radial_point(&self, origin: Complex64, phi: f64) -> Complex64 {
        origin + Complex64::from_polar(self.radial(origin, phi), phi)
    }

    /// Angles tracing the boundary of the union, assumed star-shaped about
    /// `origin`: `angles` equally spaced angles from `φ = 0`, each gap split
    /// until consecutive boundary points are at most `step` apart.
    pub fn boundary_angles(&self, origin: Complex64, angles: usize, step: f64) -> Vec<f64> {
        let n = angles.max(3);
        let mut out = Vec::with_capacity(n * 2);
        for k in 0..n {
            let (p0, p1) = (TAU * k as f64 / n as f64, TAU * (k + 1) as f64 / n as f64);
            let gap = (self.radial_point(origin, p1) - self.radial_point(origin, p0)).norm();
            let m = ((gap / step) as usize + 1).max(1);
            out.extend((0..m).map(|j| p0 + (p1 - p0) * j as f64 / m as f64));
        }
        out
    }

    pub fn boundary(&self, origin: Complex64, angles: usize, step: f64) -> SampledCurve {
        let points =
            self.boundary_angles(origin, angles, step).into_iter().map(|p| self.radial_point(origin, p)).collect();
        SampledCurve { points, closed: true }
    }
}

/// `D(T;θ)`: points of the plane from which `T` is seen under an angle
/// `>= π - θ`; the union of two discs through the endpoints of `T` whose
/// boundary arcs meet `ℝ` at angle `θ`. `θ = π/2` is the round disc `D_*(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareNeighborhood {
    pub interval: RealInterval,
    pub angle: f64,
}

impl PoincareNeighborhood {
    pub fn new(interval: RealInterval, angle: f64) -> Result<Self> {
        if !(angle > 0.0 && angle <= FRAC_PI_2) {
            return Err(Error::Domain(format!("angle {angle} must lie in (0, π/2]")));
        }
        if !(interval.length() > 0.0) {
            return Err(Error::Domain(format!("interval {interval:?} is degenerate")));
        }
        Ok(PoincareNeighborhood { interval, angle })
    }

    /// `D_*(T)`.
    pub fn round(interval: RealInterval) -> Result<Self> {
        Self::new(interval, FRAC_PI_2)
    }

    /// The two discs: centers `m ± i h cot θ`, radius `h / sin θ`.
    pub fn discs(&self) -> [Disc; 2] {
        let m = self.interval.mid();
        let h = 0.5 * self.interval.length();
        let (s, c) = self.angle.sin_cos();
        let r = h / s;
        let off = h * c / s;
        [Disc { center: Complex64::new(m, off), radius: r }, Disc { center: Complex64::new(m, -off), radius: r }]
    }

    pub fn to_union(&self) -> DiscUnion {
        DiscUnion::new(self.discs().to_vec())
    }

    pub fn contains(&self, z: Complex64) -> Containment {
        self.to_union().containment(z)
    }

    /// Point of the upper boundary arc: for `T = (-1, 1)`,
    /// `z = 1 + (i e^{iθ} / sin θ)(1 - e^{iα})`, `α ∈ (0, 2π - 2θ)`,
    /// conjugated by the affine map `(-1, 1) → T`.
    pub fn boundary_point(&self, alpha: f64) -> Result<Complex64> {
        let th = self.angle;
        if !(alpha > 0.0 && alpha < TAU - 2.0 * th) {
            return Err(Error::Domain(format!("arc parameter {alpha} outside (0, {})", TAU - 2.0 * th)));
        }
        let i = Complex64::i();
        let z = 1.0 + i * Complex64::from_polar(1.0 / th.sin(), th) * (1.0 - Complex64::from_polar(1.0, alpha));
        let h = 0.5 * self.interval.length();
        Ok(self.interval.mid() + h * z)
    }

    /// Boundary point in direction `φ` seen from the midpoint of `T`.
    pub fn radial_point(&self, phi: f64) -> Complex64 {
        let o = Complex64::new(self.interval.mid(), 0.0);
        o + Complex64::from_polar(self.to_union().radial(o, phi), phi)
    }

    pub fn sample_boundary(&self, step: f64) -> SampledCurve {
        self.to_union().boundary(Complex64::new(self.interval.mid(), 0.0), BOUNDARY_ANGLES, step)
    }
}

/// Ordered boundary samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub points: Vec<Complex64>,
    pub closed: bool,
}

impl SampledCurve {
    /// Largest distance between consecutive samples.
    pub fn max_step(&self) -> f64 {
        let mut m = self.points.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
        if self.closed {
            if let (Some(a), Some(b)) = (self.points.first(), self.points.last()) {
                m = m.max((*a - *b).norm());
            }
        }
        m
    }

    /// Winding number of the closed polyline around `z`.
    pub fn winding_number(&self, z: Complex64) -> i64 {
        let n = self.points.len();
        if n < 2 {
            return 0;
        }
        let mut total = 0.0;
        let edges = if self.closed { n } else { n - 1 };
        for k in 0..edges {
            let a = self.points[k] - z;
            let b = self.points[(k + 1) % n] - z;
            total += (b / a).arg();
        }
        (total / TAU).round() as i64
    }

    pub fn encloses(&self, z: Complex64) -> bool {
        self.winding_number(z) != 0
    }

    /// Distance from `z` to the polyline.
    pub fn distance(&self, z: Complex64) -> f64 {
        let n = self.points.len();
        let edges = if self.closed { n } else { n.saturating_sub(1) };
        (0..edges).map(|k| segment_distance(z, self.points[k], self.points[(k + 1) % n])).fold(f64::INFINITY, f64::min)
    }

    pub fn conj(&self) -> SampledCurve {
        SampledCurve { points: self.points.iter().map(|z| z.conj()).collect(), closed: self.closed }
    }
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / l2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// Closed boundary of `P_ℓ(D)` for a neighborhood symmetric about `0`:
/// the image of the boundary arc with `arg z ∈ [0, π/ℓ]` and its conjugate.
pub fn power_image_boundary(ell: u32, d: &PoincareNeighborhood, samples: usize) -> SampledCurve {
    let l = ell as f64;
    let upper: Vec<Complex64> =
        (0..=samples).map(|k| d.radial_point(PI / l * k as f64 / samples as f64).powf(l)).collect();
    let mut points = upper.clone();
    points.extend(upper.iter().rev().skip(1).take(samples - 1).map(|z| z.conj()));
    SampledCurve { points, closed: true }
}

/// Is every sample of `inner` in `P_ℓ` of the sector `0 <= arg z <= π/ℓ` of
/// the union of `outer`? A sample `w` is folded into the closed upper half
/// plane and its root with argument in `[0, π/ℓ]` is tested. The margin is
/// the smallest signed distance of those roots to the boundary of `outer`.
pub fn sector_image_contains(ell: u32, outer: &[PoincareNeighborhood], inner: &SampledCurve) -> Result<Containment> {
    let union = DiscUnion::new(outer.iter().flat_map(|d| d.discs()).collect());
    let l = ell as f64;
    let root = |w: Complex64| {
        let w = if w.im < 0.0 { w.conj() } else { w };
        Complex64::from_polar(w.norm().powf(1.0 / l), w.arg() / l)
    };
    let n = inner.points.len();
    let mut margin = f64::INFINITY;
    let mut prev_inside = None;
    for k in 0..n {
        let m = union.signed_distance(root(inner.points[k]));
        let inside = m >= -1e-12;
        if k > 0 && inside && prev_inside == Some(true) {
            let mid = 0.5 * (inner.points[k] + inner.points[k - 1]);
            if union.signed_distance(root(mid)) < -1e-12 {
                return Err(Error::SamplingTooCoarse { index: k });
            }
        }
        prev_inside = Some(inside);
        margin = margin.min(m);
    }
    Ok(Containment { inside: margin >= -1e-12, margin })
}

/// `Z(K,θ)`: the upper intersection of `∂P_2(D((-1,1);θ))` with
/// `∂D((-K,1);θ)`, from `tan(α/2) = ((K-1)/2) tan θ`, `φ = 2α` and
/// `z = 1 + ((K+1)/2)(i e^{iθ} / sin θ)(1 - e^{iφ})`.
pub fn intersection_z(k: f64, theta: f64) -> Result<Complex64> {
    if !(k > 1.0) || !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::Domain(format!("need K > 1 and θ in (0, π/2), got K = {k}, θ = {theta}")));
    }
    let alpha = 2.0 * ((k - 1.0) / 2.0 * theta.tan()).atan();
    let phi = 2.0 * alpha;
    let i = Complex64::i();
    let z = 1.0
        + 0.5
            * (k + 1.0)
            * i
            * Complex64::from_polar(1.0 / theta.sin(), theta)
            * (1.0 - Complex64::from_polar(1.0, phi));
    // on ∂D((-K,1);θ): distance to the upper circle of that neighborhood
    let big = PoincareNeighborhood::new(RealInterval { lo: -k, hi: 1.0 }, theta)?;
    let [cb, _] = big.discs();
    let r1 = ((z - cb.center).norm() - cb.radius).abs() / cb.radius;
    // its square root on the upper arc of ∂D((-1,1);θ)
    let zeta = z.sqrt();
    let small = PoincareNeighborhood::new(RealInterval { lo: -1.0, hi: 1.0 }, theta)?;
    let [cs, _] = small.discs();
    let r2 = ((zeta - cs.center).norm() - cs.radius).abs() / cs.radius;
    let admissible = z.im > 0.0 && zeta.arg() > 0.0 && zeta.arg() <= FRAC_PI_2 && phi < TAU - 2.0 * theta;
    if r1 > 1e-10 || r2 > 1e-10 || !admissible {
        return Err(Error::NoIntersection(format!(
            "K = {k}, θ = {theta}: residuals {r1:e}, {r2:e}, admissible {admissible}"
        )));
    }
    Ok(z)
}

/// Largest `θ` on the grid `step, 2 step, ...` below `π/2` such that
/// [`intersection_z`] succeeds for every grid angle up to it.
pub fn intersection_theta0(k: f64, step: f64) -> Option<f64> {
    let mut best = None;
    let mut t = step;
    while t < FRAC_PI_2 {
        if intersection_z(k, t).is_err() {
            break;
        }
        best = Some(t);
        t += step;
    }
    best
}

/// `Γ(A, θ; Λ_lo, Λ_hi)`: `z(Λ) = A exp(Λ cot θ) e^{iΛ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralArc {
    pub amplitude: f64,
    pub angle: f64,
    pub lam_lo: f64,
    pub lam_hi: f64,
}

impl SpiralArc {
    pub fn new(amplitude: f64, angle: f64, lam_lo: f64, lam_hi: f64) -> Result<Self> {
        if !(amplitude >= 1.0) || !(angle > 0.0 && angle < FRAC_PI_2) || !(0.0 <= lam_lo && lam_lo < lam_hi) {
            return Err(Error::Domain(format!("bad spiral ({amplitude}, {angle}; {lam_lo}, {lam_hi})")));
        }
        Ok(SpiralArc { amplitude, angle, lam_lo, lam_hi })
    }

    pub fn point(&self, lam: f64) -> Result<Complex64> {
        if !(self.lam_lo <= lam && lam <= self.lam_hi) {
            return Err(Error::Domain(format!("Λ = {lam} outside [{}, {}]", self.lam_lo, self.lam_hi)));
        }
        Ok(spiral_point(self.amplitude, self.angle, lam))
    }

    /// Samples at most `step` apart in `Λ`.
    pub fn sample(&self, step: f64) -> SampledCurve {
        let n = (((self.lam_hi - self.lam_lo) / step).ceil() as usize).max(1);
        let points = (0..=n)
            .map(|k| {
                spiral_point(
                    self.amplitude,
                    self.angle,
                    self.lam_lo + (self.lam_hi - self.lam_lo) * k as f64 / n as f64,
                )
            })
            .collect();
        SampledCurve { points, closed: false }
    }
}

pub fn spiral_point(amplitude: f64, angle: f64, lam: f64) -> Complex64 {
    Complex64::from_polar(amplitude * (lam / angle.tan()).exp(), lam)
}

/// `A_*(K) = K / exp(2(K-1)/(K+1))`.
pub fn a_star(k: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(Error::Domain(format!("K = {k} must be at least 1")));
    }
    Ok(k / (2.0 * (k - 1.0) / (k + 1.0)).exp())
}

fn expand(roots: Vec<ScannedRoot>) -> Vec<f64> {
    roots.into_iter().flat_map(|r| std::iter::repeat_n(r.x, r.multiplicity as usize)).collect()
}

/// Nonnegative roots of `A exp{x(1 + x/(K+1))/(1+x)} - (1+x)` with
/// multiplicity; a double root appears twice.
pub fn solve_c1(a: f64, k: f64) -> Vec<f64> {
    let q = |x: f64| x * (1.0 + x / (k + 1.0)) / (1.0 + x);
    let dq = |x: f64| (1.0 + 2.0 * x / (k + 1.0) + x * x / (k + 1.0)) / ((1.0 + x) * (1.0 + x));
    let g = |x: f64| a * q(x).exp() - (1.0 + x);
    let dg = |x: f64| a * q(x).exp() * dq(x) - 1.0;
    expand(scan_roots(g, dg, 0.0, 20.0 * (k + 1.0), ROOT_SCAN_STEP, DOUBLE_ROOT_TOL))
}

/// Roots `B ∈ [0, 2(K_0-1)]` of
/// `1 + kB = A {1 + (1/ℓ) k B(1 + B/2)/(1 + kB)}^ℓ`, `k = (K_0+1)/2`.
pub fn solve_d15(a: f64, k0: f64, ell: u32) -> Vec<f64> {
    let k = 0.5 * (k0 + 1.0);
    let l = ell as f64;
    let p = |b: f64| k * b * (1.0 + 0.5 * b) / (1.0 + k * b);
    let dp = |b: f64| k * ((1.0 + b) * (1.0 + k * b) - k * b * (1.0 + 0.5 * b)) / ((1.0 + k * b) * (1.0 + k * b));
    let g = |b: f64| a * (1.0 + p(b) / l).powf(l) - (1.0 + k * b);
    let dg = |b: f64| a * (1.0 + p(b) / l).powf(l - 1.0) * dp(b) - k;
    expand(scan_roots(g, dg, 0.0, 2.0 * (k0 - 1.0), ROOT_SCAN_STEP, DOUBLE_ROOT_TOL))
}

const H3: f64 = 4.12 / 1.47;
const H2: f64 = 2.12 / 1.47;
const H0: f64 = 3.12 / (1.47 * 1.47);

/// `h(y) = y⁴ - (4.12/1.47) y³ + (2.12/1.47) y² + (4.12/1.47) y - 3.12/1.47²`.
pub fn h_polynomial(y: f64) -> f64 {
    (((y - H3) * y + H2) * y + H3) * y - H0
}

fn h_prime(y: f64) -> f64 {
    ((4.0 * y - 3.0 * H3) * y + 2.0 * H2) * y + H3
}

fn h_second(y: f64) -> f64 {
    (12.0 * y - 6.0 * H3) * y + 2.0 * H2
}

fn h_third(y: f64) -> f64 {
    24.0 * y - 6.0 * H3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HRootReport {
    pub roots: Vec<f64>,
    pub second_derivative_roots: Vec<f64>,
    pub value_at_one: f64,
    /// No root of `h` in `[1, ∞)`.
    pub no_root_from_one: bool,
}

/// Real roots of `h` and `h''` within the Cauchy bound.
pub fn h_root_report() -> HRootReport {
    let bound = 1.0 + [H3, H2, H3, H0].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let roots = expand(scan_roots(h_polynomial, h_prime, -bound, bound, ROOT_SCAN_STEP, DOUBLE_ROOT_TOL));
    let second = expand(scan_roots(h_second, h_third, -bound, bound, ROOT_SCAN_STEP, DOUBLE_ROOT_TOL));
    HRootReport {
        no_root_from_one: roots.iter().all(|&y| y < 1.0),
        roots,
        second_derivative_roots: second,
        value_at_one: h_polynomial(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(theta: f64) -> PoincareNeighborhood {
        PoincareNeighborhood::new(RealInterval { lo: -1.0, hi: 1.0 }, theta).unwrap()
    }

    #[test]
    fn boundary_point_anchor_circle_and_tangent() {
        let d = unit(0.4);
        assert!((d.boundary_point(1e-9).unwrap() - 1.0).norm() < 1e-8);
        let round = unit(FRAC_PI_2);
        for a in [0.3, 1.0, 2.5, 3.1] {
            assert!((round.boundary_point(a).unwrap().norm() - 1.0).abs() < 1e-14);
        }
        let h = 1e-7;
        let t = (d.boundary_point(2.0 * h).unwrap() - d.boundary_point(h).unwrap()).arg();
        assert!((PI - t - 0.4).abs() < 1e-6 || (t - 0.4).abs() < 1e-6, "tangent angle {t}");
        assert!(d.boundary_point(TAU).is_err());
    }

    #[test]
    fn containment_margins() {
        let d = unit(0.3);
        assert!(d.contains(Complex64::new(0.0, 0.0)).inside);
        assert!(!d.contains(Complex64::new(1.5, 0.0)).inside);
        for a in [0.1, 0.7, 2.0, 4.0, 5.5] {
            let z = d.boundary_point(a).unwrap();
            assert!(d.contains(z).margin.abs() < 1e-12);
            assert!(d.contains(z.conj()).margin.abs() < 1e-12);
        }
        // exposed-arc distance: the real point 0.9 sees the corner at 1
        let m = d.contains(Complex64::new(0.9, 0.0)).margin;
        assert!(m > 0.0 && m <= 0.1 + 1e-12);
    }

    #[test]
    fn intersection_point_converges() {
        let z = intersection_z(1.5, 1e-3).unwrap();
        assert!((z - 2.25).norm() < 1e-2);
        assert!((z.re - 2.2499991).abs() < 1e-6 && (z.im - 0.001875).abs() < 1e-6);
        for k in [1.2, 1.5, 2.0] {
            let e: Vec<f64> =
                [1e-1, 1e-2, 1e-3].iter().map(|&t| (intersection_z(k, t).unwrap() - k * k).norm()).collect();
            assert!(e[0] > e[1] && e[1] > e[2], "K = {k}: {e:?}");
        }
        assert!((intersection_z(1.0 + 1e-9, 0.2).unwrap() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn a_star_values() {
        assert!((a_star(2.2).unwrap() - 1.04).abs() < 1e-2 && a_star(2.2).unwrap() < 1.1);
        assert!((a_star(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((a_star(2.0).unwrap() - 1.02684).abs() < 1e-5);
    }

    #[test]
    fn c1_roots() {
        for k in [1.5, 2.0, 3.0] {
            let r = solve_c1(a_star(k).unwrap(), k);
            assert_eq!(r.len(), 2, "K = {k}: {r:?}");
            assert!(r.iter().all(|x| (x - (k - 1.0)).abs() < 1e-6), "K = {k}: {r:?}");
        }
        assert_eq!(solve_c1(1.001, 2.0).len(), 2);
        assert!(solve_c1(10.0, 2.0).is_empty());
    }

    #[test]
    fn d15_roots() {
        assert!(solve_d15(1.07, 1.52, 4).is_empty());
        let r = solve_d15(1.05835, 1.52, 4);
        assert!(r.iter().any(|b| (b - 1.04).abs() < 1e-3), "{r:?}");
        assert!(solve_d15(1.0, 1.52, 4).iter().any(|b| b.abs() < 1e-12));
    }

    #[test]
    fn h_report() {
        let r = h_root_report();
        assert!(r.no_root_from_one && r.value_at_one > 0.0);
        assert!((r.value_at_one - 0.9983).abs() < 1e-3);
        let s = &r.second_derivative_roots;
        assert_eq!(s.len(), 2);
        assert!((s[0] - 0.2000905878).abs() < 1e-6 && (s[1] - 1.201269956).abs() < 1e-6);
    }

    #[test]
    fn power_image_inclusions() {
        let d2 = unit(0.2);
        let inner = power_image_boundary(2, &d2, 4000);
        assert!(sector_image_contains(4, &[unit(0.2)], &inner).unwrap().inside);
        let t = 0.05;
        let big = PoincareNeighborhood::new(RealInterval { lo: -3.12, hi: 1.0 }, t).unwrap();
        let inner = big.sample_boundary(1e-3);
        let s = 1.47f64.sqrt();
        let outer = PoincareNeighborhood::new(RealInterval { lo: -s, hi: s }, t).unwrap();
        assert!(sector_image_contains(2, &[outer], &inner).unwrap().inside);
    }

    #[test]
    fn spiral_is_the_limit_of_power_images() {
        let l = 512u32;
        let d = unit(0.3);
        for k in 0..20 {
            let lam = 0.1 + 1.9 * k as f64 / 19.0;
            let w = d.radial_point(lam / l as f64).powf(l as f64);
            let z = spiral_point(1.0, 0.3, lam);
            assert!((w - z).norm() < 1e-2 * z.norm().max(1.0), "Λ = {lam}: {w} vs {z}");
        }
    }
}
