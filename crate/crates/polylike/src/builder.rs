//! Candidate domains `Ω`, pullbacks of `∂Ω` under the central return,
//! containment checks and the assembled polynomial-like map.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{nearest_inverse, Family, RealInterval};
use crate::error::{Error, Result};
use crate::geometry::{DiscUnion, PoincareNeighborhood, SampledCurve, BOUNDARY_ANGLES};
use crate::real_bounds::find_expansion_point;
use crate::return_maps::{first_return_map, BranchKind, LevelData, SymmetricNiceInterval};

/// A continuation step is accepted when the nearest inverse is at most this
/// fraction of the distance to the second nearest.
pub const BRANCH_CONFIDENCE: f64 = 0.3;
/// Maximal depth of path bisection during continuation.
pub const MAX_PATH_DEPTH: usize = 30;
/// Boundary arc step relative to `v` at [`BOUNDARY_ANGLES`] base angles.
pub const ARC_STEP: f64 = 0.01;
/// Angles scanned by the general construction, largest first.
pub const THETA_SCAN: [f64; 5] = [0.3, 0.2, 0.1, 0.05, 0.02];
/// Default angle of the quadratic and doubling constructions.
pub const DEFAULT_THETA: f64 = 0.05;
/// Orbit budget used to list off-central branches.
const BRANCH_BUDGET: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `D_*((-f^s(ũ), f^s(ũ)))`, `ℓ >= 4`, renormalizable levels.
    RoundDisc,
    /// `D(V;θ) ∪ D_*(I) ∪ D_*(-I)`, `I = (0, 6v/5)`, `ℓ = 2`.
    Quadratic,
    /// `D(V;θ) ∪ D(±I;θ)`, `I = (0, v + v log(11/10)/ℓ)`, `ℓ >= 4`.
    LargeDegree,
    /// `D(V;θ) ∪ D(±I;θ)`, `I = (0, 1.07^{1/ℓ} v)`, `ℓ >= 4`.
    General,
    /// `D(V;θ) ∪ D(±I;θ)`, `I = (0, 1.09^{1/ℓ} v)`, `ℓ = 2`, periods `s` and `s/2`.
    Doubling,
}

impl Variant {
    pub const ALL: [Variant; 5] =
        [Variant::RoundDisc, Variant::Quadratic, Variant::LargeDegree, Variant::General, Variant::Doubling];

    pub fn name(self) -> &'static str {
        match self {
            Variant::RoundDisc => "round-disc",
            Variant::Quadratic => "quadratic",
            Variant::LargeDegree => "large-degree",
            Variant::General => "general",
            Variant::Doubling => "doubling",
        }
    }

    /// Angles tried when none is given.
    pub fn default_thetas(self) -> Vec<f64> {
        match self {
            Variant::RoundDisc => vec![PI / 2.0],
            Variant::General | Variant::LargeDegree => THETA_SCAN.to_vec(),
            Variant::Quadratic | Variant::Doubling => vec![DEFAULT_THETA],
        }
    }

    /// `I`-endpoint over `v`, when the variant has an `I` component.
    pub fn stretch(self, ell: f64) -> Option<f64> {
        match self {
            Variant::RoundDisc => None,
            Variant::Quadratic => Some(1.2),
            Variant::LargeDegree => Some(1.0 + (1.1f64).ln() / ell),
            Variant::General => Some(1.07f64.powf(1.0 / ell)),
            Variant::Doubling => Some(1.09f64.powf(1.0 / ell)),
        }
    }

    fn check(self, fam: &Family, level: &LevelData) -> Result<()> {
        let l = fam.degree();
        let bad = |why: String| Err(Error::VariantMismatch(format!("{}: {why}", self.name())));
        match self {
            Variant::RoundDisc | Variant::LargeDegree | Variant::General if l < 4 => {
                bad(format!("needs ℓ >= 4, got {l}"))
            }
            Variant::Quadratic | Variant::Doubling if l != 2 => bad(format!("needs ℓ = 2, got {l}")),
            Variant::RoundDisc | Variant::Quadratic | Variant::Doubling if !level.is_renormalizable() => {
                bad("needs a renormalizable level".into())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::Config(format!("unknown variant `{s}`")))
    }
}

/// `Ω`: the union of its components, symmetric under `z ↦ -z` and
/// conjugation, with real trace `(-right, right)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaDomain {
    pub components: Vec<PoincareNeighborhood>,
    pub variant: Variant,
    pub theta: f64,
    pub right: f64,
    /// Scale `v` of the level, used for sampling steps.
    pub scale: f64,
}

impl OmegaDomain {
    pub fn union(&self) -> DiscUnion {
        DiscUnion::new(self.components.iter().flat_map(|d| d.discs()).collect())
    }

    pub fn real_trace(&self) -> RealInterval {
        RealInterval::symmetric(self.right)
    }

    /// Boundary from the real point `right`, counterclockwise. `angles`
    /// base angles with the arc step scaled to match.
    pub fn boundary(&self, angles: usize) -> SampledCurve {
        let step = ARC_STEP * self.scale * BOUNDARY_ANGLES as f64 / angles as f64;
        self.union().boundary(Complex64::new(0.0, 0.0), angles, step)
    }
}

pub fn build_omega(fam: &Family, level: &LevelData, variant: Variant, theta: f64) -> Result<OmegaDomain> {
    variant.check(fam, level)?;
    let v = level.v;
    let components = match variant.stretch(fam.ell()) {
        None => {
            let e = find_expansion_point(fam, level.period, level.u)?;
            let r = fam.iterate(e.u_tilde, level.period).abs();
            vec![PoincareNeighborhood::round(RealInterval::symmetric(r))?]
        }
        Some(k) => {
            let i = RealInterval { lo: 0.0, hi: k * v };
            let mi = RealInterval { lo: -k * v, hi: 0.0 };
            let side = if variant == Variant::Quadratic { PI / 2.0 } else { theta };
            vec![
                PoincareNeighborhood::new(RealInterval::symmetric(v), theta)?,
                PoincareNeighborhood::new(i, side)?,
                PoincareNeighborhood::new(mi, side)?,
            ]
        }
    };
    let right = components.iter().map(|d| d.interval.hi).fold(0.0, f64::max);
    Ok(OmegaDomain { components, variant, theta, right, scale: v })
}

/// Real preimages `x_0, ..., x_{n-1}` of `target` under the inverse of
/// `f^n` whose `j`-th point lies on the side `signs[j]`.
fn real_chain(fam: &Family, target: f64, signs: &[f64]) -> Result<Vec<f64>> {
    let c1 = fam.critical_value();
    let mut out = vec![0.0; signs.len()];
    let mut w = target;
    for j in (0..signs.len()).rev() {
        let d = w - c1;
        if d < 0.0 {
            return Err(Error::ExtensionTooShort { step: j });
        }
        w = signs[j] * d.powf(1.0 / fam.ell());
        out[j] = w;
    }
    Ok(out)
}

fn pull_chain(fam: &Family, y: Complex64, reference: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut out = reference.to_vec();
    let mut w = y;
    for j in (0..reference.len()).rev() {
        let (z, ratio) = nearest_inverse(fam, w, reference[j]);
        if ratio > BRANCH_CONFIDENCE {
            return None;
        }
        out[j] = z;
        w = z;
    }
    Some(out)
}

/// Continues the inverse chain from `y0` (with chain `reference`) to `y1`,
/// bisecting the segment where a single step is ambiguous.
fn pull_path(
    fam: &Family,
    y0: Complex64,
    y1: Complex64,
    reference: &[Complex64],
    depth: usize,
) -> Result<Vec<Complex64>> {
    if let Some(c) = pull_chain(fam, y1, reference) {
        return Ok(c);
    }
    if depth >= MAX_PATH_DEPTH {
        return Err(Error::BranchAmbiguity { step: reference.len() });
    }
    let mid = 0.5 * (y0 + y1);
    let cm = pull_path(fam, y0, mid, reference, depth + 1)?;
    pull_path(fam, mid, y1, &cm, depth + 1)
}

/// Pulls the closed curve `boundary` (starting at a real point with real
/// chain `chain`) back along the chain; returns the first chain point of
/// every sample, closing point included.
fn pull_curve(fam: &Family, boundary: &SampledCurve, chain: &[f64]) -> Result<Vec<Complex64>> {
    if chain.is_empty() {
        let mut pts = boundary.points.clone();
        pts.push(pts[0]);
        return Ok(pts);
    }
    let mut reference: Vec<Complex64> = chain.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut prev = boundary.points[0];
    let mut out = Vec::with_capacity(boundary.points.len() + 1);
    for &z in boundary.points.iter().chain(std::iter::once(&boundary.points[0])) {
        reference = pull_path(fam, prev, z, &reference, 0)?;
        prev = z;
        out.push(reference[0]);
    }
    Ok(out)
}

/// Signs of `c_1, ..., c_{s-1}`.
fn central_signs(fam: &Family, s: usize) -> Vec<f64> {
    (1..s).map(|j| fam.critical_point_image(j).signum()).collect()
}

/// Real trace `(-û, û)` of the central domain: the component of
/// `f^{-s}(Ĩ)` containing `0`. Fails when `f^{s-1}` is not monotone over
/// the preimage of `Ĩ` near `c_1`.
pub fn central_real_trace(fam: &Family, omega: &OmegaDomain, level: &LevelData) -> Result<RealInterval> {
    let signs = central_signs(fam, level.period);
    let ends: Vec<f64> = [omega.right, -omega.right]
        .iter()
        .map(|&t| Ok(real_chain(fam, t, &signs)?.first().copied().unwrap_or(t)))
        .collect::<Result<_>>()?;
    let top = ends[0].max(ends[1]);
    let d = top - fam.critical_value();
    if !(d > 0.0) {
        return Err(Error::ExtensionTooShort { step: 0 });
    }
    Ok(RealInterval::symmetric(d.powf(1.0 / fam.ell())))
}

/// `|û^f - c_1| / |v^f - c_1|` where `Û = [û^f, u^f]` is mapped onto `V`
/// by `f^{s-1}` and `û^f` is its endpoint on the far side of `c_1`.
pub fn fitin_ratio(fam: &Family, level: &LevelData) -> Result<f64> {
    let signs = central_signs(fam, level.period);
    let c1 = fam.critical_value();
    let mut far = 0.0f64;
    for t in [level.v, -level.v] {
        let x = real_chain(fam, t, &signs)?.first().copied().unwrap_or(t);
        if x < c1 {
            far = far.max(c1 - x);
        }
    }
    Ok(far / level.v.powf(fam.ell()))
}

/// Maximal depth of the adaptive refinement of boundary angles.
pub const MAX_REFINE_DEPTH: usize = 24;

/// A boundary angle with its pulled-back chain and the lifted point.
struct Lifted {
    phi: f64,
    chain: Vec<Complex64>,
    /// Continued argument of `F^{-1}(y) - c_1`.
    arg: f64,
    /// `|F^{-1}(y) - c_1|^{1/ℓ}`.
    radius: f64,
    /// Least signed distance to `∂Ω` over the `ℓ` sheets.
    margin: f64,
}

struct CentralPull<'a> {
    fam: &'a Family,
    union: DiscUnion,
    points: Vec<(f64, f64)>,
}

impl CentralPull<'_> {
    fn boundary(&self, phi: f64) -> Complex64 {
        self.union.radial_point(Complex64::new(0.0, 0.0), phi)
    }

    fn sheet(&self, radius: f64, arg: f64, k: u32) -> Complex64 {
        let l = self.fam.ell();
        Complex64::from_polar(radius, (arg + TAU * k as f64) / l)
    }

    fn lift(&self, prev: &Lifted, phi: f64) -> Result<Lifted> {
        let y = self.boundary(phi);
        let chain = if prev.chain.is_empty() {
            Vec::new()
        } else {
            pull_path(self.fam, self.boundary(prev.phi), y, &prev.chain, 0)?
        };
        let w = chain.first().copied().unwrap_or(y) - self.fam.critical_value();
        let mut arg = w.arg();
        arg += TAU * ((prev.arg - arg) / TAU).round();
        let radius = w.norm().powf(1.0 / self.fam.ell());
        let margin = (0..self.fam.degree())
            .map(|k| self.union.signed_distance(self.sheet(radius, arg, k)))
            .fold(f64::INFINITY, f64::min);
        Ok(Lifted { phi, chain, arg, radius, margin })
    }

    /// Lifts the arc `(prev.φ, phi]`, bisecting while a step exceeds half
    /// the smaller margin at its ends.
    fn advance(&mut self, prev: Lifted, phi: f64, depth: usize) -> Result<Lifted> {
        let next = self.lift(&prev, phi)?;
        let step = (self.sheet(next.radius, next.arg, 0) - self.sheet(prev.radius, prev.arg, 0)).norm();
        let limit = 0.5 * prev.margin.min(next.margin);
        if depth < MAX_REFINE_DEPTH && limit > 0.0 && step > limit {
            let mid = 0.5 * (prev.phi + phi);
            let mid = self.advance(prev, mid, depth + 1)?;
            return self.advance(mid, phi, depth + 1);
        }
        self.points.push((next.radius, next.arg));
        Ok(next)
    }
}

/// `f^{-1} ∘ F^{-1}(∂Ω)` with `F = f^{s-1}` the branch along `c_1, ..., c_{s-1}`:
/// one closed curve through both real points `±û`, all `ℓ` sheets of the
/// last inverse step joined by continuing the argument. Boundary angles are
/// refined until each step of the curve is at most half the distance of
/// its ends to `∂Ω`.
pub fn pullback_boundary(fam: &Family, omega: &OmegaDomain, level: &LevelData, samples: usize) -> Result<SampledCurve> {
    central_real_trace(fam, omega, level)?;
    let chain: Vec<Complex64> = real_chain(fam, omega.right, &central_signs(fam, level.period))?
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect();
    let step = ARC_STEP * omega.scale * BOUNDARY_ANGLES as f64 / samples as f64;
    let union = omega.union();
    let phis = union.boundary_angles(Complex64::new(0.0, 0.0), samples, step);
    let mut pull = CentralPull { fam, union, points: Vec::with_capacity(phis.len() * 2) };
    let w0 = chain.first().copied().unwrap_or(Complex64::new(omega.right, 0.0)) - fam.critical_value();
    let seed =
        Lifted { phi: 0.0, chain, arg: w0.arg(), radius: w0.norm().powf(1.0 / fam.ell()), margin: f64::INFINITY };
    let start = pull.lift(&seed, 0.0)?;
    pull.points.push((start.radius, start.arg));
    let mut cur = start;
    for &phi in phis.iter().skip(1).chain(std::iter::once(&TAU)) {
        cur = pull.advance(cur, phi, 0)?;
    }
    let (r0, a0) = pull.points[0];
    let (r1, a1) = *pull.points.last().unwrap();
    let turns = ((a1 - a0) / TAU).round();
    if turns != 1.0 || (r1 - r0).abs() > 1e-6 * r0.max(1e-300) {
        return Err(Error::Degenerate(format!("F^-1(∂Ω) winds {turns} times around c_1")));
    }
    pull.points.pop();
    let mut points = Vec::with_capacity(pull.points.len() * fam.degree() as usize);
    for k in 0..fam.degree() {
        points.extend(pull.points.iter().map(|&(r, a)| pull.sheet(r, a, k)));
    }
    Ok(SampledCurve { points, closed: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub contained: bool,
    /// Smallest signed distance of a sample to `∂Ω`.
    pub min_margin: f64,
    /// Larger of the two bounds below.
    pub modulus_lower_bound: f64,
    /// `(1/2π) ln(r_out / r_in)` when positive.
    pub round_bound: f64,
    /// `d / (2L + πd)` for the collar of width `d` around the polygon of
    /// length `L`; `d` is the least chord margin, the smaller endpoint
    /// margin less half the chord.
    pub collar_bound: f64,
    pub samples: usize,
}

/// Tests every sample of `curve` against the union of `Ω`. A curve on
/// `∂Ω` itself is not contained.
pub fn check_containment(curve: &SampledCurve, omega: &OmegaDomain) -> ContainmentReport {
    let union = omega.union();
    let margins: Vec<f64> = curve.points.iter().map(|&z| union.signed_distance(z)).collect();
    let margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let contained = margin > 1e-12 * omega.right;
    let r_in = curve.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let r_out = (0..BOUNDARY_ANGLES)
        .map(|k| union.radial(Complex64::new(0.0, 0.0), TAU * k as f64 / BOUNDARY_ANGLES as f64))
        .fold(f64::INFINITY, f64::min);
    let round = if contained && r_out > r_in { (r_out / r_in).ln() / TAU } else { 0.0 };
    let len: f64 = perimeter(curve);
    let n = margins.len();
    let d = (0..n)
        .map(|k| {
            let j = (k + 1) % n;
            margins[k].min(margins[j]) - 0.5 * (curve.points[j] - curve.points[k]).norm()
        })
        .fold(f64::INFINITY, f64::min);
    let collar = if contained && d > 0.0 { d / (2.0 * len + PI * d) } else { 0.0 };
    ContainmentReport {
        contained,
        min_margin: margin,
        modulus_lower_bound: round.max(collar),
        round_bound: round,
        collar_bound: collar,
        samples: curve.points.len(),
    }
}

fn perimeter(curve: &SampledCurve) -> f64 {
    let n = curve.points.len();
    let edges = if curve.closed { n } else { n.saturating_sub(1) };
    (0..edges).map(|k| (curve.points[(k + 1) % n] - curve.points[k]).norm()).sum()
}

/// A domain of the polynomial-like map: a pulled-back copy of `∂Ω`, its real
/// trace and the iterate of `f` mapping it onto `Ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchDomain {
    pub curve: SampledCurve,
    pub real_trace: RealInterval,
    pub iterate: usize,
    /// Smallest signed distance of the curve to `∂Ω`.
    pub margin: f64,
}

impl BranchDomain {
    pub fn contains(&self, z: Complex64) -> bool {
        if z.im == 0.0 {
            self.real_trace.contains_open(z.re)
        } else {
            self.curve.encloses(z)
        }
    }
}

/// `R: D⁰ ∪ D¹ ∪ ... → Ω`, an `ℓ`-fold covering on the central domain `D⁰`
/// and univalent on the others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyLikeMap {
    pub family: Family,
    pub range: OmegaDomain,
    pub degree: u32,
    pub central: BranchDomain,
    pub off_central: Vec<BranchDomain>,
    /// `|û^f - c_1| / |v^f - c_1|`.
    pub fitin_ratio: f64,
    pub containment: ContainmentReport,
}

/// Domain of a monotone branch `f^k` on `domain`: pullback of `∂Ω` along
/// the branch's sign pattern.
fn off_central_domain(
    fam: &Family,
    omega: &OmegaDomain,
    domain: RealInterval,
    k: usize,
    samples: usize,
) -> Result<BranchDomain> {
    let signs: Vec<f64> = (0..k).map(|j| fam.iterate(domain.mid(), j).signum()).collect();
    let a = real_chain(fam, omega.right, &signs)?[0];
    let b = real_chain(fam, -omega.right, &signs)?[0];
    let chain = real_chain(fam, omega.right, &signs)?;
    let pts = pull_curve(fam, &omega.boundary(samples), &chain)?;
    let curve = SampledCurve { points: pts[..pts.len() - 1].to_vec(), closed: true };
    let union = omega.union();
    let margin = curve.points.iter().map(|&z| union.signed_distance(z)).fold(f64::INFINITY, f64::min);
    Ok(BranchDomain { curve, real_trace: RealInterval::hull(a, b), iterate: k, margin })
}

pub fn assemble_polylike(fam: &Family, level: &LevelData, omega: &OmegaDomain, samples: usize) -> Result<PolyLikeMap> {
    let curve = pullback_boundary(fam, omega, level, samples)?;
    let report = check_containment(&curve, omega);
    if !report.contained {
        return Err(Error::NotContained { margin: report.min_margin });
    }
    let trace = central_real_trace(fam, omega, level)?;
    let fitin_ratio = fitin_ratio(fam, level)?;
    if !(fitin_ratio < 1.0) {
        return Err(Error::FitinViolated { ratio: fitin_ratio });
    }
    let central = BranchDomain { curve, real_trace: trace, iterate: level.period, margin: report.min_margin };
    let mut off_central: Vec<BranchDomain> = Vec::new();
    if !level.is_renormalizable() {
        // the endpoint orbit is followed for `2s` iterates; longer orbits
        // only accumulate round-off near the repelling fixed point
        let nice = SymmetricNiceInterval::new(fam, level.v, 2 * level.period)?;
        let rms = first_return_map(fam, &nice, BRANCH_BUDGET)?;
        for b in rms.branches.iter().filter(|b| b.kind == BranchKind::Monotone) {
            off_central.push(off_central_domain(fam, omega, b.domain, b.iterate, samples)?);
        }
    }
    let traces: Vec<RealInterval> =
        std::iter::once(central.real_trace).chain(off_central.iter().map(|d| d.real_trace)).collect();
    for i in 0..traces.len() {
        for j in i + 1..traces.len() {
            if traces[i].overlaps(&traces[j]) {
                return Err(Error::DomainOverlap(format!("{:?} and {:?}", traces[i], traces[j])));
            }
        }
    }
    Ok(PolyLikeMap {
        family: *fam,
        range: omega.clone(),
        degree: fam.degree(),
        central,
        off_central,
        fitin_ratio,
        containment: report,
    })
}

/// Outcome of iterating a polynomial-like map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// Still inside after the whole budget.
    Inside { budget_limited: bool },
    /// Left the union of domains after `step` applications.
    Escaped { step: usize },
}

impl PolyLikeMap {
    fn domain_of(&self, z: Complex64) -> Option<&BranchDomain> {
        std::iter::once(&self.central).chain(&self.off_central).find(|d| d.contains(z))
    }

    /// `R(z)` when `z` lies in a domain.
    pub fn apply(&self, z: Complex64) -> Option<Complex64> {
        self.domain_of(z).map(|d| {
            if z.im == 0.0 {
                Complex64::new(self.family.iterate(z.re, d.iterate), 0.0)
            } else {
                self.family.evaluate_n(z, d.iterate)
            }
        })
    }
}

/// Iterates `R` from `z` up to `max_iter` times.
pub fn filled_julia_membership(plm: &PolyLikeMap, z: Complex64, max_iter: usize) -> Membership {
    let mut w = z;
    for step in 0..max_iter {
        match plm.apply(w) {
            Some(next) => w = next,
            None => return Membership::Escaped { step },
        }
    }
    Membership::Inside { budget_limited: true }
}
