//! Randomized property suites shared by `properties.rs` and `acceptance.rs`.
#![allow(dead_code)]

use std::sync::OnceLock;

use num_complex::Complex64;
use polylike::builder::{assemble_polylike, build_omega, PolyLikeMap, Variant};
use polylike::dynamics::{dynamical_interval, pullback_complex_along_orbit, Family, OrbitSegment, RealInterval, Side};
use polylike::real_bounds::{cross_ratio_b, cross_ratio_c, maximal_monotone_interval, CrossRatioFrame};
use polylike::return_maps::{
    detect_renormalization, first_return_map, interval_image, nice_point_sequence, LevelData, ReturnMapStructure,
    SymmetricNiceInterval,
};
use polylike::search::{cascade_limit, fibonacci_parameter, min_real_parameter};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestError, TestRunner};

pub const SEED: u64 = 0x5eed_2024;
pub const CASES: u32 = 1000;

/// Relative slack of the cross-ratio comparisons.
pub const EXPANSION_TOL: f64 = 1e-9;
/// Absolute error allowed after `f^n` and its pullback.
pub const ROUND_TRIP_TOL: f64 = 1e-9;
/// Points this close (relative to the level scale) to a boundary are skipped
/// by the symmetry checks.
pub const SYMMETRY_GAP: f64 = 1e-9;
pub const NICE_HORIZON: usize = 30;

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        max_global_rejects: 100 * cases,
        ..Config::default()
    })
}

/// Runs a suite and renders the outcome as `Ok(())` or a message.
pub fn outcome<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn family(degree: u32, frac: f64) -> Family {
    let lo = min_real_parameter(degree);
    Family::new(degree, lo + frac * (0.25 - lo)).unwrap()
}

fn degree() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(4), Just(6)]
}

/// `C` and `B` do not decrease under a monotone branch `f^s`.
pub fn cross_ratio_expansion(cases: u32) -> Result<(), String> {
    let strat = (degree(), 0.0..1.0f64, 1usize..=6, 0.0..1.0f64, prop::array::uniform4(0.0..1.0f64));
    outcome(runner(cases).run(&strat, |(l, cf, s, xf, mut p)| {
        let fam = family(l, cf);
        let beta = dynamical_interval(&fam).hi;
        let x = beta * (2.0 * xf - 1.0);
        prop_assume!(x.abs() > 1e-6 * beta);
        let start = RealInterval::hull(x, x - 1e-9 * beta * x.signum());
        let side = if x > 0.0 { Side::Plus } else { Side::Minus };
        let Ok(t) = maximal_monotone_interval(&fam, start, s, side) else {
            return Err(TestCaseError::reject("no monotone interval"));
        };
        prop_assume!(t.length() > 1e-6 * beta);
        p.sort_by(f64::total_cmp);
        let q: Vec<f64> = p.iter().map(|u| t.lo + u * t.length()).collect();
        let outer = RealInterval::hull(q[0], q[3]);
        let inner = RealInterval::hull(q[1], q[2]);
        let gap = 1e-6 * t.length();
        prop_assume!(q[1] - q[0] > gap && q[2] - q[1] > gap && q[3] - q[2] > gap);
        let frame = CrossRatioFrame::new(outer, inner).unwrap();
        let Ok(image) = CrossRatioFrame::new(interval_image(&fam, outer, s), interval_image(&fam, inner, s)) else {
            return Err(TestCaseError::reject("image frame collapsed in floating point"));
        };
        let (c0, c1) = (cross_ratio_c(&frame), cross_ratio_c(&image));
        prop_assert!(c1 >= c0 * (1.0 - EXPANSION_TOL), "C: {c0} -> {c1} on {t:?}");
        let (b0, b1) = (cross_ratio_b(outer, inner).unwrap(), cross_ratio_b(image.t, image.j).unwrap());
        prop_assert!(b1 >= b0 * (1.0 - EXPANSION_TOL), "B: {b0} -> {b1} on {t:?}");
        Ok(())
    }))
}

/// Largest factor by which a pullback from step `n` back to step `k`
/// magnifies an error, over `k`.
pub fn backward_amplification(fam: &Family, orbit: &OrbitSegment) -> f64 {
    let n = orbit.len();
    (0..n).map(|k| 1.0 / fam.derivative_iterate(orbit.points[k], n - k).abs()).fold(0.0, f64::max)
}

/// Branches whose inverse magnifies errors by more than this are skipped.
pub const MAX_AMPLIFICATION: f64 = 1e5;

/// `f^n` followed by the pullback along the real reference orbit returns
/// the starting point, on well-conditioned branches.
pub fn pullback_round_trip(cases: u32) -> Result<(), String> {
    let strat = (degree(), 0.0..1.0f64, 0.0..1.0f64, 1usize..=8, 0.0..std::f64::consts::TAU, 0.0..1.0f64);
    outcome(runner(cases).run(&strat, |(l, cf, xf, n, phi, df)| {
        let fam = family(l, cf);
        let beta = dynamical_interval(&fam).hi;
        let x = beta * (2.0 * xf - 1.0);
        let orbit = OrbitSegment::of(&fam, x, n);
        prop_assume!(orbit.escaped_at.is_none());
        prop_assume!(orbit.points[..n].iter().all(|y| y.abs() > 0.05 * beta));
        prop_assume!(backward_amplification(&fam, &orbit) <= MAX_AMPLIFICATION);
        let z = x + Complex64::from_polar(1e-3 * beta * df, phi);
        let w = fam.evaluate_n(z, n);
        let back = pullback_complex_along_orbit(&fam, w, &orbit).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!((back - z).norm() < ROUND_TRIP_TOL, "|{back} - {z}| after {n} steps");
        Ok(())
    }))
}

/// Constructions shared by the symmetry suite.
pub fn sample_constructions() -> &'static [(String, PolyLikeMap, f64)] {
    static CELL: OnceLock<Vec<(String, PolyLikeMap, f64)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        let fam = Family::new(2, cascade_limit(2, 6).unwrap()).unwrap();
        for r in detect_renormalization(&fam, 8).iter().skip(1) {
            let level = LevelData::from_renormalization(r);
            let omega = build_omega(&fam, &level, Variant::Doubling, 0.05).unwrap();
            let plm = assemble_polylike(&fam, &level, &omega, 1024).unwrap();
            out.push((format!("doubling s = {}", level.period), plm, level.v));
        }
        let fam = Family::new(4, fibonacci_parameter(4, 8).unwrap()).unwrap();
        for level in LevelData::from_nest(&fam, 2, 1 << 20).unwrap() {
            let omega = build_omega(&fam, &level, Variant::General, 0.3).unwrap();
            let plm = assemble_polylike(&fam, &level, &omega, 1024).unwrap();
            out.push((format!("quartic s = {}", level.period), plm, level.v));
        }
        out
    })
}

/// Domains are invariant under complex conjugation; the range and the
/// central domain also under `z ↦ -z`.
pub fn domain_symmetry(cases: u32) -> Result<(), String> {
    let maps = sample_constructions();
    let strat = (0..maps.len(), -1.2..1.2f64, -1.0..1.0f64);
    outcome(runner(cases).run(&strat, |(i, xf, yf)| {
        let (name, plm, v) = &maps[i];
        let r = plm.range.right;
        let union = plm.range.union();
        let top = union.discs().iter().map(|d| d.center.im.abs() + d.radius).fold(0.0, f64::max);
        let z = Complex64::new(xf * r, yf * top);
        if union.signed_distance(z).abs() > SYMMETRY_GAP * v {
            let inside = union.contains(z);
            prop_assert_eq!(inside, union.contains(z.conj()), "{}: range, conj at {}", name, z);
            prop_assert_eq!(inside, union.contains(-z), "{}: range, tau at {}", name, z);
        }
        let c = &plm.central;
        prop_assert!(
            (c.real_trace.lo + c.real_trace.hi).abs() <= 1e-12 * v,
            "{}: central trace {:?}",
            name,
            c.real_trace
        );
        if c.curve.distance(z) > SYMMETRY_GAP * v && z.im != 0.0 {
            let inside = c.curve.encloses(z);
            prop_assert_eq!(inside, c.curve.encloses(z.conj()), "{}: central, conj at {}", name, z);
            prop_assert_eq!(inside, c.curve.encloses(-z), "{}: central, tau at {}", name, z);
        }
        for d in &plm.off_central {
            if d.curve.distance(z) > SYMMETRY_GAP * v && z.im != 0.0 {
                prop_assert_eq!(
                    d.curve.encloses(z),
                    d.curve.encloses(z.conj()),
                    "{}: off-central, conj at {}",
                    name,
                    z
                );
            }
        }
        Ok(())
    }))
}

/// First return maps to nice intervals at a few parameters.
pub fn sample_return_maps() -> &'static [ReturnMapStructure] {
    static CELL: OnceLock<Vec<ReturnMapStructure>> = OnceLock::new();
    CELL.get_or_init(|| {
        let params = [
            (2, fibonacci_parameter(2, 8).unwrap()),
            (2, -1.9),
            (2, -1.8),
            (2, -1.6),
            (4, fibonacci_parameter(4, 8).unwrap()),
            (4, -1.5),
            (6, -1.3),
        ];
        let mut out = Vec::new();
        for (l, c) in params {
            let fam = Family::new(l, c).unwrap();
            let Ok(nice) = nice_point_sequence(&fam, 4) else { continue };
            for u in nice.iter().skip(1) {
                if let Ok(w) = SymmetricNiceInterval::new(&fam, u.value, 200) {
                    if let Ok(rms) = first_return_map(&fam, &w, 2000) {
                        out.push(rms);
                    }
                }
            }
        }
        out
    })
}

/// Inside a branch of iterate `k`, the orbit avoids the open base interval
/// for `1 <= j < k` and is in it at `k`.
pub fn return_time_minimality(cases: u32) -> Result<(), String> {
    let maps = sample_return_maps();
    assert!(maps.len() >= 10, "only {} return maps", maps.len());
    let strat = (0..maps.len(), 0.0..1.0f64, 0.001..0.999f64);
    outcome(runner(cases).run(&strat, |(i, bf, t)| {
        let rms = &maps[i];
        let fam = rms.family;
        let e = rms.base.endpoint;
        let b = &rms.branches[((bf * rms.branches.len() as f64) as usize).min(rms.branches.len() - 1)];
        let x = b.domain.lo + t * b.domain.length();
        let mut y = x;
        for j in 1..b.iterate {
            y = fam.apply(y);
            prop_assert!(
                y.abs() >= e * (1.0 - 1e-9),
                "f^{}({}) = {} inside (-{}, {}) before k = {}",
                j,
                x,
                y,
                e,
                e,
                b.iterate
            );
        }
        y = fam.apply(y);
        prop_assert!(y.abs() <= e * (1.0 + 1e-9), "f^{}({}) = {} outside the base", b.iterate, x, y);
        Ok(())
    }))
}

/// Accepted endpoints never re-enter within the horizon; rejected ones do.
/// Points of the nice sequence never re-enter; they reach the fixed point
/// `q` after their preimage order, so the check stops there.
pub fn nice_endpoint_exclusion(cases: u32) -> Result<(), String> {
    let strat = (degree(), 0.0..1.0f64, 0.0..1.0f64, 0usize..3);
    outcome(runner(cases).run(&strat, |(l, cf, ef, n)| {
        let fam = family(l, cf);
        let beta = dynamical_interval(&fam).hi;
        let e = beta * (0.001 + 0.998 * ef);
        let mut y = e;
        let mut enters = false;
        for _ in 0..NICE_HORIZON {
            y = fam.apply(y);
            enters |= y.abs() < e * (1.0 - 1e-9);
            if !(y.abs() <= fam.escape_radius()) {
                break;
            }
        }
        let accepted = SymmetricNiceInterval::new(&fam, e, NICE_HORIZON).is_ok();
        prop_assert_eq!(accepted, !enters, "endpoint {} at c1 = {}", e, fam.critical_value());
        if let Ok(nice) = nice_point_sequence(&fam, n + 1) {
            let u = nice[n].value;
            let mut y = u;
            for i in 1..=nice[n].order + 1 {
                y = fam.apply(y);
                prop_assert!(y.abs() >= u * (1.0 - 1e-9), "nice point {} re-enters at {}", u, i);
            }
        }
        Ok(())
    }))
}
