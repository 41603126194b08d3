//! Draws the filled Julia set of a polynomial-like restriction in the
//! terminal and compares the verdicts of two domains built at different
//! angles.
//!
//! `cargo run --release --example julia_membership`

use num_complex::Complex64;
use polylike::builder::{assemble_polylike, build_omega, filled_julia_membership, Membership, Variant};
use polylike::dynamics::Family;
use polylike::return_maps::{detect_renormalization, LevelData};
use polylike::search::cascade_limit;

fn main() -> polylike::error::Result<()> {
    let fam = Family::new(2, cascade_limit(2, 6)?)?;
    let level = LevelData::from_renormalization(&detect_renormalization(&fam, 2)[0]);
    let maps = [0.05, 0.03].map(|t| {
        build_omega(&fam, &level, Variant::Doubling, t).and_then(|o| assemble_polylike(&fam, &level, &o, 4096))
    });
    let [a, b] = maps;
    let (a, b) = (a?, b?);
    let r = a.range.right;
    let inside = |m: Membership| matches!(m, Membership::Inside { .. });
    // the domains at θ = 0.05 are thin lenses, so the vertical scale is stretched
    for row in 0..23 {
        let y = 0.03 * r * (1.0 - row as f64 / 11.0);
        let line: String = (0..72)
            .map(|col| {
                let z = Complex64::new(r * (col as f64 / 35.5 - 1.0), y);
                if inside(filled_julia_membership(&a, z, 60)) {
                    '#'
                } else {
                    '.'
                }
            })
            .collect();
        println!("{line}");
    }
    let n = 1000;
    let agree = (0..n)
        .map(|k| Complex64::new(r * (2.0 * k as f64 / (n - 1) as f64 - 1.0), 0.0))
        .filter(|&z| inside(filled_julia_membership(&a, z, 200)) == inside(filled_julia_membership(&b, z, 200)))
        .count();
    println!("θ = 0.05 and θ = 0.03 agree on {agree} of {n} real points");
    Ok(())
}
