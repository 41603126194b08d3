//! Builds the complex domains level by level at the deepest computed
//! period-doubling parameter (ℓ = 2) and reports containment and moduli.
//!
//! `cargo run --release --example doubling_construction`

use std::time::Instant;

use polylike::builder::{assemble_polylike, build_omega, Variant};
use polylike::dynamics::Family;
use polylike::return_maps::{detect_renormalization, LevelData};
use polylike::search::cascade_limit;

fn main() -> polylike::error::Result<()> {
    let c = cascade_limit(2, 6)?;
    let fam = Family::new(2, c)?;
    println!("c1 = {c:.15}");
    println!("{:>6} {:>10} {:>12} {:>12} {:>8} {:>9}", "period", "v", "margin/v", "modulus", "fit-in", "time");
    for r in detect_renormalization(&fam, 64) {
        let level = LevelData::from_renormalization(&r);
        let t = Instant::now();
        let omega = build_omega(&fam, &level, Variant::Doubling, 0.05)?;
        let plm = assemble_polylike(&fam, &level, &omega, 4096)?;
        println!(
            "{:>6} {:>10.6} {:>12.3e} {:>12.3e} {:>8.4} {:>9.2?}",
            level.period,
            level.v,
            plm.containment.min_margin / level.v,
            plm.containment.modulus_lower_bound,
            plm.fitin_ratio,
            t.elapsed()
        );
    }
    Ok(())
}
