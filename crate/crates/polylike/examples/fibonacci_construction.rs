//! Builds the complex domains for the quartic Fibonacci map along the
//! central nest, trying each angle of the default scan.
//!
//! `cargo run --release --example fibonacci_construction`

use polylike::builder::Variant;
use polylike::dynamics::Family;
use polylike::reports::construct_level;
use polylike::return_maps::LevelData;
use polylike::search::fibonacci_parameter;

fn main() -> polylike::error::Result<()> {
    let c = fibonacci_parameter(4, 8)?;
    let fam = Family::new(4, c)?;
    println!("c1 = {c:.15}");
    for (n, level) in LevelData::from_nest(&fam, 6, 1 << 20)?.iter().enumerate() {
        let (ok, failures) = construct_level(&fam, level, Variant::General, &Variant::General.default_thetas(), 4096);
        for (t, e) in failures {
            println!("level {} θ = {t}: {e}", n + 1);
        }
        if let Some((t, _, plm)) = ok {
            println!(
                "level {} (s = {:>2}): contained at θ = {t}, margin/v {:.3}, modulus ≥ {:.4}, {} off-central domain(s)",
                n + 1,
                level.period,
                plm.containment.min_margin / level.v,
                plm.containment.modulus_lower_bound,
                plm.off_central.len()
            );
        }
    }
    Ok(())
}
