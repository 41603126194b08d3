//! Cross-ratio expansion by monotone branches: for random nested intervals
//! inside a maximal monotone interval of `f^s`, `C` and `B` do not decrease.
//!
//! `cargo run --release --example cross_ratio_expansion`

use polylike::dynamics::{Family, RealInterval, Side};
use polylike::real_bounds::{cross_ratio_b, cross_ratio_c, maximal_monotone_interval, CrossRatioFrame};
use polylike::return_maps::interval_image;
use rand::{Rng, SeedableRng};

fn main() -> polylike::error::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let fam = Family::new(4, -1.3)?;
    let s = 6;
    let start = RealInterval::new(0.0, 1e-9)?;
    let t = maximal_monotone_interval(&fam, start, s, Side::Plus)?;
    println!("f^{s} is monotone on [{:.6}, {:.6}]", t.lo, t.hi);
    let (mut worst_c, mut worst_b) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..1000 {
        let mut p: Vec<f64> = (0..4).map(|_| rng.gen_range(t.lo..t.hi)).collect();
        p.sort_by(f64::total_cmp);
        let outer = RealInterval::new(p[0], p[3])?;
        let inner = RealInterval::new(p[1], p[2])?;
        let Ok(frame) = CrossRatioFrame::new(outer, inner) else { continue };
        let image = CrossRatioFrame::new(interval_image(&fam, outer, s), interval_image(&fam, inner, s))?;
        worst_c = worst_c.min(cross_ratio_c(&image) / cross_ratio_c(&frame));
        let b0 = cross_ratio_b(outer, inner)?;
        let b1 = cross_ratio_b(image.t, image.j)?;
        worst_b = worst_b.min(b1 / b0);
    }
    println!("smallest C expansion {worst_c:.6}, smallest B expansion {worst_b:.6}");
    Ok(())
}
