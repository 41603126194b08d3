//! Poincaré neighbourhoods: where the boundary arcs meet, the optimal
//! constant `A_*`, the spiral limit of power images and the root reports.
//!
//! `cargo run --release --example geometry_experiments`

use polylike::dynamics::RealInterval;
use polylike::geometry::{
    a_star, h_root_report, intersection_theta0, intersection_z, solve_c1, solve_d15, spiral_point, PoincareNeighborhood,
};

fn main() -> polylike::error::Result<()> {
    println!("Z(K, θ) approaches K²:");
    for k in [1.2, 1.5, 2.0] {
        for t in [1e-1, 1e-2, 1e-3] {
            let z = intersection_z(k, t)?;
            println!("  K = {k}, θ = {t:e}: Z = {:.7} {:+.7}i", z.re, z.im);
        }
        if let Some(t0) = intersection_theta0(k, 1e-3) {
            println!("  K = {k}: boundary arcs meet for θ below {t0:.3}");
        }
    }

    for k in [1.5, 2.0, 3.0] {
        let a = a_star(k)?;
        println!("A_*({k}) = {a:.6}, roots at that A: {:?}", solve_c1(a, k));
    }
    println!("D15(1.07, 1.52, 4) roots: {:?}", solve_d15(1.07, 1.52, 4));
    println!("D15(1.05835, 1.52, 4) roots: {:?}", solve_d15(1.05835, 1.52, 4));
    let h = h_root_report();
    println!("h roots {:?}, h'' roots {:?}", h.roots, h.second_derivative_roots);

    let d = PoincareNeighborhood::new(RealInterval::new(-1.0, 1.0)?, 0.3)?;
    println!("\n P_ℓ(boundary at arg Λ/ℓ) against the spiral at Λ = 1:");
    for l in [8u32, 32, 128, 512, 2048] {
        let p = d.radial_point(1.0 / l as f64).powf(l as f64);
        let s = spiral_point(1.0, 0.3, 1.0);
        println!("  ℓ = {l:>4}: relative gap {:.3e}", (p - s).norm() / s.norm());
    }
    Ok(())
}
