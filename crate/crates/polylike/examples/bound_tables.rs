//! Prints the extendability-space table `K*_ℓ(y)` and `A_*(K)`.
//!
//! `cargo run --example bound_tables`

use polylike::geometry::a_star;
use polylike::real_bounds::{k_bound_argmax, k_star, k_star_limit};

fn main() -> polylike::error::Result<()> {
    let ys = [0.625, 2.0 / 3.0, 0.75, 0.8025];
    print!("{:>4}", "l");
    for y in ys {
        print!("{y:>12.4}");
    }
    println!();
    for l in [2, 4, 6, 8, 16, 64] {
        print!("{l:>4}");
        for y in ys {
            print!("{:>12.6}", k_star(l, y)?);
        }
        println!();
    }
    print!("{:>4}", "lim");
    for y in ys {
        print!("{:>12.6}", k_star_limit(y)?);
    }
    println!();

    // the maximizing t of the bound, for l = 4
    println!("\nargmax t at l = 4, y = 3/4: {:.6}", k_bound_argmax(4, 0.75)?);

    println!("\n{:>6} {:>10}", "K", "A_*(K)");
    for k in [1.2, 1.5, 2.0, 2.2, 3.0, 5.0] {
        println!("{k:>6.2} {:>10.6}", a_star(k)?);
    }
    Ok(())
}
