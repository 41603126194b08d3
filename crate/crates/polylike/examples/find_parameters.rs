//! Locates superstable, cascade-limit and Fibonacci parameters.
//!
//! `cargo run --release --example find_parameters`

use polylike::dynamics::Family;
use polylike::return_maps::closest_return_times;
use polylike::search::{cascade_limit, doubling_cascade, fibonacci_parameter, superstable_parameter_scan};

fn main() -> polylike::error::Result<()> {
    let c3 = superstable_parameter_scan(2, 3)?;
    println!("period 3 superstable, l = 2: {c3:.15}");

    for l in [2, 4] {
        let cascade = doubling_cascade(l, 6)?;
        println!("\ndoubling cascade, l = {l}");
        for (k, c) in cascade.iter().enumerate() {
            println!("  period {:>3}: {c:.15}", 2usize << k);
        }
        println!("  deepest: {:.15}", cascade_limit(l, 6)?);
    }

    for l in [2, 4] {
        let c = fibonacci_parameter(l, 8)?;
        let fam = Family::new(l, c)?;
        let returns = closest_return_times(&fam, 1 << 20, 10);
        println!("\nFibonacci parameter, l = {l}: {c:.15}");
        println!("  closest returns: {returns:?}");
    }
    Ok(())
}
