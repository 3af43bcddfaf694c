//! Optimal interleaving factor, rate and capacity over α = 0.1 … 1.5.
//!
//!     cargo run --example rate_table

use tornpaper::analysis::{default_alpha_grid, rate_table, round3, DEFAULT_M_MAX};

fn main() {
    let rows = rate_table(&default_alpha_grid(), DEFAULT_M_MAX).expect("grid is valid");
    println!("{:>5} {:>8} {:>9} {:>6} {:>9} {:>9}", "α", "m_base", "baseline", "m_opt", "rate", "capacity");
    for r in rows {
        println!(
            "{:>5.1} {:>8} {:>9.3} {:>6} {:>9.3} {:>9.3}",
            r.alpha,
            r.m_baseline,
            round3(r.baseline),
            r.m_opt,
            round3(r.achievable),
            round3(r.capacity)
        );
    }
}
