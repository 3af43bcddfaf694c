//! Lost-pieces channel: closed-form capacity and achievable rate, plus a
//! simulated check that the surviving coverage matches F_d.
//!
//!     cargo run --release --example tpclp_gap

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tornpaper::analysis::tpclp_report;
use tornpaper::channel::{coverage, tear, tpclp_filter, ChannelParams, DeletionProfile, Piece};
use tornpaper::BitString;

fn main() {
    let (alpha, m) = (0.1, 10);
    let profile = DeletionProfile::new(
        m as f64,
        vec![
            Piece { lo: 10.0, hi: 20.0, d: 0.2 },
            Piece { lo: 20.0, hi: f64::INFINITY, d: 0.0 },
        ],
    )
    .unwrap();
    let r = tpclp_report(alpha, m, &profile).unwrap();
    println!("C      = {:.5}", r.capacity);
    println!("F_d    = {:.5}", r.f_d);
    println!("R_ach  = {:.5}", r.achievable);
    println!("gap    = {:.5}  (bound e^(-αm)/m = {:.5})", r.gap, r.gap_bound);

    let n = 1 << 20;
    let x = BitString::zeros(n);
    let ch = ChannelParams::new(n, alpha).unwrap();
    let seeds = 20;
    let mean: f64 = (0..seeds)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let torn = tear(&x, &ch, &mut rng);
            coverage(&tpclp_filter(&torn, &profile, &mut rng), 0.0)
        })
        .sum::<f64>()
        / seeds as f64;
    println!("simulated surviving coverage at n = 2^20 over {seeds} seeds: {mean:.4}");
}
