//! Coverage of long fragments against (αγ+1)e^{−αγ} as n grows.
//!
//!     cargo run --release --example channel_coverage

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tornpaper::channel::{coverage, tear, ChannelParams};
use tornpaper::BitString;

fn main() {
    let (alpha, gamma, seeds) = (0.5, 3.0, 50);
    let limit = (alpha * gamma + 1.0) * f64::exp(-alpha * gamma);
    println!("limit (αγ+1)e^(-αγ) = {limit:.4}");
    for n in [10_000usize, 100_000, 1_000_000] {
        let x = BitString::zeros(n);
        let ch = ChannelParams::new(n, alpha).unwrap();
        let (mut v, mut k) = (0.0, 0.0);
        for s in 0..seeds {
            let out = tear(&x, &ch, &mut ChaCha8Rng::seed_from_u64(s));
            v += coverage(&out, gamma);
            k += out.k() as f64;
        }
        let (v, k) = (v / seeds as f64, k / seeds as f64);
        println!("n = {n:>8}: mean V = {v:.4} (error {:+.4}), K/(n p_n) = {:.4}", v - limit, k / (n as f64 * ch.p_n));
    }
}
