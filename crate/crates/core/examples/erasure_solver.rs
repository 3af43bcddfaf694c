//! Filling erased coordinates of a random linear code over GF(2).
//!
//!     cargo run --example erasure_solver

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tornpaper::gf2::{solve_erasures, BitMatrix, ErasurePattern};
use tornpaper::BitString;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (r, n) = (24, 48);
    let h = BitMatrix::random(r, n, &mut rng);
    let basis = h.null_space_basis();
    println!("H: {r}×{n}, rank {}, code dimension {}", h.rank(), basis.len());

    let mut codeword = BitString::zeros(n);
    for g in &basis {
        if rng.gen() {
            codeword.xor_assign(g);
        }
    }
    for erased in [8, 16, 22, 24, 30] {
        let mut positions: Vec<usize> = (0..n).collect();
        positions.shuffle(&mut rng);
        positions.truncate(erased);
        let pattern = ErasurePattern::new(positions, n).unwrap();
        let mut received = codeword.clone();
        for &p in pattern.positions() {
            received.set(p, false);
        }
        match solve_erasures(&h, &received, &pattern) {
            Ok(w) => println!("{erased:>2} erasures: recovered, exact = {}", w == codeword),
            Err(e) => println!("{erased:>2} erasures: {e}"),
        }
    }
}
