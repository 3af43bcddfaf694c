//! One codeword through the torn-paper channel and back.
//!
//!     cargo run --release --example end_to_end

use tornpaper::channel::{tear, ChannelParams};
use tornpaper::codec::{decode_detailed, derive_params, encode, Codebook};
use tornpaper::experiment::random_message;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let params = derive_params(1 << 18, 3, 0.3, 8, 0.5, 0.02).expect("valid parameters");
    println!(
        "n = {}, L = {}, n_er = {}, R_er = {:.4}, threshold = {} bits, rate = {:.4}",
        params.n, params.block_len, params.n_er, params.rate_er, params.frag_threshold, params.rate()
    );
    let cb = Codebook::build(params.clone(), 0).expect("full-rank code");
    let msg = random_message(&params, 42);
    let c = encode(&msg, &cb).unwrap();

    let ch = ChannelParams::new(params.n, params.alpha).unwrap();
    let torn = tear(&c, &ch, &mut ChaCha8Rng::seed_from_u64(42));
    let fragments = torn.shuffled_view();
    println!("{} fragments, mean length {:.1}", fragments.len(), params.n as f64 / fragments.len() as f64);

    let out = decode_detailed(&fragments, &cb);
    let d = &out.diagnostics;
    println!(
        "aligned {} / short {} / other discards {}; erasures per stream {:?}",
        d.aligned,
        d.short_discarded,
        d.discarded() - d.short_discarded,
        d.erasures
    );
    match out.result {
        Ok(decoded) => println!("decoded {} bits, exact = {}", decoded.len(), decoded == msg),
        Err(e) => println!("decode failed: {e}"),
    }
}
