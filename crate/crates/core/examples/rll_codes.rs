//! The two fixed-rate run-length-limited block codes.
//!
//!     cargo run --example rll_codes

use tornpaper::bits;
use tornpaper::constrained::{rll_decode, rll_encode, rll_tilde_decode, rll_tilde_encode};

fn main() {
    let v = bits("000000000000");
    let a = rll_encode(&v, 4).unwrap();
    let b = rll_tilde_encode(&v, 4).unwrap();
    println!("input          {v}  (zero run {})", v.max_zero_run());
    println!("RLL(0,3)       {a}  (zero run {})", a.max_zero_run());
    println!("framed RLL     {b}  (zero run {})", b.max_zero_run());
    assert_eq!(rll_decode(&a, 4).unwrap(), v);
    assert_eq!(rll_tilde_decode(&b, 4).unwrap(), v);
}
