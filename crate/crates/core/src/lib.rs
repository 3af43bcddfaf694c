//! Local-alignment coding for the torn-paper channel.
//!
//! A codeword interleaves `m−1` RLL-constrained random-linear erasure codewords
//! with a pilot stream built from a De Bruijn sequence and periodic zero-run
//! markers. The channel cuts the codeword at random and shuffles the pieces;
//! the decoder finds each long fragment's pilot, reads its absolute position
//! from the De Bruijn bits, and solves the resulting erasure problem.

pub mod analysis;
pub mod bits;
pub mod channel;
pub mod cli;
pub mod codec;
pub mod constrained;
pub mod experiment;
pub mod gf2;
pub mod io;

pub use bits::{bits, BitString};
