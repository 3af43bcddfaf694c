//! Constrained sequences: the De Bruijn source, the two run-length-limited block
//! codes, the marker-embedded pilot built from them, and the window index used
//! to place a recovered De Bruijn substring.

mod debruijn;
mod pilot;
mod rll;
mod window;

use thiserror::Error;

pub use debruijn::de_bruijn;
pub use pilot::{find_zero_runs, PilotLayout, PilotRole, PilotSequence};
pub use rll::{rll_decode, rll_encode, rll_tilde_decode, rll_tilde_encode};
pub use window::WindowIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("invalid parameters: {0}")]
    ParamInvalid(String),
    #[error("malformed RLL word: framing bit at position {position} is 0")]
    MalformedRll { position: usize },
    #[error("window starting at {second} repeats the window at {first}")]
    DuplicateWindow { first: usize, second: usize },
    #[error("window not present in the index")]
    NotFound,
}
