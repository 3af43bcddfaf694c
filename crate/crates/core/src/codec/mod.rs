//! Encoder and three-step decoder of the local-alignment torn-paper code.
//!
//! Encoding: message → (m−1) erasure codewords → RLL(0, β−1) → interleaved with
//! the marker-embedded pilot. Decoding: local alignment (find the pilot stream
//! by its β-zero marker), global alignment (De Bruijn window lookup), then
//! RLL stripping and erasure solving per stream.

mod align;
mod assemble;
mod codebook;
mod decode;
mod encode;
mod params;

use thiserror::Error;

use crate::constrained::ConstraintError;
use crate::gf2::Gf2Error;

pub use align::{extract_debruijn, global_position, local_align, DeBruijnFragment, LocalAlignment};
pub use assemble::{assemble, extract_erasure_estimates, AlignedCodeword, PartialWord};
pub use codebook::{Codebook, ErasureBlock, ErasureCode, DEFAULT_RANK_RETRIES};
pub use decode::{decode, decode_detailed, DecodeDiagnostics, DecodeOutcome, Placement};
pub use encode::{encode, encode_streams, message_capacity};
pub use params::{
    alignment_length, derive_params, CodeParams, ParamSpec, DEFAULT_ERASURE_BLOCK_LEN,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("invalid parameters: {0}")]
    ParamInvalid(String),
    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no de-interleaved stream contains a marker")]
    NoPilotFound,
    #[error("{streams} de-interleaved streams contain a marker")]
    AmbiguousPilot { streams: usize },
    #[error("pilot fragment contains no marker")]
    NoMarker,
    #[error("zero-run at {position} is not on the marker grid")]
    MarkerMisaligned { position: usize },
    #[error("pilot fragment yields {have} De Bruijn bits, {need} needed")]
    InsufficientPilot { have: usize, need: usize },
    #[error("De Bruijn window not found")]
    WindowNotFound,
    #[error("fragment offset {offset} out of range")]
    OffsetOutOfRange { offset: i64 },
    #[error("fragments disagree at codeword position {position}")]
    Conflict { position: usize },
    #[error("erasure decoding failed on stream {stream}: {cause}")]
    DecodeFailure { stream: usize, cause: Gf2Error },
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
}
