use super::{CodeParams, Codebook, CodecError};
use crate::bits::BitString;
use crate::constrained::rll_encode;

/// Message bits per codeword, `(m−1)(n_er − r)`.
pub fn message_capacity(params: &CodeParams) -> usize {
    params.message_bits()
}

/// Splits `msg` into `m−1` chunks and maps each to an erasure-code codeword.
pub fn encode_streams(msg: &BitString, cb: &Codebook) -> Result<Vec<BitString>, CodecError> {
    let params = cb.params();
    let expected = message_capacity(params);
    if msg.len() != expected {
        return Err(CodecError::LengthMismatch {
            expected,
            got: msg.len(),
        });
    }
    let k = params.n_er - params.r;
    (0..params.m - 1)
        .map(|j| cb.erasure_code().encode(&msg.slice(j * k..(j + 1) * k)))
        .collect()
}

/// Full encoder: erasure code, RLL(0, β−1) per stream, then interleaving with
/// the pilot as `c[m·t] = p[t]`, `c[m·t + j] = s̄_j[t]`.
pub fn encode(msg: &BitString, cb: &Codebook) -> Result<BitString, CodecError> {
    let params = cb.params();
    let m = params.m;
    let streams = encode_streams(msg, cb)?
        .iter()
        .map(|s| rll_encode(s, params.beta))
        .collect::<Result<Vec<_>, _>>()?;
    let pilot = cb.pilot().p();
    debug_assert_eq!(pilot.len(), params.stream_len());
    let mut c = BitString::with_capacity(params.n);
    for t in 0..params.stream_len() {
        c.push(pilot.get(t));
        for s in &streams {
            c.push(s.get(t));
        }
    }
    debug_assert_eq!(c.len(), m * params.stream_len());
    Ok(c)
}
