use serde::Serialize;

use super::{
    extract_debruijn, extract_erasure_estimates, global_position, local_align, AlignedCodeword, Codebook,
    CodecError,
};
use crate::bits::BitString;

/// Where a fragment was placed by global alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Placement {
    /// Index of the fragment in the decoder's input.
    pub fragment: usize,
    pub offset: usize,
    pub len: usize,
}

/// Per-fragment bookkeeping of one decode call.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DecodeDiagnostics {
    pub fragments: usize,
    pub short_discarded: usize,
    pub no_pilot: usize,
    pub ambiguous: usize,
    pub no_marker: usize,
    pub misaligned: usize,
    pub insufficient: usize,
    pub window_not_found: usize,
    pub out_of_range: usize,
    pub conflicts: usize,
    pub aligned: usize,
    /// Codeword positions covered by placed fragments.
    pub coverage: usize,
    /// Erased coordinates per data stream.
    pub erasures: Vec<usize>,
    pub placements: Vec<Placement>,
}

impl DecodeDiagnostics {
    pub fn discarded(&self) -> usize {
        self.fragments - self.aligned
    }

    fn count(&mut self, err: &CodecError) {
        let slot = match err {
            CodecError::NoPilotFound => &mut self.no_pilot,
            CodecError::AmbiguousPilot { .. } => &mut self.ambiguous,
            CodecError::NoMarker => &mut self.no_marker,
            CodecError::MarkerMisaligned { .. } => &mut self.misaligned,
            CodecError::InsufficientPilot { .. } => &mut self.insufficient,
            CodecError::WindowNotFound => &mut self.window_not_found,
            CodecError::OffsetOutOfRange { .. } => &mut self.out_of_range,
            CodecError::Conflict { .. } => &mut self.conflicts,
            _ => return,
        };
        *slot += 1;
    }
}

#[derive(Debug, Clone)]
pub struct DecodeOutcome {
    pub result: Result<BitString, CodecError>,
    pub diagnostics: DecodeDiagnostics,
}

/// Decodes an unordered set of fragments back to the message.
pub fn decode(fragments: &[BitString], cb: &Codebook) -> Result<BitString, CodecError> {
    decode_detailed(fragments, cb).result
}

/// As [`decode`], also reporting what happened to every fragment.
///
/// Fragments that fail alignment are discarded and counted, never fatal; only
/// the final erasure solve can fail the decode.
pub fn decode_detailed(fragments: &[BitString], cb: &Codebook) -> DecodeOutcome {
    let params = cb.params();
    let mut diag = DecodeDiagnostics {
        fragments: fragments.len(),
        ..Default::default()
    };
    let mut word = AlignedCodeword::new(params.n);
    for (idx, f) in fragments.iter().enumerate() {
        if f.len() < params.frag_threshold {
            diag.short_discarded += 1;
            continue;
        }
        let placed = local_align(f, params).and_then(|la| {
            let db = extract_debruijn(&la.pilot, params)?;
            let offset = global_position(&db, la.phase, f.len(), cb)?;
            word.place(offset, f)?;
            Ok(offset)
        });
        match placed {
            Ok(offset) => {
                diag.aligned += 1;
                diag.placements.push(Placement {
                    fragment: idx,
                    offset,
                    len: f.len(),
                });
            }
            Err(e) => diag.count(&e),
        }
    }
    diag.coverage = word.coverage_count();

    let estimates = extract_erasure_estimates(&word, params);
    diag.erasures = estimates.iter().map(|r| r.erasure_count()).collect();
    let code = cb.erasure_code();
    let result = estimates
        .iter()
        .enumerate()
        .map(|(i, r)| {
            code.solve(r)
                .map(|cw| code.message_of(&cw))
                .map_err(|cause| CodecError::DecodeFailure { stream: i + 1, cause })
        })
        .try_fold(BitString::with_capacity(params.message_bits()), |mut msg, part| {
            msg.extend_from(&part?);
            Ok(msg)
        });
    DecodeOutcome {
        result,
        diagnostics: diag,
    }
}
