use super::{Codebook, CodeParams, CodecError};
use crate::bits::BitString;
use crate::constrained::{find_zero_runs, PilotRole};

/// A fragment split into its `m` residue streams, with the pilot identified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalAlignment {
    /// Index in the fragment of its first pilot bit (`0 ≤ phase < m`).
    pub phase: usize,
    pub pilot: BitString,
    /// Streams `w_{phase+1}, …, w_{phase+m−1}` (indices mod m), in that order.
    pub data: Vec<BitString>,
}

/// The De Bruijn bits carried by a fragment's pilot stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeBruijnFragment {
    /// Contiguous substring of `q`.
    pub q_f: BitString,
    /// Index in the pilot stream of the bit that carries `q_f[0]`.
    pub first_pilot_index: usize,
}

fn deinterleave(f: &BitString, m: usize) -> Vec<BitString> {
    let mut streams: Vec<BitString> = (0..m).map(|_| BitString::with_capacity(f.len() / m + 1)).collect();
    for (i, b) in f.iter().enumerate() {
        streams[i % m].push(b);
    }
    streams
}

/// Finds the residue stream that holds a β-long zero run.
///
/// Data streams are RLL(0, β−1) so only the pilot can contain such a run.
pub fn local_align(f: &BitString, params: &CodeParams) -> Result<LocalAlignment, CodecError> {
    let m = params.m;
    let mut streams = deinterleave(f, m);
    let with_run: Vec<usize> = (0..m)
        .filter(|&i| streams[i].len() >= params.beta && streams[i].max_zero_run() >= params.beta)
        .collect();
    let phase = match with_run.as_slice() {
        [] => return Err(CodecError::NoPilotFound),
        [j] => *j,
        many => return Err(CodecError::AmbiguousPilot { streams: many.len() }),
    };
    let data = (1..m).map(|k| std::mem::take(&mut streams[(phase + k) % m])).collect();
    Ok(LocalAlignment {
        phase,
        pilot: std::mem::take(&mut streams[phase]),
        data,
    })
}

/// Strips markers and framing bits from a pilot fragment.
///
/// The first detected marker `u*` fixes the role of every position through
/// its residue mod L, so bits on both sides of `u*` are classified exactly and
/// partial markers at either edge are dropped with the rest of the marker.
pub fn extract_debruijn(p_f: &BitString, params: &CodeParams) -> Result<DeBruijnFragment, CodecError> {
    let layout = params.layout();
    let l = layout.block_len;
    let runs = find_zero_runs(p_f, layout.beta);
    let &u_star = runs.first().ok_or(CodecError::NoMarker)?;
    if let Some(&bad) = runs.iter().find(|&&u| (u - u_star) % l != 0) {
        return Err(CodecError::MarkerMisaligned { position: bad });
    }
    // pilot position i sits at phase (i − u*) mod L within its block
    let shift = l - u_star % l;
    let mut q_f = BitString::new();
    let mut first = None;
    for (i, b) in p_f.iter().enumerate() {
        if layout.role(i + shift) == PilotRole::Data {
            first.get_or_insert(i);
            q_f.push(b);
        }
    }
    Ok(DeBruijnFragment {
        q_f,
        first_pilot_index: first.unwrap_or(0),
    })
}

/// Absolute codeword offset of a fragment from its De Bruijn bits.
///
/// The first `w` bits locate `q_f` in `q`; the whole of `q_f` is then checked
/// against `q` so a spurious match cannot place a fragment.
pub fn global_position(
    db: &DeBruijnFragment,
    phase: usize,
    fragment_len: usize,
    cb: &Codebook,
) -> Result<usize, CodecError> {
    let params = cb.params();
    let w = cb.index().width();
    if db.q_f.len() < w {
        return Err(CodecError::InsufficientPilot {
            have: db.q_f.len(),
            need: w,
        });
    }
    let i_q = cb
        .index()
        .lookup_bits(db.q_f.read_u64(0, w))
        .map_err(|_| CodecError::WindowNotFound)?;
    let q = cb.pilot().q();
    if i_q + db.q_f.len() > q.len() || q.slice(i_q..i_q + db.q_f.len()) != db.q_f {
        return Err(CodecError::WindowNotFound);
    }
    let t = params.layout().q_to_p(i_q) as i64;
    let offset = params.m as i64 * (t - db.first_pilot_index as i64) - phase as i64;
    if offset < 0 || offset as usize + fragment_len > params.n {
        return Err(CodecError::OffsetOutOfRange { offset });
    }
    Ok(offset as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::codec::{derive_params, encode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy_params(m: usize) -> CodeParams {
        let mut p = derive_params(1 << 12, m, 0.3, 4, 1.5, 0.02).unwrap();
        p.block_len = 8;
        p.blocks = 1;
        p
    }

    #[test]
    fn local_align_hand_trace() {
        let params = toy_params(2);
        let f = bits("0101010111011111");
        let la = local_align(&f, &params).unwrap();
        assert_eq!(la.phase, 0);
        assert_eq!(la.pilot, bits("00001011"));
        assert_eq!(la.data, vec![bits("11111111")]);

        // one preceding data bit puts the pilot on the odd residue
        let mut shifted = bits("1");
        shifted.extend_from(&f);
        let la = local_align(&shifted, &params).unwrap();
        assert_eq!(la.phase, 1);
        assert_eq!(la.pilot, bits("00001011"));

        assert_eq!(local_align(&bits("0101"), &params), Err(CodecError::NoPilotFound));
    }

    #[test]
    fn ambiguous_when_two_streams_hold_runs() {
        let params = toy_params(2);
        assert_eq!(
            local_align(&bits("00000000"), &params),
            Err(CodecError::AmbiguousPilot { streams: 2 })
        );
    }

    #[test]
    fn extract_hand_trace() {
        let params = toy_params(2);
        let db = extract_debruijn(&bits("00001011"), &params).unwrap();
        assert_eq!(db.q_f, bits("01"));
        assert_eq!(db.first_pilot_index, 5);
        assert_eq!(extract_debruijn(&bits("1011"), &params), Err(CodecError::NoMarker));
    }

    #[test]
    fn extract_keeps_bits_before_first_marker() {
        let params = toy_params(2);
        // starts at block phase 4: framing, 2 data, framing, marker, framing, 2 data, framing
        let p = bits("101100001101");
        let db = extract_debruijn(&p, &params).unwrap();
        assert_eq!(db.first_pilot_index, 1);
        assert_eq!(db.q_f, bits("0110"));
    }

    #[test]
    fn misaligned_runs_rejected() {
        let params = toy_params(2);
        assert_eq!(
            extract_debruijn(&bits("0000100001"), &params),
            Err(CodecError::MarkerMisaligned { position: 5 })
        );
    }

    #[test]
    fn random_windows_align_to_truth() {
        let params = derive_params(1 << 14, 3, 0.3, 6, 1.0, 0.02).unwrap();
        let cb = Codebook::build(params.clone(), 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let msg: BitString = (0..params.message_bits()).map(|_| rng.gen()).collect();
        let c = encode(&msg, &cb).unwrap();
        for _ in 0..500 {
            let len = rng.gen_range(params.frag_threshold..=params.frag_threshold * 3);
            let start = rng.gen_range(0..=params.n - len);
            let f = c.slice(start..start + len);
            let la = local_align(&f, &params).unwrap();
            assert_eq!((start + la.phase) % params.m, 0);
            let db = extract_debruijn(&la.pilot, &params).unwrap();
            assert_eq!(global_position(&db, la.phase, len, &cb).unwrap(), start);
        }
    }
}
