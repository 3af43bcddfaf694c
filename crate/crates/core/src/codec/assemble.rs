use super::{CodeParams, CodecError};
use crate::bits::BitString;
use crate::gf2::{ErasurePattern, Gf2Error};

/// A word over `{0, 1, ⋆}`: `values` is meaningful only where `known` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialWord {
    values: BitString,
    known: BitString,
}

impl PartialWord {
    pub fn new(mut values: BitString, known: BitString) -> Result<Self, Gf2Error> {
        if values.len() != known.len() {
            return Err(Gf2Error::DimensionMismatch {
                expected: known.len(),
                got: values.len(),
            });
        }
        values.and_assign(&known);
        Ok(Self { values, known })
    }

    pub fn unknown(len: usize) -> Self {
        Self {
            values: BitString::zeros(len),
            known: BitString::zeros(len),
        }
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    #[inline]
    pub fn is_known(&self, i: usize) -> bool {
        self.known.get(i)
    }

    /// Bit at `i`; `false` for erased positions.
    #[inline]
    pub fn value(&self, i: usize) -> bool {
        self.values.get(i)
    }

    pub fn values(&self) -> &BitString {
        &self.values
    }

    pub fn known(&self) -> &BitString {
        &self.known
    }

    pub fn known_count(&self) -> usize {
        self.known.count_ones()
    }

    pub fn erasure_count(&self) -> usize {
        self.len() - self.known_count()
    }

    pub fn erasures(&self) -> ErasurePattern {
        ErasurePattern::from_known_mask(&self.known)
    }

    fn push(&mut self, known: bool, value: bool) {
        self.known.push(known);
        self.values.push(known && value);
    }
}

impl std::fmt::Display for PartialWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.len())
            .map(|i| match (self.is_known(i), self.value(i)) {
                (false, _) => '*',
                (true, false) => '0',
                (true, true) => '1',
            })
            .collect();
        f.write_str(&s)
    }
}

/// The length-n codeword estimate built from globally placed fragments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedCodeword {
    word: PartialWord,
}

impl AlignedCodeword {
    pub fn new(n: usize) -> Self {
        Self {
            word: PartialWord::unknown(n),
        }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn coverage_count(&self) -> usize {
        self.word.known_count()
    }

    pub fn as_partial(&self) -> &PartialWord {
        &self.word
    }

    /// Writes `fragment` at `offset`. Nothing is written if the fragment runs
    /// past the end or disagrees with an already placed bit.
    pub fn place(&mut self, offset: usize, fragment: &BitString) -> Result<(), CodecError> {
        let end = offset + fragment.len();
        if end > self.len() {
            return Err(CodecError::OffsetOutOfRange { offset: offset as i64 });
        }
        for (k, b) in fragment.iter().enumerate() {
            let g = offset + k;
            if self.word.known.get(g) && self.word.values.get(g) != b {
                return Err(CodecError::Conflict { position: g });
            }
        }
        for (k, b) in fragment.iter().enumerate() {
            self.word.known.set(offset + k, true);
            self.word.values.set(offset + k, b);
        }
        Ok(())
    }
}

/// Places every `(offset, fragment)`; the first disagreement is reported.
pub fn assemble(fragments: &[(usize, BitString)], params: &CodeParams) -> Result<AlignedCodeword, CodecError> {
    let mut out = AlignedCodeword::new(params.n);
    for (offset, f) in fragments {
        out.place(*offset, f)?;
    }
    Ok(out)
}

/// Reads the `m−1` erasure-code words out of an aligned codeword.
///
/// Data stream `k` occupies codeword positions `m·t + k`; within a stream the
/// position `t ≡ β−1 (mod β)` holds an RLL framing one and is skipped.
pub fn extract_erasure_estimates(c: &AlignedCodeword, params: &CodeParams) -> Vec<PartialWord> {
    let (m, beta) = (params.m, params.beta);
    let word = c.as_partial();
    (1..m)
        .map(|k| {
            let mut r = PartialWord {
                values: BitString::with_capacity(params.n_er),
                known: BitString::with_capacity(params.n_er),
            };
            for t in (0..params.stream_len()).filter(|t| t % beta != beta - 1) {
                let g = m * t + k;
                r.push(word.is_known(g), word.value(g));
            }
            r
        })
        .collect()
}
