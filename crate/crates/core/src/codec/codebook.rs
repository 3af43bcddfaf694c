use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CodeParams, CodecError, PartialWord};
use crate::bits::BitString;
use crate::constrained::{PilotSequence, WindowIndex};
use crate::gf2::{solve_erasures, BitMatrix, ErasurePattern, Gf2Error};

/// Resampling budget for a parity-check block that comes out rank deficient.
pub const DEFAULT_RANK_RETRIES: usize = 16;

/// One dense block of the erasure code: an i.i.d. uniform parity-check matrix
/// over a fixed subset of the stream's coordinates.
#[derive(Debug, Clone)]
pub struct ErasureBlock {
    /// Stream coordinates covered by this block, ascending.
    pub coords: Vec<usize>,
    pub h: BitMatrix,
    /// Null-space basis; basis vector `i` is the only one set at `free_columns[i]`.
    pub basis: Vec<BitString>,
    pub free_columns: Vec<usize>,
}

impl ErasureBlock {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Random binary linear erasure code of length `n_er`.
///
/// Coordinates are split by a seeded permutation into blocks, each carrying
/// its own full-rank random parity-check matrix. A stream is a codeword when
/// every block's restriction satisfies its parity checks.
#[derive(Debug, Clone)]
pub struct ErasureCode {
    n_er: usize,
    blocks: Vec<ErasureBlock>,
}

impl ErasureCode {
    pub fn build(params: &CodeParams, rng: &mut ChaCha8Rng, retries: usize) -> Result<Self, CodecError> {
        let mut perm: Vec<usize> = (0..params.n_er).collect();
        if params.erasure_blocks.len() > 1 {
            perm.shuffle(rng);
        }
        let mut blocks = Vec::with_capacity(params.erasure_blocks.len());
        let mut start = 0;
        for (&size, &rows) in params.erasure_blocks.iter().zip(&params.erasure_block_rows) {
            let mut coords = perm[start..start + size].to_vec();
            coords.sort_unstable();
            start += size;
            let block = (0..retries.max(1))
                .find_map(|_| {
                    let h = BitMatrix::random(rows, size, rng);
                    let ns = h.null_space();
                    (ns.pivot_columns.len() == rows).then(|| ErasureBlock {
                        coords: coords.clone(),
                        h,
                        basis: ns.basis,
                        free_columns: ns.free_columns,
                    })
                })
                .ok_or_else(|| {
                    CodecError::ParamInvalid(format!(
                        "no full-rank {rows}×{size} parity-check block in {retries} draws"
                    ))
                })?;
            blocks.push(block);
        }
        Ok(Self {
            n_er: params.n_er,
            blocks,
        })
    }

    pub fn len(&self) -> usize {
        self.n_er
    }

    pub fn is_empty(&self) -> bool {
        self.n_er == 0
    }

    pub fn blocks(&self) -> &[ErasureBlock] {
        &self.blocks
    }

    pub fn parity_rows(&self) -> usize {
        self.blocks.iter().map(|b| b.h.rows()).sum()
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(ErasureBlock::dimension).sum()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.n_er as f64
    }

    /// Maps `dimension()` message bits to a codeword: block by block, the
    /// message bits are coefficients over that block's null-space basis.
    pub fn encode(&self, msg: &BitString) -> Result<BitString, CodecError> {
        if msg.len() != self.dimension() {
            return Err(CodecError::LengthMismatch {
                expected: self.dimension(),
                got: msg.len(),
            });
        }
        let mut out = BitString::zeros(self.n_er);
        let mut k = 0;
        for block in &self.blocks {
            let mut local = BitString::zeros(block.coords.len());
            for g in &block.basis {
                if msg.get(k) {
                    local.xor_assign(g);
                }
                k += 1;
            }
            for (j, &c) in block.coords.iter().enumerate() {
                if local.get(j) {
                    out.set(c, true);
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`encode`](Self::encode) on codewords: reads the free coordinates.
    pub fn message_of(&self, codeword: &BitString) -> BitString {
        let mut msg = BitString::with_capacity(self.dimension());
        for block in &self.blocks {
            for &f in &block.free_columns {
                msg.push(codeword.get(block.coords[f]));
            }
        }
        msg
    }

    pub fn is_codeword(&self, word: &BitString) -> bool {
        word.len() == self.n_er
            && self.blocks.iter().all(|block| {
                let local: BitString = block.coords.iter().map(|&c| word.get(c)).collect();
                block.h.mul_vec(&local).is_ok_and(|s| s.count_ones() == 0)
            })
    }

    /// Completes a partially known word, block by block.
    pub fn solve(&self, word: &PartialWord) -> Result<BitString, Gf2Error> {
        if word.len() != self.n_er {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.n_er,
                got: word.len(),
            });
        }
        let mut out = BitString::zeros(self.n_er);
        for block in &self.blocks {
            let size = block.coords.len();
            let mut local = BitString::zeros(size);
            let mut erased = Vec::new();
            for (j, &c) in block.coords.iter().enumerate() {
                if word.is_known(c) {
                    if word.value(c) {
                        local.set(j, true);
                    }
                } else {
                    erased.push(j);
                }
            }
            let pattern = ErasurePattern::new(erased, size)?;
            let solved = solve_erasures(&block.h, &local, &pattern)?;
            for (j, &c) in block.coords.iter().enumerate() {
                if solved.get(j) {
                    out.set(c, true);
                }
            }
        }
        Ok(out)
    }
}

/// Everything the encoder and decoder share: parameters, the erasure code,
/// the pilot and its window index.
#[derive(Debug, Clone)]
pub struct Codebook {
    params: CodeParams,
    code: ErasureCode,
    pilot: PilotSequence,
    index: WindowIndex,
    seed: u64,
}

impl Codebook {
    pub fn build(params: CodeParams, seed: u64) -> Result<Self, CodecError> {
        Self::build_with_retries(params, seed, DEFAULT_RANK_RETRIES)
    }

    pub fn build_with_retries(params: CodeParams, seed: u64, retries: usize) -> Result<Self, CodecError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = ErasureCode::build(&params, &mut rng, retries)?;
        let pilot = PilotSequence::build(params.layout())?;
        let index = WindowIndex::build(pilot.q(), params.window)?;
        Ok(Self {
            params,
            code,
            pilot,
            index,
            seed,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn erasure_code(&self) -> &ErasureCode {
        &self.code
    }

    pub fn pilot(&self) -> &PilotSequence {
        &self.pilot
    }

    pub fn index(&self) -> &WindowIndex {
        &self.index
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}
