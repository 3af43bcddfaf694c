//! Finite-length parameter derivation.
//!
//! The construction is stated asymptotically; this module fixes the integer
//! rounding. The pilot block length is `L = β·⌈(1+δ/2)·log2 n / β⌉`, the
//! codeword length is rounded down to `n = m·B·L`, and the fragment threshold is
//! the larger of the nominal `(1+δ)·m·log2 n` and the exact worst-case length at
//! which every fragment is guaranteed to align. The erasure-code rate is then
//! sized for that threshold.

use serde::{Deserialize, Serialize};

use super::CodecError;
use crate::constrained::{PilotLayout, PilotRole};

/// Default length of one dense block of the erasure code.
pub const DEFAULT_ERASURE_BLOCK_LEN: usize = 2048;

/// User-facing inputs to [`derive_params`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub n_target: usize,
    pub m: usize,
    pub alpha: f64,
    pub beta: usize,
    pub delta: f64,
    pub eta: f64,
    pub erasure_block_len: usize,
}

impl ParamSpec {
    pub fn new(n_target: usize, m: usize, alpha: f64, beta: usize, delta: f64, eta: f64) -> Self {
        Self {
            n_target,
            m,
            alpha,
            beta,
            delta,
            eta,
            erasure_block_len: DEFAULT_ERASURE_BLOCK_LEN,
        }
    }

    pub fn with_erasure_block_len(mut self, len: usize) -> Self {
        self.erasure_block_len = len;
        self
    }

    pub fn derive(&self) -> Result<CodeParams, CodecError> {
        derive_params_from(self)
    }
}

/// Fully resolved scheme parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n_target: usize,
    /// Codeword length, `m · B · L`.
    pub n: usize,
    pub m: usize,
    pub beta: usize,
    pub delta: f64,
    pub eta: f64,
    pub alpha: f64,
    /// Pilot block length L.
    pub block_len: usize,
    /// Pilot blocks B.
    pub blocks: usize,
    pub log2_n: f64,
    /// Erasure-code length `(n/m)(β−1)/β`.
    pub n_er: usize,
    /// Parity rows across all erasure blocks.
    pub r: usize,
    /// `1 − r / n_er`.
    pub rate_er: f64,
    /// Target erasure-code rate `(αγ+1)e^{−αγ} − 3η` before rounding.
    pub design_rate: f64,
    /// Window-index width (De Bruijn order of `q`).
    pub window: usize,
    /// `(1+δ)·m`.
    pub gamma_nominal: f64,
    /// `frag_threshold / log2 n`, the γ the erasure rate is designed for.
    pub gamma: f64,
    /// `⌈(1+δ)·m·log2 n⌉`.
    pub nominal_threshold: usize,
    /// Shortest length at which every fragment is guaranteed to align.
    pub alignment_length: usize,
    /// Fragments shorter than this are discarded by the decoder.
    pub frag_threshold: usize,
    pub erasure_block_len: usize,
    /// Sizes of the erasure blocks (sum = `n_er`).
    pub erasure_blocks: Vec<usize>,
    /// Parity rows per erasure block (sum = `r`).
    pub erasure_block_rows: Vec<usize>,
}

impl CodeParams {
    pub fn layout(&self) -> PilotLayout {
        PilotLayout {
            beta: self.beta,
            block_len: self.block_len,
            blocks: self.blocks,
        }
    }

    /// Length of each interleaved stream, `n / m`.
    pub fn stream_len(&self) -> usize {
        self.n / self.m
    }

    /// Breaking probability `α / log2 n` of the matching channel.
    pub fn p_n(&self) -> f64 {
        self.alpha / self.log2_n
    }

    /// Bits carried per codeword, `(m−1)(n_er − r)`.
    pub fn message_bits(&self) -> usize {
        (self.m - 1) * (self.n_er - self.r)
    }

    /// Overall rate `message_bits / n`.
    pub fn rate(&self) -> f64 {
        self.message_bits() as f64 / self.n as f64
    }

    /// Largest per-stream erasure count inside the good set,
    /// `(1 − R_er − η)·n_er`.
    pub fn good_set_limit(&self) -> f64 {
        (1.0 - self.rate_er - self.eta) * self.n_er as f64
    }
}

pub fn derive_params(
    n_target: usize,
    m: usize,
    alpha: f64,
    beta: usize,
    delta: f64,
    eta: f64,
) -> Result<CodeParams, CodecError> {
    ParamSpec::new(n_target, m, alpha, beta, delta, eta).derive()
}

fn invalid(msg: impl Into<String>) -> CodecError {
    CodecError::ParamInvalid(msg.into())
}

fn derive_params_from(spec: &ParamSpec) -> Result<CodeParams, CodecError> {
    let ParamSpec {
        n_target,
        m,
        alpha,
        beta,
        delta,
        eta,
        erasure_block_len,
    } = *spec;
    if m < 2 {
        return Err(invalid(format!("interleaving factor m={m} must be at least 2")));
    }
    if beta < 4 {
        return Err(invalid(format!("marker length β={beta} must be at least 4")));
    }
    let delta_min = 2.0 / (beta as f64 - 2.0);
    if !(delta > delta_min) || !delta.is_finite() {
        return Err(invalid(format!(
            "alignment slack δ={delta} must exceed 2/(β−2)={delta_min:.6} (De Bruijn window length condition)"
        )));
    }
    if !(eta > 0.0 && eta < 1.0 / 3.0) {
        return Err(invalid(format!("rate margin η={eta} must lie in (0, 1/3)")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("breaking parameter α={alpha} must be positive")));
    }
    if erasure_block_len < 16 {
        return Err(invalid(format!("erasure block length {erasure_block_len} < 16")));
    }
    if n_target < 16 {
        return Err(invalid(format!("target length {n_target} too small")));
    }

    let log2_target = (n_target as f64).log2();
    let block_len = beta * ((1.0 + delta / 2.0) * log2_target / beta as f64).ceil() as usize;
    let block_len = block_len.max(2 * beta);
    let blocks = n_target / (m * block_len);
    if blocks == 0 {
        return Err(invalid(format!(
            "target length {n_target} shorter than one pilot block (m·L = {})",
            m * block_len
        )));
    }
    let layout = PilotLayout::new(beta, block_len, blocks)?;
    let n = m * blocks * block_len;
    let log2_n = (n as f64).log2();
    let window = layout.window_order();
    if layout.q_len() < window {
        return Err(invalid("De Bruijn sequence shorter than its window"));
    }

    let gamma_nominal = (1.0 + delta) * m as f64;
    let nominal_threshold = (gamma_nominal * log2_n - 1e-9).ceil() as usize;
    let alignment_length = alignment_length(&layout, m, window);
    if alignment_length > n {
        return Err(invalid(format!(
            "codeword length {n} shorter than the alignment length {alignment_length}"
        )));
    }
    let frag_threshold = nominal_threshold.max(alignment_length);
    let gamma = frag_threshold as f64 / log2_n;
    let ag = alpha * gamma;
    let design_rate = (ag + 1.0) * (-ag).exp() - 3.0 * eta;
    if design_rate <= 0.0 {
        return Err(invalid(format!(
            "erasure-code rate (αγ+1)e^(−αγ)−3η = {design_rate:.4} is not positive (γ = {gamma:.3})"
        )));
    }

    let stream_len = n / m;
    let n_er = stream_len / beta * (beta - 1);
    let block_count = n_er.div_ceil(erasure_block_len);
    let (base, extra) = (n_er / block_count, n_er % block_count);
    let erasure_blocks: Vec<usize> = (0..block_count)
        .map(|j| base + usize::from(j < extra))
        .collect();
    let erasure_block_rows: Vec<usize> = erasure_blocks
        .iter()
        .map(|&b| ((1.0 - design_rate) * b as f64 - 1e-9).ceil() as usize)
        .collect();
    if erasure_blocks
        .iter()
        .zip(&erasure_block_rows)
        .any(|(&b, &r)| r >= b)
    {
        return Err(invalid("erasure block too short for the design rate"));
    }
    let r: usize = erasure_block_rows.iter().sum();
    let rate_er = 1.0 - r as f64 / n_er as f64;

    Ok(CodeParams {
        n_target,
        n,
        m,
        beta,
        delta,
        eta,
        alpha,
        block_len,
        blocks,
        log2_n,
        n_er,
        r,
        rate_er,
        design_rate,
        window,
        gamma_nominal,
        gamma,
        nominal_threshold,
        alignment_length,
        frag_threshold,
        erasure_block_len,
        erasure_blocks,
        erasure_block_rows,
    })
}

/// Worst case, over all start offsets, of the shortest fragment whose pilot
/// stream holds a complete marker and at least `window` De Bruijn bits.
///
/// The role pattern of codeword positions has period `m·L`, so scanning start
/// offsets in `[0, m·L)` covers every fragment.
pub fn alignment_length(layout: &PilotLayout, m: usize, window: usize) -> usize {
    let l = layout.block_len;
    let mut worst = 0;
    for s in 0..m * l {
        let t_lo = s.div_ceil(m);
        // first marker fully at or after t_lo
        let first_marker = t_lo.div_ceil(l) * l;
        let marker_end = first_marker + layout.beta - 1;
        let mut data = 0;
        let mut t = t_lo;
        loop {
            if layout.role(t) == PilotRole::Data {
                data += 1;
            }
            if data >= window && t >= marker_end {
                break;
            }
            t += 1;
        }
        worst = worst.max(m * t + 1 - s);
    }
    worst
}
