//! The torn-paper channel and its lost-pieces variant.
//!
//! Each of the `n−1` gaps of the input breaks independently with probability
//! `p_n = α / log2 n`; the receiver gets the pieces in uniformly random order.
//! The lost-pieces layer then drops every piece shorter than `m·log2 n` and
//! each longer piece independently with a length-dependent probability.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("break probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid channel parameters: {0}")]
    ParamInvalid(String),
    #[error("invalid deletion profile: {0}")]
    ProfileInvalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    pub n: usize,
    pub alpha: f64,
    pub p_n: f64,
}

impl ChannelParams {
    /// Channel with `p_n = α / log2 n`; requires `0 < p_n < 1`.
    pub fn new(n: usize, alpha: f64) -> Result<Self, ChannelError> {
        if n < 2 {
            return Err(ChannelError::ParamInvalid(format!("length {n} < 2")));
        }
        if !(alpha > 0.0) {
            return Err(ChannelError::ParamInvalid(format!("α = {alpha} must be positive")));
        }
        let p_n = alpha / (n as f64).log2();
        if p_n >= 1.0 {
            return Err(ChannelError::InvalidProbability(p_n));
        }
        Ok(Self { n, alpha, p_n })
    }

    /// Channel with an explicit break probability; `0` and `1` are allowed.
    pub fn with_break_probability(n: usize, p_n: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&p_n) {
            return Err(ChannelError::InvalidProbability(p_n));
        }
        let log2_n = (n.max(2) as f64).log2();
        Ok(Self {
            n,
            alpha: p_n * log2_n,
            p_n,
        })
    }

    pub fn log2_n(&self) -> f64 {
        (self.n as f64).log2()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub offset: usize,
    pub bits: BitString,
}

impl Fragment {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Channel output together with the hidden ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TearOutcome {
    n: usize,
    /// In original (offset) order.
    fragments: Vec<Fragment>,
    /// `order[i]` is the fragment delivered `i`-th.
    order: Vec<usize>,
}

impl TearOutcome {
    /// Length of the torn string.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of delivered fragments, K.
    pub fn k(&self) -> usize {
        self.fragments.len()
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.fragments.iter().map(Fragment::len).collect()
    }

    /// Delivery order as indices into [`fragments`](Self::fragments).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// What the receiver sees: the payloads in shuffled order.
    pub fn shuffled_view(&self) -> Vec<BitString> {
        self.order.iter().map(|&i| self.fragments[i].bits.clone()).collect()
    }

    /// `(offset, length)` of each delivered fragment, in delivery order.
    pub fn truth(&self) -> Vec<(usize, usize)> {
        self.order
            .iter()
            .map(|&i| (self.fragments[i].offset, self.fragments[i].len()))
            .collect()
    }

    /// Rebuilds the input from the ground truth; `None` if pieces were lost.
    pub fn reconstruct(&self) -> Option<BitString> {
        let mut out = BitString::with_capacity(self.n);
        for f in &self.fragments {
            if f.offset != out.len() {
                return None;
            }
            out.extend_from(&f.bits);
        }
        (out.len() == self.n).then_some(out)
    }
}

/// Tears `x` at each gap independently with probability `ch.p_n`, then shuffles.
pub fn tear<R: Rng + ?Sized>(x: &BitString, ch: &ChannelParams, rng: &mut R) -> TearOutcome {
    let n = x.len();
    let mut fragments = Vec::new();
    let mut start = 0;
    for gap in 1..n {
        if rng.gen_bool(ch.p_n) {
            fragments.push(Fragment {
                offset: start,
                bits: x.slice(start..gap),
            });
            start = gap;
        }
    }
    if n > 0 {
        fragments.push(Fragment {
            offset: start,
            bits: x.slice(start..n),
        });
    }
    let mut order: Vec<usize> = (0..fragments.len()).collect();
    order.shuffle(rng);
    TearOutcome { n, fragments, order }
}

/// One constant piece of a normalized deletion profile: `d̂(κ) = d` on `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub d: f64,
}

impl std::str::FromStr for Piece {
    type Err = ChannelError;

    /// Parses `lo:hi:d`; `hi` may be `inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChannelError::ProfileInvalid(format!("piece {s:?} is not lo:hi:d"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, d] = parts.as_slice() else {
            return Err(bad());
        };
        let num = |t: &str| -> Result<f64, ChannelError> {
            match t.trim() {
                "inf" | "∞" => Ok(f64::INFINITY),
                t => t.parse().map_err(|_| bad()),
            }
        };
        Ok(Piece {
            lo: num(lo)?,
            hi: num(hi)?,
            d: num(d)?,
        })
    }
}

/// Piecewise-constant deletion probability on the normalized length axis
/// `κ = ℓ / log2 n`, with `d̂ = 1` below the threshold `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeletionProfile {
    pieces: Vec<Piece>,
    threshold: f64,
}

impl DeletionProfile {
    /// Pieces must be contiguous, end at `∞` and carry `d ∈ [0,1]`. If they
    /// start at the threshold, `d = 1` on `[0, m)` is filled in.
    pub fn new(threshold: f64, mut pieces: Vec<Piece>) -> Result<Self, ChannelError> {
        let invalid = |s: String| Err(ChannelError::ProfileInvalid(s));
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return invalid(format!("threshold {threshold} must be finite and non-negative"));
        }
        let Some(first) = pieces.first() else {
            return invalid("no pieces".into());
        };
        if first.lo > 0.0 {
            if first.lo != threshold {
                return invalid(format!(
                    "pieces start at {} but must start at 0 or at the threshold {threshold}",
                    first.lo
                ));
            }
            pieces.insert(
                0,
                Piece {
                    lo: 0.0,
                    hi: threshold,
                    d: 1.0,
                },
            );
        }
        if pieces[0].lo != 0.0 {
            return invalid(format!("first piece starts at {} < 0", pieces[0].lo));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(0.0..=1.0).contains(&p.d) {
                return invalid(format!("d = {} outside [0, 1]", p.d));
            }
            if !(p.hi > p.lo) {
                return invalid(format!("empty piece [{}, {})", p.lo, p.hi));
            }
            if let Some(next) = pieces.get(i + 1) {
                if next.lo != p.hi {
                    return invalid(format!("gap or overlap between {} and {}", p.hi, next.lo));
                }
            } else if p.hi != f64::INFINITY {
                return invalid(format!("last piece ends at {} instead of ∞", p.hi));
            }
            if p.lo < threshold && p.d != 1.0 {
                return invalid(format!("d must be 1 below the threshold {threshold}, piece at {} has {}", p.lo, p.d));
            }
        }
        Ok(Self { pieces, threshold })
    }

    /// `d̂ ≡ d` above the threshold.
    pub fn constant(threshold: f64, d: f64) -> Result<Self, ChannelError> {
        Self::new(
            threshold,
            vec![Piece {
                lo: threshold,
                hi: f64::INFINITY,
                d,
            }],
        )
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// `d̂(κ)`.
    pub fn at(&self, kappa: f64) -> f64 {
        self.pieces
            .iter()
            .find(|p| kappa >= p.lo && kappa < p.hi)
            .map_or(1.0, |p| p.d)
    }
}

/// Survival draw for fragments of the given lengths cut from a string of
/// length `n`: short ones are always lost, longer ones kept with probability
/// `1 − d̂(ℓ / log2 n)`.
pub fn retain_mask<R: Rng + ?Sized>(lengths: &[usize], n: usize, profile: &DeletionProfile, rng: &mut R) -> Vec<bool> {
    let log2_n = (n.max(2) as f64).log2();
    let min_len = length_threshold(n, profile.threshold);
    lengths
        .iter()
        .map(|&len| len >= min_len && !rng.gen_bool(profile.at(len as f64 / log2_n)))
        .collect()
}

/// Applies the lost-pieces layer to a torn string.
pub fn tpclp_filter<R: Rng + ?Sized>(out: &TearOutcome, profile: &DeletionProfile, rng: &mut R) -> TearOutcome {
    let keep = retain_mask(&out.lengths(), out.n, profile, rng);
    let mut new_index = vec![usize::MAX; keep.len()];
    let mut fragments = Vec::new();
    for (i, f) in out.fragments.iter().enumerate() {
        if keep[i] {
            new_index[i] = fragments.len();
            fragments.push(f.clone());
        }
    }
    let order = out.order.iter().filter(|&&i| keep[i]).map(|&i| new_index[i]).collect();
    TearOutcome {
        n: out.n,
        fragments,
        order,
    }
}

/// Fraction of the `n` bits lying in fragments of length at least `⌈γ·log2 n⌉`.
pub fn coverage(out: &TearOutcome, gamma: f64) -> f64 {
    if out.n == 0 {
        return 0.0;
    }
    let min_len = length_threshold(out.n, gamma);
    let covered: usize = out.fragments.iter().map(Fragment::len).filter(|&l| l >= min_len).sum();
    covered as f64 / out.n as f64
}

/// `⌈γ·log2 n⌉`.
pub fn length_threshold(n: usize, gamma: f64) -> usize {
    (gamma * (n.max(2) as f64).log2() - 1e-9).ceil().max(0.0) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageStats {
    pub v_gamma: f64,
    pub k: usize,
    pub erasures: Vec<usize>,
    /// `|E_i| ≤ limit` per stream.
    pub good: Vec<bool>,
}

impl CoverageStats {
    pub fn all_good(&self) -> bool {
        self.good.iter().all(|&g| g)
    }
}

/// Fragment count, coverage and good-set membership of per-stream erasure
/// counts against `limit = (1 − R_er − η)·n_er`.
pub fn fragment_stats(out: &TearOutcome, gamma: f64, erasures: &[usize], limit: f64) -> CoverageStats {
    CoverageStats {
        v_gamma: coverage(out, gamma),
        k: out.k(),
        erasures: erasures.to_vec(),
        good: erasures.iter().map(|&e| e as f64 <= limit).collect(),
    }
}
