//! The marker-embedded pilot.
//!
//! `q` (a truncated De Bruijn sequence) is R̃LL-encoded with block length β into
//! `q̄`, then cut into slices of `L − β` bits, each prefixed by a marker of β
//! zeros. Because β divides L, every marker is flanked by framing ones of `q̄`,
//! so a β-long zero window in `p` occurs exactly at the marker slots
//! `0, L, 2L, …`.

use serde::{Deserialize, Serialize};

use super::{de_bruijn, rll_tilde_encode, ConstraintError};
use crate::bits::BitString;

/// Geometry of the pilot: marker length β, block length L and block count B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PilotLayout {
    pub beta: usize,
    pub block_len: usize,
    pub blocks: usize,
}

/// What a pilot position carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PilotRole {
    Marker,
    Framing,
    /// Carries bit `q[index]`.
    Data,
}

impl PilotLayout {
    pub fn new(beta: usize, block_len: usize, blocks: usize) -> Result<Self, ConstraintError> {
        let layout = Self {
            beta,
            block_len,
            blocks,
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<(), ConstraintError> {
        let Self {
            beta,
            block_len,
            blocks,
        } = *self;
        if beta < 4 {
            return Err(ConstraintError::ParamInvalid(format!("marker length β={beta} < 4")));
        }
        if block_len <= beta || block_len % beta != 0 {
            return Err(ConstraintError::ParamInvalid(format!(
                "block length L={block_len} must be a multiple of β={beta} greater than β"
            )));
        }
        if blocks == 0 {
            return Err(ConstraintError::ParamInvalid("pilot has zero blocks".into()));
        }
        Ok(())
    }

    pub fn pilot_len(&self) -> usize {
        self.blocks * self.block_len
    }

    pub fn qbar_len(&self) -> usize {
        self.blocks * (self.block_len - self.beta)
    }

    /// Number of `q` bits carried by one L-block.
    pub fn data_per_block(&self) -> usize {
        (self.block_len - self.beta) / self.beta * (self.beta - 2)
    }

    pub fn q_len(&self) -> usize {
        self.blocks * self.data_per_block()
    }

    /// De Bruijn order used for `q`: the smallest `w ≥ 1` with `2^w ≥ |q|`.
    pub fn window_order(&self) -> usize {
        ceil_log2(self.q_len()).max(1)
    }

    /// Role of pilot position `t` (any `t`; the pattern has period L).
    #[inline]
    pub fn role(&self, t: usize) -> PilotRole {
        let d = t % self.block_len;
        if d < self.beta {
            return PilotRole::Marker;
        }
        let e = (d - self.beta) % self.beta;
        if e == 0 || e == self.beta - 1 {
            PilotRole::Framing
        } else {
            PilotRole::Data
        }
    }

    /// Pilot position carrying `q[i]`.
    pub fn q_to_p(&self, i: usize) -> usize {
        let per_block = self.data_per_block();
        let (block, r) = (i / per_block, i % per_block);
        let (chunk, j) = (r / (self.beta - 2), r % (self.beta - 2));
        block * self.block_len + self.beta + chunk * self.beta + 1 + j
    }

    /// Index into `q` of the bit carried at pilot position `t`, if it is a data bit.
    pub fn p_to_q(&self, t: usize) -> Option<usize> {
        if self.role(t) != PilotRole::Data {
            return None;
        }
        let (block, d) = (t / self.block_len, t % self.block_len);
        let off = d - self.beta;
        let (chunk, j) = (off / self.beta, off % self.beta - 1);
        Some(block * self.data_per_block() + chunk * (self.beta - 2) + j)
    }
}

pub(crate) fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// The three stages `q → q̄ → p` of the pilot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PilotSequence {
    layout: PilotLayout,
    q: BitString,
    q_bar: BitString,
    p: BitString,
}

impl PilotSequence {
    /// Builds the pilot from a De Bruijn prefix of length `layout.q_len()`.
    pub fn build(layout: PilotLayout) -> Result<Self, ConstraintError> {
        layout.validate()?;
        let q = de_bruijn(layout.window_order(), layout.q_len());
        Self::from_q(q, layout)
    }

    /// Builds the pilot from an explicit `q`.
    pub fn from_q(q: BitString, layout: PilotLayout) -> Result<Self, ConstraintError> {
        layout.validate()?;
        if q.len() != layout.q_len() {
            return Err(ConstraintError::ParamInvalid(format!(
                "q has {} bits, layout needs {}",
                q.len(),
                layout.q_len()
            )));
        }
        let q_bar = rll_tilde_encode(&q, layout.beta)?;
        let slice = layout.block_len - layout.beta;
        let mut p = BitString::with_capacity(layout.pilot_len());
        for t in 0..layout.blocks {
            for _ in 0..layout.beta {
                p.push(false);
            }
            for b in q_bar.slice(t * slice..(t + 1) * slice).iter() {
                p.push(b);
            }
        }
        Ok(Self {
            layout,
            q,
            q_bar,
            p,
        })
    }

    pub fn layout(&self) -> &PilotLayout {
        &self.layout
    }

    pub fn q(&self) -> &BitString {
        &self.q
    }

    pub fn q_bar(&self) -> &BitString {
        &self.q_bar
    }

    pub fn p(&self) -> &BitString {
        &self.p
    }

    pub fn marker_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.layout.blocks).map(|t| t * self.layout.block_len)
    }
}

/// Start positions of every length-β all-zero window of `s` (overlapping
/// windows included).
pub fn find_zero_runs(s: &BitString, beta: usize) -> Vec<usize> {
    assert!(beta >= 1);
    let mut out = Vec::new();
    let mut run = 0usize;
    for (i, b) in s.iter().enumerate() {
        if b {
            run = 0;
        } else {
            run += 1;
            if run >= beta {
                out.push(i + 1 - beta);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn toy_single_block() {
        let layout = PilotLayout::new(4, 8, 1).unwrap();
        let pilot = PilotSequence::from_q(bits("01"), layout).unwrap();
        assert_eq!(pilot.q_bar(), &bits("1011"));
        assert_eq!(pilot.p(), &bits("00001011"));
    }

    #[test]
    fn toy_two_blocks() {
        let layout = PilotLayout::new(4, 8, 2).unwrap();
        let pilot = PilotSequence::from_q(bits("0100"), layout).unwrap();
        assert_eq!(pilot.q_bar(), &bits("10111001"));
        assert_eq!(pilot.p(), &bits("0000101100001001"));
        assert_eq!(find_zero_runs(pilot.p(), 4), vec![0, 8]);
    }

    #[test]
    fn zero_run_examples() {
        assert_eq!(find_zero_runs(&bits("00001011"), 4), vec![0]);
        assert_eq!(find_zero_runs(&bits("000001"), 4), vec![0, 1]);
        assert!(find_zero_runs(&bits("1111"), 2).is_empty());
    }

    #[test]
    fn layout_rejects_bad_geometry() {
        assert!(PilotLayout::new(4, 10, 3).is_err());
        assert!(PilotLayout::new(3, 9, 3).is_err());
        assert!(PilotLayout::new(4, 4, 3).is_err());
        assert!(PilotLayout::new(4, 8, 0).is_err());
        let layout = PilotLayout::new(4, 8, 1).unwrap();
        assert!(PilotSequence::from_q(bits("011"), layout).is_err());
    }

    #[test]
    fn position_maps_invert_each_other() {
        for (beta, l, b) in [(4, 8, 3), (6, 24, 5), (8, 24, 7), (8, 32, 4)] {
            let layout = PilotLayout::new(beta, l, b).unwrap();
            let pilot = PilotSequence::build(layout).unwrap();
            for i in 0..layout.q_len() {
                let t = layout.q_to_p(i);
                assert_eq!(layout.role(t), PilotRole::Data);
                assert_eq!(layout.p_to_q(t), Some(i));
                assert_eq!(pilot.p().get(t), pilot.q().get(i));
            }
            let data = (0..layout.pilot_len()).filter(|&t| layout.role(t) == PilotRole::Data).count();
            assert_eq!(data, layout.q_len());
        }
    }

    #[test]
    fn markers_are_the_only_zero_windows() {
        for beta in [4, 6, 8] {
            for l in [beta * 2, beta * 3, beta * 5] {
                let layout = PilotLayout::new(beta, l, 40).unwrap();
                let pilot = PilotSequence::build(layout).unwrap();
                let slots: Vec<usize> = pilot.marker_slots().collect();
                assert_eq!(find_zero_runs(pilot.p(), beta), slots);
                assert_eq!(pilot.p().len(), layout.pilot_len());
                assert!(pilot.q_bar().max_zero_run() <= beta - 2);
            }
        }
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(43680), 16);
        assert_eq!(ceil_log2(65536), 16);
    }
}
