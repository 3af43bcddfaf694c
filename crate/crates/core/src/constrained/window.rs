use std::collections::HashMap;

use super::ConstraintError;
use crate::bits::BitString;

/// Exact map from every length-`w` window of `q` to its start position.
#[derive(Debug, Clone)]
pub struct WindowIndex {
    width: usize,
    map: HashMap<u64, usize>,
}

impl WindowIndex {
    pub fn build(q: &BitString, width: usize) -> Result<Self, ConstraintError> {
        if width == 0 || width > 64 {
            return Err(ConstraintError::ParamInvalid(format!("window width {width} not in 1..=64")));
        }
        let count = (q.len() + 1).saturating_sub(width);
        let mut map = HashMap::with_capacity(count);
        for i in 0..count {
            if let Some(first) = map.insert(q.read_u64(i, width), i) {
                return Err(ConstraintError::DuplicateWindow { first, second: i });
            }
        }
        Ok(Self { width, map })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Start of `window` in `q`; `window` must be exactly `width` bits.
    pub fn lookup(&self, window: &BitString) -> Result<usize, ConstraintError> {
        if window.len() != self.width {
            return Err(ConstraintError::NotFound);
        }
        self.lookup_bits(window.read_u64(0, self.width))
    }

    /// Lookup by packed value (first bit in the LSB).
    pub fn lookup_bits(&self, packed: u64) -> Result<usize, ConstraintError> {
        self.map.get(&packed).copied().ok_or(ConstraintError::NotFound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::constrained::{PilotLayout, PilotSequence};
    use rand::{Rng, SeedableRng};

    #[test]
    fn read_off_small_sequence() {
        let idx = WindowIndex::build(&bits("00010111"), 3).unwrap();
        assert_eq!(idx.len(), 6);
        assert_eq!(idx.lookup(&bits("000")).unwrap(), 0);
        assert_eq!(idx.lookup(&bits("111")).unwrap(), 5);
        assert_eq!(idx.lookup(&bits("110")), Err(ConstraintError::NotFound));
    }

    #[test]
    fn duplicates_are_rejected() {
        assert_eq!(
            WindowIndex::build(&bits("0101"), 2).unwrap_err(),
            ConstraintError::DuplicateWindow { first: 0, second: 2 }
        );
    }

    #[test]
    fn self_consistent_on_built_pilot() {
        let layout = PilotLayout::new(8, 24, 3640).unwrap();
        let pilot = PilotSequence::build(layout).unwrap();
        let w = layout.window_order();
        let idx = WindowIndex::build(pilot.q(), w).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let i = rng.gen_range(0..=pilot.q().len() - w);
            assert_eq!(idx.lookup(&pilot.q().slice(i..i + w)).unwrap(), i);
        }
    }
}
