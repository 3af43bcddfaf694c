//! Fixed-length RLL block codes built by inserting framing ones.
//!
//! `rll_encode(·, k)` appends a 1 to every (k−1)-bit block: RLL(0, k−1), rate
//! (k−1)/k. `rll_tilde_encode(·, k)` wraps every (k−2)-bit block as `1‖v‖1`:
//! RLL(0, k−2), rate (k−2)/k, and every k-block starts and ends with 1.
//! Neither encoder pads; inputs must split into whole blocks.

use super::ConstraintError;
use crate::bits::BitString;

fn check_divides(len: usize, block: usize, what: &str) -> Result<(), ConstraintError> {
    if block == 0 || len % block != 0 {
        return Err(ConstraintError::ParamInvalid(format!(
            "{what}: length {len} is not a multiple of block size {block}"
        )));
    }
    Ok(())
}

pub fn rll_encode(v: &BitString, k: usize) -> Result<BitString, ConstraintError> {
    if k < 2 {
        return Err(ConstraintError::ParamInvalid(format!("RLL block length k={k} < 2")));
    }
    check_divides(v.len(), k - 1, "rll_encode")?;
    let mut out = BitString::with_capacity(v.len() / (k - 1) * k);
    for (i, b) in v.iter().enumerate() {
        out.push(b);
        if i % (k - 1) == k - 2 {
            out.push(true);
        }
    }
    Ok(out)
}

pub fn rll_decode(x: &BitString, k: usize) -> Result<BitString, ConstraintError> {
    if k < 2 {
        return Err(ConstraintError::ParamInvalid(format!("RLL block length k={k} < 2")));
    }
    check_divides(x.len(), k, "rll_decode")?;
    let mut out = BitString::with_capacity(x.len() / k * (k - 1));
    for (i, b) in x.iter().enumerate() {
        if i % k == k - 1 {
            if !b {
                return Err(ConstraintError::MalformedRll { position: i });
            }
        } else {
            out.push(b);
        }
    }
    Ok(out)
}

pub fn rll_tilde_encode(v: &BitString, k: usize) -> Result<BitString, ConstraintError> {
    if k < 3 {
        return Err(ConstraintError::ParamInvalid(format!("R̃LL block length k={k} < 3")));
    }
    check_divides(v.len(), k - 2, "rll_tilde_encode")?;
    let mut out = BitString::with_capacity(v.len() / (k - 2) * k);
    for (i, b) in v.iter().enumerate() {
        if i % (k - 2) == 0 {
            out.push(true);
        }
        out.push(b);
        if i % (k - 2) == k - 3 {
            out.push(true);
        }
    }
    Ok(out)
}

pub fn rll_tilde_decode(x: &BitString, k: usize) -> Result<BitString, ConstraintError> {
    if k < 3 {
        return Err(ConstraintError::ParamInvalid(format!("R̃LL block length k={k} < 3")));
    }
    check_divides(x.len(), k, "rll_tilde_decode")?;
    let mut out = BitString::with_capacity(x.len() / k * (k - 2));
    for (i, b) in x.iter().enumerate() {
        let j = i % k;
        if j == 0 || j == k - 1 {
            if !b {
                return Err(ConstraintError::MalformedRll { position: i });
            }
        } else {
            out.push(b);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use proptest::prelude::*;

    #[test]
    fn rll_examples() {
        assert_eq!(rll_encode(&bits("101000"), 4).unwrap(), bits("10110001"));
        assert_eq!(rll_decode(&bits("10110001"), 4).unwrap(), bits("101000"));
        let z = rll_encode(&BitString::zeros(6), 4).unwrap();
        assert_eq!(z, bits("00010001"));
        assert_eq!(z.max_zero_run(), 3);
    }

    #[test]
    fn rll_tilde_examples() {
        assert_eq!(rll_tilde_encode(&bits("0010"), 4).unwrap(), bits("10011101"));
        assert_eq!(rll_tilde_decode(&bits("10011101"), 4).unwrap(), bits("0010"));
        let z = rll_tilde_encode(&bits("00"), 4).unwrap();
        assert_eq!(z, bits("1001"));
        assert_eq!(z.max_zero_run(), 2);
    }

    #[test]
    fn malformed_and_misaligned_inputs() {
        assert_eq!(
            rll_decode(&bits("10100001"), 4),
            Err(ConstraintError::MalformedRll { position: 3 })
        );
        assert_eq!(
            rll_tilde_decode(&bits("10011100"), 4),
            Err(ConstraintError::MalformedRll { position: 7 })
        );
        assert!(matches!(rll_encode(&bits("10100"), 4), Err(ConstraintError::ParamInvalid(_))));
        assert!(matches!(rll_tilde_encode(&bits("101"), 4), Err(ConstraintError::ParamInvalid(_))));
        assert!(matches!(rll_decode(&bits("101"), 4), Err(ConstraintError::ParamInvalid(_))));
    }

    proptest! {
        #[test]
        fn rll_round_trip(k in 2usize..10, blocks in 0usize..40, seed in any::<u64>()) {
            let v: BitString = (0..blocks * (k - 1)).map(|i| (seed >> (i % 64)) & 1 == 1 || i % 7 == 3).collect();
            let x = rll_encode(&v, k).unwrap();
            prop_assert_eq!(x.len() * (k - 1), v.len() * k);
            prop_assert!(x.max_zero_run() < k);
            prop_assert_eq!(rll_decode(&x, k).unwrap(), v);
        }

        #[test]
        fn rll_tilde_round_trip(k in 3usize..10, v in proptest::collection::vec(any::<bool>(), 0..20)) {
            let blocks = v.len() / (k - 2);
            let v = BitString::from_bools(&v[..blocks * (k - 2)]);
            let x = rll_tilde_encode(&v, k).unwrap();
            prop_assert_eq!(x.len() * (k - 2), v.len() * k);
            prop_assert!(x.max_zero_run() < k - 1);
            prop_assert_eq!(rll_tilde_decode(&x, k).unwrap(), v);
        }
    }
}
