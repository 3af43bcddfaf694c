use crate::bits::BitString;

/// Prefix of length `target_len` of the linearized binary De Bruijn sequence of
/// order `order`.
///
/// The cycle is the concatenation, in lexicographic order, of the binary Lyndon
/// words whose length divides `order` (generated with Duval's successor rule).
/// Appending its first `order − 1` bits linearizes it, so every length-`order`
/// window of the result is distinct. Panics if `target_len > 2^order + order − 1`.
pub fn de_bruijn(order: usize, target_len: usize) -> BitString {
    assert!((1..48).contains(&order), "unsupported De Bruijn order {order}");
    let cycle_len = 1usize << order;
    assert!(
        target_len < cycle_len + order,
        "target length {target_len} exceeds linearized order-{order} sequence"
    );
    let mut out = BitString::with_capacity(target_len);
    let mut word: Vec<u8> = vec![0];
    'gen: loop {
        let m = word.len();
        if order % m == 0 {
            for &b in &word {
                if out.len() == target_len {
                    break 'gen;
                }
                out.push(b == 1);
            }
        }
        while word.len() < order {
            word.push(word[word.len() - m]);
        }
        while word.last() == Some(&1) {
            word.pop();
        }
        match word.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    let mut k = 0;
    while out.len() < target_len {
        let b = out.get(k);
        out.push(b);
        k += 1;
    }
    out
}
