//! Bit-packed linear algebra over GF(2).
//!
//! Rows of a [`BitMatrix`] are stored contiguously as `u64` words, so a row
//! operation is a word-wide XOR. Elimination picks the first row with a set bit
//! in the current column as pivot; over GF(2) no other tie-breaking matters.

use rand::Rng;
use thiserror::Error;

use crate::bits::{words_for, BitString, WORD_BITS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    /// The erased columns are linearly dependent; more than one completion exists.
    #[error("erased columns are rank deficient: rank {rank} < {unknowns} unknowns")]
    RankDeficient { rank: usize, unknowns: usize },
    /// The known coordinates already violate a parity check that does not
    /// involve any erased coordinate.
    #[error("known coordinates violate the parity checks")]
    Inconsistent,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("erasure position {index} out of range for length {len}")]
    PositionOutOfRange { index: usize, len: usize },
}

/// Sorted set of erased coordinates in `[0, len)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErasurePattern {
    positions: Vec<usize>,
    len: usize,
}

impl ErasurePattern {
    /// Sorts and deduplicates `positions`; every index must be `< len`.
    pub fn new(mut positions: Vec<usize>, len: usize) -> Result<Self, Gf2Error> {
        positions.sort_unstable();
        positions.dedup();
        if let Some(&index) = positions.last() {
            if index >= len {
                return Err(Gf2Error::PositionOutOfRange { index, len });
            }
        }
        Ok(Self { positions, len })
    }

    pub fn empty(len: usize) -> Self {
        Self {
            positions: Vec::new(),
            len,
        }
    }

    pub fn all(len: usize) -> Self {
        Self {
            positions: (0..len).collect(),
            len,
        }
    }

    /// Erasures are the zero bits of a "known" mask.
    pub fn from_known_mask(known: &BitString) -> Self {
        let positions = (0..known.len()).filter(|&i| !known.get(i)).collect();
        Self {
            positions,
            len: known.len(),
        }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Length of the ambient word.
    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn contains(&self, i: usize) -> bool {
        self.positions.binary_search(&i).is_ok()
    }
}

/// Dense GF(2) matrix, row-major, word-packed.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        if self.rows <= 16 && self.cols <= 64 {
            for r in 0..self.rows {
                writeln!(f, "  {}", self.row(r))?;
            }
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Every entry i.i.d. uniform on {0,1}.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(rows, cols);
        for w in &mut m.data {
            *w = rng.gen();
        }
        m.clear_row_tails();
        m
    }

    pub fn from_rows(rows: &[BitString]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, BitString::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Parses rows of `'0'`/`'1'`; convenient in tests.
    pub fn from_str_rows(rows: &[&str]) -> Self {
        let rows: Vec<BitString> = rows.iter().map(|r| crate::bits::bits(r)).collect();
        Self::from_rows(&rows).expect("rows of equal length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitString {
        BitString::from_words(self.row_words(r).to_vec(), self.cols)
    }

    /// `M · x` over GF(2).
    pub fn mul_vec(&self, x: &BitString) -> Result<BitString, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row_words(r)
                    .iter()
                    .zip(x.words())
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 1
            })
            .collect())
    }

    /// Column-selected copy in the order given by `pattern`.
    pub fn submatrix_columns(&self, pattern: &ErasurePattern) -> Result<BitMatrix, Gf2Error> {
        if let Some(&index) = pattern.positions().last() {
            if index >= self.cols {
                return Err(Gf2Error::PositionOutOfRange {
                    index,
                    len: self.cols,
                });
            }
        }
        Ok(self.gather_columns(pattern.positions(), 0))
    }

    /// Copies `cols` into a new matrix with `extra` zero columns appended.
    fn gather_columns(&self, cols: &[usize], extra: usize) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len() + extra);
        for r in 0..self.rows {
            let src = self.row_words(r);
            let dst = out.row_words_mut(r);
            for (j, &c) in cols.iter().enumerate() {
                let bit = (src[c / WORD_BITS] >> (c % WORD_BITS)) & 1;
                dst[j / WORD_BITS] |= bit << (j % WORD_BITS);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Reduced row echelon form in place; returns pivot columns, ascending.
    pub fn rref(&mut self) -> Vec<usize> {
        self.eliminate(true)
    }

    /// Basis of `{v : M·v = 0}` of size `cols − rank`.
    ///
    /// One vector per free column `f` of the RREF: `v[f] = 1`, the other free
    /// coordinates are 0, and the pivot coordinates are read off column `f`.
    pub fn null_space_basis(&self) -> Vec<BitString> {
        self.null_space().basis
    }

    /// Null-space basis together with the free/pivot column split.
    pub fn null_space(&self) -> NullSpace {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = BitString::zeros(self.cols);
                v.set(f, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if m.get(i, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        NullSpace {
            basis,
            free_columns: free,
            pivot_columns: pivots,
        }
    }

    /// Gaussian elimination over all columns. With `full`, also clears entries
    /// above each pivot (RREF). Returns the pivot columns.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            if let Some(p) = self.find_pivot(c, rank) {
                self.swap_rows(p, rank);
                let start = if full { 0 } else { rank + 1 };
                self.clear_column(c, rank, start);
                pivots.push(c);
                rank += 1;
            }
        }
        pivots
    }

    #[inline]
    fn find_pivot(&self, c: usize, from: usize) -> Option<usize> {
        let (w, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
        (from..self.rows).find(|&r| self.data[r * self.stride + w] & mask != 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.stride);
        head[lo * self.stride..(lo + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    /// XORs the pivot row into every row in `start..` (except the pivot) that has
    /// bit `c` set. Words before `c / 64` are zero in the pivot row and are skipped.
    fn clear_column(&mut self, c: usize, pivot: usize, start: usize) {
        let stride = self.stride;
        let (w, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
        let pivot_row: Vec<u64> = self.data[pivot * stride + w..(pivot + 1) * stride].to_vec();
        for r in start..self.rows {
            if r == pivot {
                continue;
            }
            let row = &mut self.data[r * stride + w..(r + 1) * stride];
            if row[0] & mask != 0 {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= b;
                }
            }
        }
    }

    fn clear_row_tails(&mut self) {
        let rem = self.cols % WORD_BITS;
        if rem == 0 || self.stride == 0 {
            return;
        }
        let mask = (1u64 << rem) - 1;
        for r in 0..self.rows {
            self.data[r * self.stride + self.stride - 1] &= mask;
        }
    }
}

/// Output of [`BitMatrix::null_space`].
#[derive(Debug, Clone)]
pub struct NullSpace {
    pub basis: Vec<BitString>,
    pub free_columns: Vec<usize>,
    pub pivot_columns: Vec<usize>,
}

/// Fills the erased coordinates of `word` so that `H · x = 0`.
///
/// Values of `word` at erased positions are ignored. The known part's syndrome
/// becomes the right-hand side of an `rows × |E|` system, which is reduced in
/// erased-column order and solved by back substitution.
pub fn solve_erasures(
    h: &BitMatrix,
    word: &BitString,
    erased: &ErasurePattern,
) -> Result<BitString, Gf2Error> {
    if word.len() != h.cols() {
        return Err(Gf2Error::DimensionMismatch {
            expected: h.cols(),
            got: word.len(),
        });
    }
    if erased.word_len() != h.cols() {
        return Err(Gf2Error::DimensionMismatch {
            expected: h.cols(),
            got: erased.word_len(),
        });
    }
    let positions = erased.positions();
    let t = positions.len();

    let mut known = word.clone();
    for &p in positions {
        known.set(p, false);
    }
    let syndrome = h.mul_vec(&known)?;

    // Augmented system [H_E | s].
    let mut a = h.gather_columns(positions, 1);
    for r in 0..h.rows() {
        if syndrome.get(r) {
            a.set(r, t, true);
        }
    }

    let mut pivot_rows = Vec::with_capacity(t);
    let mut rank = 0;
    let mut deficient = false;
    for c in 0..t {
        match a.find_pivot(c, rank) {
            Some(p) => {
                a.swap_rows(p, rank);
                a.clear_column(c, rank, rank + 1);
                pivot_rows.push((rank, c));
                rank += 1;
            }
            None => deficient = true,
        }
    }
    // Rows below the pivots have no erased-column entries left; a set syndrome
    // bit there is a parity check the known coordinates already fail.
    if (rank..a.rows()).any(|r| a.get(r, t)) {
        return Err(Gf2Error::Inconsistent);
    }
    if deficient {
        return Err(Gf2Error::RankDeficient { rank, unknowns: t });
    }

    // Back substitution: row i reads x_c ⊕ Σ_{c'>c} a[i][c'] x_{c'} = s_i.
    let mut x = BitString::zeros(t + 1);
    for &(r, c) in pivot_rows.iter().rev() {
        let row = a.row_words(r);
        let mut acc = 0u32;
        for (k, (rw, xw)) in row.iter().zip(x.words()).enumerate() {
            let mut m = rw & xw;
            if k == c / WORD_BITS {
                m &= !(1u64 << (c % WORD_BITS));
            }
            acc ^= m.count_ones();
        }
        let v = ((acc & 1) == 1) ^ a.get(r, t);
        x.set(c, v);
    }

    let mut out = known;
    for (j, &p) in positions.iter().enumerate() {
        if x.get(j) {
            out.set(p, true);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h_example() -> BitMatrix {
        BitMatrix::from_str_rows(&["1010", "0111"])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(2, 4).rank(), 0);
        assert_eq!(h_example().rank(), 2);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn exactly_six_invertible_two_by_two() {
        let count = (0u8..16)
            .filter(|&bits4| {
                let mut m = BitMatrix::zeros(2, 2);
                for k in 0..4 {
                    m.set(k / 2, k % 2, (bits4 >> k) & 1 == 1);
                }
                m.rank() == 2
            })
            .count();
        assert_eq!(count, 6);
    }

    #[test]
    fn random_is_seed_deterministic() {
        let a = BitMatrix::random(1, 1, &mut ChaCha8Rng::seed_from_u64(9));
        let b = BitMatrix::random(1, 1, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let big = BitMatrix::random(5, 70, &mut ChaCha8Rng::seed_from_u64(1));
        // tail bits beyond column 70 stay clear
        assert_eq!(big.row_words(0)[1] >> 6, 0);
    }

    #[test]
    fn null_space_of_zero_and_identity() {
        let z = BitMatrix::zeros(2, 3).null_space_basis();
        assert_eq!(z.len(), 3);
        assert_eq!(BitMatrix::from_rows(&z).unwrap().rank(), 3);
        assert!(BitMatrix::identity(3).null_space_basis().is_empty());
    }

    #[test]
    fn null_space_matches_brute_force() {
        let h = h_example();
        let basis = h.null_space_basis();
        assert_eq!(basis.len(), 2);
        // brute force: the kernel has 4 elements, the span of the basis must equal it
        let kernel: Vec<BitString> = (0u8..16)
            .map(|v| (0..4).map(|k| (v >> k) & 1 == 1).collect::<BitString>())
            .filter(|v| h.mul_vec(v).unwrap().count_ones() == 0)
            .collect();
        assert_eq!(kernel.len(), 4);
        for v in &basis {
            assert_eq!(h.mul_vec(v).unwrap().count_ones(), 0);
            assert!(kernel.contains(v));
        }
        assert_eq!(BitMatrix::from_rows(&basis).unwrap().rank(), 2);
    }

    #[test]
    fn submatrix_examples() {
        let h = h_example();
        let e = ErasurePattern::new(vec![1, 2], 4).unwrap();
        assert_eq!(h.submatrix_columns(&e).unwrap(), BitMatrix::from_str_rows(&["01", "11"]));
        assert_eq!(h.submatrix_columns(&ErasurePattern::all(4)).unwrap(), h);
        let empty = h.submatrix_columns(&ErasurePattern::empty(4)).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (2, 0));
        let bad = ErasurePattern::new(vec![7], 8).unwrap();
        assert!(h.submatrix_columns(&bad).is_err());
    }

    #[test]
    fn solve_unique_completion() {
        let h = h_example();
        let e = ErasurePattern::new(vec![1, 2], 4).unwrap();
        let x = solve_erasures(&h, &bits("1000"), &e).unwrap();
        assert_eq!(x, bits("1110"));
    }

    #[test]
    fn solve_without_erasures_returns_word() {
        let h = h_example();
        let cw = bits("1110");
        assert_eq!(solve_erasures(&h, &cw, &ErasurePattern::empty(4)).unwrap(), cw);
        assert_eq!(
            solve_erasures(&h, &bits("1111"), &ErasurePattern::empty(4)),
            Err(Gf2Error::Inconsistent)
        );
    }

    #[test]
    fn solve_identical_columns_is_rank_deficient() {
        let h = BitMatrix::from_str_rows(&["110", "001"]);
        let e = ErasurePattern::new(vec![0, 1], 3).unwrap();
        assert!(matches!(
            solve_erasures(&h, &bits("000"), &e),
            Err(Gf2Error::RankDeficient { rank: 1, unknowns: 2 })
        ));
    }

    #[test]
    fn erasure_pattern_validates() {
        assert!(ErasurePattern::new(vec![3, 1, 3], 4).is_ok_and(|e| e.positions() == [1, 3]));
        assert!(ErasurePattern::new(vec![4], 4).is_err());
    }

    #[test]
    fn solve_random_systems_satisfy_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let h = BitMatrix::random(60, 150, &mut rng);
            let basis = h.null_space_basis();
            let mut cw = BitString::zeros(150);
            for v in &basis {
                if rng.gen::<bool>() {
                    cw.xor_assign(v);
                }
            }
            let erased: Vec<usize> = (0..150).filter(|_| rng.gen_bool(0.3)).collect();
            let e = ErasurePattern::new(erased, 150).unwrap();
            let mut damaged = cw.clone();
            for &p in e.positions() {
                damaged.set(p, rng.gen());
            }
            match solve_erasures(&h, &damaged, &e) {
                Ok(x) => {
                    assert_eq!(x, cw);
                    assert_eq!(h.mul_vec(&x).unwrap().count_ones(), 0);
                }
                Err(Gf2Error::RankDeficient { .. }) => {}
                Err(err) => panic!("unexpected {err}"),
            }
        }
    }
}
