//! Bit-packed linear algebra over GF(2).
//!
//! Vectors pack bits into 64-bit words, matrices keep one packed vector per
//! row. All elimination routines pivot deterministically (lowest column
//! first, lowest row breaks ties) so that solution vectors are reproducible
//! across platforms and runs.

use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on vector length. Exceeding it is a construction error, not a
/// silent overflow.
pub const MAX_BITS: usize = 1 << 20;

const WORD_BITS: usize = 64;

/// A fixed-length vector over GF(2). Bits beyond `len` are kept zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        assert!(
            len <= MAX_BITS,
            "bit vector length {len} exceeds the {MAX_BITS}-bit limit"
        );
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    /// Vector of `len` bits with ones at the given indices.
    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "bit string may only contain 0 and 1, found {c:?}"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn or_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "or of unequal lengths");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the AND of two vectors (the mod-2 inner product).
    pub fn dot_parity(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of unequal lengths");
        let mut acc = 0u64;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= w & o;
        }
        acc.count_ones() % 2 == 1
    }

    /// True if the two vectors share any set bit (non-modular dot product
    /// being nonzero).
    pub fn intersects(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "intersects of unequal lengths");
        self.words.iter().zip(&other.words).any(|(w, o)| w & o != 0)
    }

    /// Indices of set bits, in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    fn word_count(&self) -> usize {
        self.words.len()
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A dense GF(2) matrix stored row-major as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.push(row);
        self.rows += 1;
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// In-place reduction to reduced row echelon form. Returns the rank.
    pub fn echelonize(&mut self) -> usize {
        let mut ops = 0u64;
        self.echelonize_tracked(&mut ops, &mut Vec::new())
    }

    fn echelonize_tracked(&mut self, ops: &mut u64, pivots: &mut Vec<(usize, usize)>) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| self.data[r].get(col)) else {
                continue;
            };
            self.data.swap(rank, pr);
            let pivot = self.data[rank].clone();
            for r in 0..self.rows {
                if r != rank && self.data[r].get(col) {
                    self.data[r].xor_assign(&pivot);
                    *ops += pivot.word_count() as u64;
                }
            }
            pivots.push((rank, col));
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// GF(2) row rank. The matrix is not mutated.
    pub fn rank(&self) -> usize {
        self.clone().echelonize()
    }

    /// Basis of the left kernel {x : x^T M = 0}. Size equals rows - rank.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let mut m = self.data.clone();
        let mut track: Vec<BitVector> = (0..self.rows)
            .map(|r| BitVector::from_indices(self.rows, &[r]))
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| m[r].get(col)) else {
                continue;
            };
            m.swap(rank, pr);
            track.swap(rank, pr);
            for r in 0..self.rows {
                if r != rank && m[r].get(col) {
                    let (pm, pt) = (m[rank].clone(), track[rank].clone());
                    m[r].xor_assign(&pm);
                    track[r].xor_assign(&pt);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank..self.rows).map(|r| track[r].clone()).collect()
    }

    /// Finds coefficients `lambda` with `sum_j lambda_j * row_j = target`,
    /// if any exist. The choice is deterministic for fixed input: free
    /// coefficients are zero.
    pub fn solve_combination(&self, target: &BitVector) -> Result<Option<BitVector>> {
        if target.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: target.len(),
            });
        }
        let mut m = self.data.clone();
        let mut track: Vec<BitVector> = (0..self.rows)
            .map(|r| BitVector::from_indices(self.rows, &[r]))
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| m[r].get(col)) else {
                continue;
            };
            m.swap(rank, pr);
            track.swap(rank, pr);
            for r in 0..self.rows {
                if r != rank && m[r].get(col) {
                    let (pm, pt) = (m[rank].clone(), track[rank].clone());
                    m[r].xor_assign(&pm);
                    track[r].xor_assign(&pt);
                }
            }
            pivots.push((rank, col));
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        let mut residue = target.clone();
        let mut lambda = BitVector::zeros(self.rows);
        for &(r, c) in &pivots {
            if residue.get(c) {
                residue.xor_assign(&m[r]);
                lambda.xor_assign(&track[r]);
            }
        }
        if residue.is_zero() {
            Ok(Some(lambda))
        } else {
            Ok(None)
        }
    }

    /// Solves `M x = b` for `x` over the columns, returning a solution with
    /// free variables set to zero, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &BitVector) -> Result<Option<BitVector>> {
        let (sol, _ops) = self.solve_counting(rhs)?;
        Ok(sol)
    }

    /// `solve` plus the number of word XOR operations the elimination
    /// performed, for order-of-growth measurements.
    pub fn solve_counting(&self, rhs: &BitVector) -> Result<(Option<BitVector>, u64)> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.len(),
            });
        }
        let mut rows = self.data.clone();
        let mut b = rhs.clone();
        let mut ops = 0u64;
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut rank = 0;
        // Forward elimination only; the witness comes from back-substitution.
        for col in 0..self.cols {
            let Some(pr) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pr);
            let (br, bp) = (b.get(rank), b.get(pr));
            b.set(rank, bp);
            b.set(pr, br);
            let pivot = std::mem::replace(&mut rows[rank], BitVector::zeros(0));
            let pivot_rhs = b.get(rank);
            for (r, row) in rows.iter_mut().enumerate().skip(rank + 1) {
                if row.get(col) {
                    row.xor_assign(&pivot);
                    ops += pivot.word_count() as u64;
                    if pivot_rhs {
                        let flipped = !b.get(r);
                        b.set(r, flipped);
                    }
                }
            }
            rows[rank] = pivot;
            pivots.push((rank, col));
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        // Inconsistent iff a zeroed row still carries its rhs bit.
        for r in rank..rows.len() {
            if b.get(r) {
                return Ok((None, ops));
            }
        }
        let mut x = BitVector::zeros(self.cols);
        for &(r, c) in pivots.iter().rev() {
            let value = b.get(r) ^ rows[r].dot_parity(&x);
            if value {
                x.set(c, true);
            }
        }
        Ok((Some(x), ops))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> BitMatrix {
        BitMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(0.5))
    }

    /// Exhaustive span-size oracle: rank = log2 of the number of distinct
    /// row combinations, computed by incremental closure.
    fn rank_by_span(m: &BitMatrix) -> usize {
        let mut closure = vec![BitVector::zeros(m.cols())];
        for r in 0..m.rows() {
            if !closure.contains(m.row(r)) {
                let snapshot = closure.clone();
                for v in snapshot {
                    let mut w = v;
                    w.xor_assign(m.row(r));
                    closure.push(w);
                }
            }
        }
        assert!(closure.len().is_power_of_two());
        closure.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_identity() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_duplicate_rows() {
        let row = BitVector::from_indices(4, &[0, 2]);
        let m = BitMatrix::from_rows(vec![row.clone(), row]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rank_matches_span_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 20, 12);
            assert_eq!(m.rank(), rank_by_span(&m));
        }
    }

    #[test]
    fn solve_combination_identity_basis() {
        let m = BitMatrix::identity(4);
        let t = BitVector::parse("0101").unwrap();
        let lambda = m.solve_combination(&t).unwrap().unwrap();
        assert_eq!(lambda.to_string(), "0101");
    }

    #[test]
    fn solve_combination_two_row_xor() {
        let m = BitMatrix::from_rows(vec![
            BitVector::parse("110").unwrap(),
            BitVector::parse("011").unwrap(),
        ])
        .unwrap();
        let lambda = m
            .solve_combination(&BitVector::parse("101").unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(lambda.to_string(), "11");
    }

    #[test]
    fn solve_combination_dimension_mismatch() {
        let m = BitMatrix::identity(3);
        let err = m.solve_combination(&BitVector::zeros(4)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn solve_combination_matches_exhaustive() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 6, 10);
            let t = BitVector::from_fn(10, |_| rng.gen_bool(0.5));
            let got = m.solve_combination(&t).unwrap();
            // Exhaustive oracle over all 2^6 combinations.
            let mut any = false;
            for mask in 0u32..64 {
                let mut acc = BitVector::zeros(10);
                for j in 0..6 {
                    if mask >> j & 1 != 0 {
                        acc.xor_assign(m.row(j));
                    }
                }
                if acc == t {
                    any = true;
                    break;
                }
            }
            assert_eq!(got.is_some(), any);
            if let Some(lambda) = got {
                let mut acc = BitVector::zeros(10);
                for j in lambda.ones() {
                    acc.xor_assign(m.row(j));
                }
                assert_eq!(acc, t);
            }
        }
    }

    #[test]
    fn solve_combination_deterministic() {
        let mut rng = StdRng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 8, 8);
        let t = m.row(3).clone();
        let a = m.solve_combination(&t).unwrap();
        let b = m.solve_combination(&t).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_identity_empty() {
        assert!(BitMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_zero_matrix() {
        let m = BitMatrix::zeros(2, 5);
        assert_eq!(m.kernel_basis().len(), 2);
    }

    #[test]
    fn kernel_annihilates_and_counts() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 8, 8);
            let basis = m.kernel_basis();
            assert_eq!(basis.len(), 8 - m.rank());
            for x in &basis {
                let mut acc = BitVector::zeros(8);
                for j in x.ones() {
                    acc.xor_assign(m.row(j));
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn linear_solve_roundtrip_and_inconsistency() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..30 {
            let m = random_matrix(&mut rng, 9, 6);
            let x0 = BitVector::from_fn(6, |_| rng.gen_bool(0.5));
            let b = BitVector::from_fn(9, |r| {
                let mut acc = false;
                for c in 0..6 {
                    acc ^= m.get(r, c) & x0.get(c);
                }
                acc
            });
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            for r in 0..9 {
                let mut acc = false;
                for c in 0..6 {
                    acc ^= m.get(r, c) & x.get(c);
                }
                assert_eq!(acc, b.get(r));
            }
        }
        // A visibly inconsistent system.
        let m = BitMatrix::from_rows(vec![
            BitVector::parse("10").unwrap(),
            BitVector::parse("10").unwrap(),
        ])
        .unwrap();
        let b = BitVector::parse("10").unwrap();
        assert!(m.solve(&b).unwrap().is_none());
    }

    #[test]
    fn packed_matches_naive_bit_by_bit() {
        // Naive single-bit-per-bool elimination as the reference.
        fn naive_rank(m: &BitMatrix) -> usize {
            let mut grid: Vec<Vec<bool>> = (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
                .collect();
            let mut rank = 0;
            for col in 0..m.cols() {
                let Some(pr) = (rank..grid.len()).find(|&r| grid[r][col]) else {
                    continue;
                };
                grid.swap(rank, pr);
                let pivot = grid[rank].clone();
                for (r, row) in grid.iter_mut().enumerate() {
                    if r != rank && row[col] {
                        for (a, b) in row.iter_mut().zip(&pivot) {
                            *a ^= b;
                        }
                    }
                }
                rank += 1;
            }
            rank
        }
        let mut rng = StdRng::seed_from_u64(2024);
        for _ in 0..1000 {
            let rows = rng.gen_range(1..10);
            let cols = rng.gen_range(1..=64);
            let m = random_matrix(&mut rng, rows, cols);
            assert_eq!(m.rank(), naive_rank(&m));
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..12, cols in 1usize..24, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), rows);
        }

        #[test]
        fn xor_self_is_zero(len in 1usize..200, seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let mut v = BitVector::from_fn(len, |_| rng.gen_bool(0.5));
            let w = v.clone();
            v.xor_assign(&w);
            prop_assert!(v.is_zero());
        }
    }
}
