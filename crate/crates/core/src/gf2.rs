//! Dense linear algebra over GF(2).
//!
//! Rows are packed into `u64` words, least significant bit first. The matrices
//! that show up here are small (at most a few hundred columns), so a plain
//! row-major layout with word-parallel row operations is enough.

use rand::Rng;

use crate::error::{RbError, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD).max(1)
}

/// A packed GF(2) vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = BitVec::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.random();
        }
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << rem) - 1;
        }
        if self.len == 0 {
            self.words[0] = 0;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Number of positions where both vectors are set.
    pub fn and_count(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copy of bits `start..start+len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }
}

/// A dense GF(2) matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = BitMatrix::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Build from row-major 0/1 entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = BitMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(RbError::Shape(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        Ok(m)
    }

    pub fn from_columns(cols: &[BitVec]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, BitVec::len);
        let mut m = BitMatrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..r {
                if col.get(i) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn set_column(&mut self, c: usize, v: &BitVec) {
        debug_assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self.set(r, c, v.get(r));
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(RbError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    out.data[r].xor_assign(&other.data[k]);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if self.cols != v.len() {
            return Err(RbError::Shape(format!(
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.data[r].dot(v) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_reduce().len()
    }

    /// In-place reduced row echelon form. Returns the pivot columns in order.
    fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.data.swap(next, p);
            let pivot_row = self.data[next].clone();
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.data[r].xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, true);
        }
        let pivots = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = BitMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// Draw a uniformly random solution `x` of `self * x = rhs`.
    ///
    /// Free variables of the reduced system are filled with independent fair
    /// bits, so every solution is returned with equal probability. Returns
    /// `None` when the system is inconsistent.
    pub fn solve_random<R: Rng + ?Sized>(&self, rhs: &BitVec, rng: &mut R) -> Option<BitVec> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let n = self.cols;
        let mut aug = BitMatrix::zeros(self.rows, n + 1);
        for r in 0..self.rows {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n, rhs.get(r));
        }
        let pivots = aug.row_reduce();
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut x = BitVec::zeros(n);
        for c in (0..n).filter(|&c| !is_pivot[c]) {
            x.set(c, rng.random::<bool>());
        }
        // Row i of the RREF reads x[pivot_i] + sum_{free c} a_ic x_c = b_i.
        for (i, &p) in pivots.iter().enumerate() {
            let mut v = aug.get(i, n);
            for c in (p + 1)..n {
                if !is_pivot[c] && aug.get(i, c) && x.get(c) {
                    v = !v;
                }
            }
            x.set(p, v);
        }
        Some(x)
    }
}
