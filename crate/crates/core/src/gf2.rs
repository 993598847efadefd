//! Dense bit-packed vectors and matrices over GF(2).

/// Dense GF(2) matrix with rows packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Packs a slice of 0/1 bytes into words.
pub fn pack(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

/// Unpacks the first `len` bits of `words`.
pub fn unpack(words: &[u64], len: usize) -> Vec<u8> {
    (0..len).map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8).collect()
}

#[inline]
fn parity_of_and(a: &[u64], b: &[u64]) -> u8 {
    let ones: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
    (ones & 1) as u8
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = words_for(cols);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
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
    pub fn get(&self, row: usize, col: usize) -> bool {
        (self.data[row * self.words + col / 64] >> (col % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        let w = &mut self.data[row * self.words + col / 64];
        if value {
            *w |= 1 << (col % 64);
        } else {
            *w &= !(1 << (col % 64));
        }
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.words..(row + 1) * self.words]
    }

    pub(crate) fn row_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.data[row * self.words..(row + 1) * self.words]
    }

    /// `self · x` for a packed column vector `x`.
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; words_for(self.rows)];
        for i in 0..self.rows {
            if parity_of_and(self.row(i), x) == 1 {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let pivot_row = m.row(rank).to_vec();
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    for (a, b) in m.row_mut(r).iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    /// Solves `self · x = y` for unit lower-triangular `self`.
    pub(crate) fn solve_lower_unit(&self, y: &[u64]) -> Vec<u64> {
        let mut x = vec![0u64; y.len()];
        for i in 0..self.rows {
            // bits above the diagonal of row i are zero, and x[i] is still 0
            let bit = ((y[i / 64] >> (i % 64)) & 1) as u8 ^ parity_of_and(self.row(i), &x);
            x[i / 64] |= (bit as u64) << (i % 64);
        }
        x
    }

    /// Solves `self · x = y` for unit upper-triangular `self`.
    pub(crate) fn solve_upper_unit(&self, y: &[u64]) -> Vec<u64> {
        let mut x = vec![0u64; y.len()];
        for i in (0..self.rows).rev() {
            let bit = ((y[i / 64] >> (i % 64)) & 1) as u8 ^ parity_of_and(self.row(i), &x);
            x[i / 64] |= (bit as u64) << (i % 64);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip() {
        let bits: Vec<u8> = (0..130).map(|i| ((i * 7) % 3 == 0) as u8).collect();
        assert_eq!(unpack(&pack(&bits), bits.len()), bits);
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(BitMatrix::identity(70).rank(), 70);
        let mut m = BitMatrix::zeros(3, 4);
        for (r, c) in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 0), (2, 2)] {
            m.set(r, c, true);
        }
        // row 2 = row 0 + row 1
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn triangular_solves() {
        let mut lower = BitMatrix::identity(5);
        lower.set(3, 1, true);
        lower.set(4, 0, true);
        let x = pack(&[1, 1, 0, 0, 1]);
        let y = lower.mul_vec(&x);
        assert_eq!(lower.solve_lower_unit(&y), x);

        let mut upper = BitMatrix::identity(5);
        upper.set(0, 4, true);
        upper.set(1, 2, true);
        let y = upper.mul_vec(&x);
        assert_eq!(upper.solve_upper_unit(&y), x);
    }
}
