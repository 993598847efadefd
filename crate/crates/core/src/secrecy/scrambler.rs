//! Dense invertible binary scrambler used as an all-or-nothing transform.
//!
//! The matrix is `M = L U` with `L` unit lower-triangular and `U` unit
//! upper-triangular, both with uniformly random off-diagonal bits, so `M`
//! is invertible by construction. Descrambling solves the two triangular
//! systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::{pack, unpack, BitMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scrambler {
    size: usize,
    lower: BitMatrix,
    upper: BitMatrix,
}

impl Scrambler {
    pub fn identity(size: usize) -> Self {
        Scrambler {
            size,
            lower: BitMatrix::identity(size),
            upper: BitMatrix::identity(size),
        }
    }

    pub fn build(size: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lower = BitMatrix::identity(size);
        let mut upper = BitMatrix::identity(size);
        for i in 0..size {
            for j in 0..i {
                if rng.gen::<bool>() {
                    lower.set(i, j, true);
                }
            }
            for j in i + 1..size {
                if rng.gen::<bool>() {
                    upper.set(i, j, true);
                }
            }
        }
        Scrambler { size, lower, upper }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check(&self, bits: &[u8]) -> Result<()> {
        if bits.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                found: bits.len(),
            });
        }
        Ok(())
    }

    /// `M x`.
    pub fn scramble(&self, bits: &[u8]) -> Result<Vec<u8>> {
        self.check(bits)?;
        let x = pack(bits);
        let y = self.lower.mul_vec(&self.upper.mul_vec(&x));
        Ok(unpack(&y, self.size))
    }

    /// `M⁻¹ y`.
    pub fn descramble(&self, bits: &[u8]) -> Result<Vec<u8>> {
        self.check(bits)?;
        let y = pack(bits);
        let z = self.lower.solve_lower_unit(&y);
        Ok(unpack(&self.upper.solve_upper_unit(&z), self.size))
    }

    /// The full matrix `L U`, for inspection.
    pub fn matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.size, self.size);
        for col in 0..self.size {
            let mut e = vec![0u8; self.size];
            e[col] = 1;
            let c = self.scramble(&e).expect("sized");
            for (row, &b) in c.iter().enumerate() {
                m.set(row, col, b == 1);
            }
        }
        m
    }
}
