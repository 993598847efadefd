//! Sparse parity-check matrices and LDPC codes with protection classes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// Sparse binary matrix kept as row and column adjacency lists.
///
/// Adjacency lists are sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityCheckMatrix {
    rows: usize,
    cols: usize,
    row_adj: Vec<Vec<u32>>,
    col_adj: Vec<Vec<u32>>,
}

impl ParityCheckMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        ParityCheckMatrix {
            rows,
            cols,
            row_adj: vec![Vec::new(); rows],
            col_adj: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col)` pairs, rejecting duplicates and
    /// out-of-range indices.
    pub fn from_edges<I>(rows: usize, cols: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut h = Self::new(rows, cols);
        for (r, c) in edges {
            if r >= rows || c >= cols {
                return Err(Error::InvalidConfig(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            if !h.insert(r, c) {
                return Err(Error::InvalidConfig(format!("duplicate entry ({r}, {c})")));
            }
        }
        Ok(h)
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[u8]) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must equal rows * cols");
        let mut h = Self::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if data[r * cols + c] != 0 {
                    h.insert(r, c);
                }
            }
        }
        h
    }

    /// Inserts a one; returns false if it was already present.
    pub fn insert(&mut self, row: usize, col: usize) -> bool {
        let list = &mut self.row_adj[row];
        match list.binary_search(&(col as u32)) {
            Ok(_) => false,
            Err(pos) => {
                list.insert(pos, col as u32);
                let clist = &mut self.col_adj[col];
                let cpos = clist.binary_search(&(row as u32)).unwrap_err();
                clist.insert(cpos, row as u32);
                true
            }
        }
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.row_adj[row].binary_search(&(col as u32)).is_ok()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.row_adj[row]
    }

    pub fn col(&self, col: usize) -> &[u32] {
        &self.col_adj[col]
    }

    pub fn row_degree(&self, row: usize) -> usize {
        self.row_adj[row].len()
    }

    pub fn col_degree(&self, col: usize) -> usize {
        self.col_adj[col].len()
    }

    pub fn edge_count(&self) -> usize {
        self.row_adj.iter().map(Vec::len).sum()
    }

    /// True if every parity check is satisfied by `bits`.
    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        self.row_adj
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ bits[c as usize]) == 0)
    }

    /// Number of unsatisfied checks.
    pub fn syndrome_weight(&self, bits: &[u8]) -> usize {
        self.row_adj
            .iter()
            .filter(|row| row.iter().fold(0u8, |acc, &c| acc ^ bits[c as usize]) == 1)
            .count()
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.row_adj.iter().enumerate() {
            for &c in row {
                m.set(r, c as usize, true);
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProtectionClass {
    /// Most protected information bits.
    #[serde(rename = "PC1")]
    Pc1,
    /// Remaining information bits.
    #[serde(rename = "PC2")]
    Pc2,
    /// Redundancy bits.
    #[serde(rename = "PC3")]
    Pc3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub k1: usize,
    pub k2: usize,
    pub r: usize,
}

/// An LDPC code in systematic zigzag layout.
///
/// Columns `0..k` carry information bits. Column `k + j` carries redundancy
/// bit `j`; it has a one on row `j` and no ones above it, so the redundancy
/// part of `H` is unit lower-triangular and encoding is a forward
/// substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdpcCode {
    h: ParityCheckMatrix,
    k: usize,
    classes: Option<Vec<ProtectionClass>>,
    seed: Option<u64>,
}

impl LdpcCode {
    /// Wraps a matrix, checking that it has the zigzag systematic layout.
    pub fn from_matrix(h: ParityCheckMatrix) -> Result<Self> {
        let r = h.rows();
        let n = h.cols();
        if r == 0 || r >= n {
            return Err(Error::NotEncodable(format!("{r} rows for {n} columns")));
        }
        let k = n - r;
        for j in 0..r {
            let col = h.col(k + j);
            if col.first().map(|&f| f as usize) != Some(j) {
                return Err(Error::NotEncodable(format!(
                    "redundancy column {j} must have its first one on row {j}"
                )));
            }
        }
        if let Some(c) = (0..n).find(|&c| h.col_degree(c) == 0) {
            return Err(Error::NotEncodable(format!("column {c} is empty")));
        }
        Ok(LdpcCode {
            h,
            k,
            classes: None,
            seed: None,
        })
    }

    /// Attaches a class map: PC3 exactly on the redundancy columns.
    pub fn with_classes(mut self, classes: Vec<ProtectionClass>) -> Result<Self> {
        if classes.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: classes.len(),
            });
        }
        for (c, &class) in classes.iter().enumerate() {
            if (class == ProtectionClass::Pc3) != (c >= self.k) {
                return Err(Error::InvalidLayout(format!(
                    "column {c} labeled {class:?}; PC3 must be exactly the redundancy columns"
                )));
            }
        }
        self.classes = Some(classes);
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn h(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.h.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n() as f64
    }

    pub fn classes(&self) -> Option<&[ProtectionClass]> {
        self.classes.as_deref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Information columns labeled `class`.
    pub fn columns_in(&self, class: ProtectionClass) -> Vec<usize> {
        match &self.classes {
            Some(classes) => classes
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == class)
                .map(|(i, _)| i)
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn class_counts(&self) -> Option<ClassCounts> {
        self.classes.as_ref().map(|classes| ClassCounts {
            k1: classes.iter().filter(|&&c| c == ProtectionClass::Pc1).count(),
            k2: classes.iter().filter(|&&c| c == ProtectionClass::Pc2).count(),
            r: self.r(),
        })
    }

    /// Column degree histogram over `cols`, as `(degree, count)` ascending.
    pub fn degree_histogram(&self, cols: std::ops::Range<usize>) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for c in cols {
            *hist.entry(self.h.col_degree(c)).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    /// Row degree histogram as `(degree, count)` ascending.
    pub fn check_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for r in 0..self.r() {
            *hist.entry(self.h.row_degree(r)).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    /// SHA-256 of the alist serialization followed by the class map, hex
    /// encoded.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(crate::alist::serialize_alist(self).as_bytes());
        if let Some(classes) = &self.classes {
            for class in classes {
                hasher.update([*class as u8]);
            }
        }
        hex::encode(hasher.finalize())
    }
}
