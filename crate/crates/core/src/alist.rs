//! MacKay alist serialization, plus the JSON sidecar carrying class maps.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! col degrees (n values)
//! row degrees (m values)
//! n lines: 1-indexed rows of each column, zero padded to max_col_degree
//! m lines: 1-indexed columns of each row, zero padded to max_row_degree
//! ```
//!
//! Parsing accepts lists with or without zero padding.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::code::{LdpcCode, ParityCheckMatrix, ProtectionClass};
use crate::degree_dist::EnsembleSpec;
use crate::error::{Error, Result};

pub fn serialize_alist(code: &LdpcCode) -> String {
    serialize_matrix(code.h())
}

pub fn serialize_matrix(h: &ParityCheckMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let max_col = (0..n).map(|c| h.col_degree(c)).max().unwrap_or(0);
    let max_row = (0..m).map(|r| h.row_degree(r)).max().unwrap_or(0);
    let mut out = String::new();
    writeln!(out, "{n} {m}").unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    let join = |it: &mut dyn Iterator<Item = usize>| it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "{}", join(&mut (0..n).map(|c| h.col_degree(c)))).unwrap();
    writeln!(out, "{}", join(&mut (0..m).map(|r| h.row_degree(r)))).unwrap();
    for c in 0..n {
        let list = h.col(c);
        let mut it = list.iter().map(|&r| r as usize + 1).chain(std::iter::repeat(0).take(max_col - list.len()));
        writeln!(out, "{}", join(&mut it)).unwrap();
    }
    for r in 0..m {
        let list = h.row(r);
        let mut it = list.iter().map(|&c| c as usize + 1).chain(std::iter::repeat(0).take(max_row - list.len()));
        writeln!(out, "{}", join(&mut it)).unwrap();
    }
    out
}

/// Parses an alist into a bare matrix.
pub fn parse_matrix(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut next_numbers = |what: &str| -> Result<(usize, Vec<usize>)> {
        let (idx, line) = lines.next().ok_or(Error::Alist {
            line: 0,
            reason: format!("missing {what}"),
        })?;
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Alist {
                line: idx + 1,
                reason: format!("{what}: {e}"),
            })?;
        Ok((idx + 1, nums))
    };
    let bad = |line: usize, reason: String| Error::Alist { line, reason };

    let (l, dims) = next_numbers("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(bad(l, "expected `n m`".into()));
    };
    let (l, maxes) = next_numbers("maximum degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(bad(l, "expected `max_col max_row`".into()));
    };
    let (l, col_degrees) = next_numbers("column degrees")?;
    if col_degrees.len() != n {
        return Err(bad(l, format!("{} column degrees for n = {n}", col_degrees.len())));
    }
    let (l, row_degrees) = next_numbers("row degrees")?;
    if row_degrees.len() != m {
        return Err(bad(l, format!("{} row degrees for m = {m}", row_degrees.len())));
    }
    if col_degrees.iter().any(|&d| d > max_col) || row_degrees.iter().any(|&d| d > max_row) {
        return Err(bad(l, "degree exceeds declared maximum".into()));
    }
    if col_degrees.iter().sum::<usize>() != row_degrees.iter().sum::<usize>() {
        return Err(bad(l, "column and row degrees disagree on the edge count".into()));
    }

    let mut h = ParityCheckMatrix::new(m, n);
    for (c, &degree) in col_degrees.iter().enumerate() {
        let (l, list) = next_numbers("column list")?;
        let entries: Vec<usize> = list.into_iter().filter(|&v| v != 0).collect();
        if entries.len() != degree {
            return Err(bad(l, format!("column {} lists {} rows, degree {degree}", c + 1, entries.len())));
        }
        for r in entries {
            if r > m {
                return Err(bad(l, format!("row index {r} exceeds m = {m}")));
            }
            if !h.insert(r - 1, c) {
                return Err(bad(l, format!("duplicate row index {r}")));
            }
        }
    }
    for (r, &degree) in row_degrees.iter().enumerate() {
        let (l, list) = next_numbers("row list")?;
        let entries: Vec<usize> = list.into_iter().filter(|&v| v != 0).collect();
        if entries.len() != degree {
            return Err(bad(l, format!("row {} lists {} columns, degree {degree}", r + 1, entries.len())));
        }
        let mut cols = Vec::with_capacity(degree);
        for c in entries {
            if c > n {
                return Err(bad(l, format!("column index {c} exceeds n = {n}")));
            }
            cols.push(c as u32 - 1);
        }
        cols.sort_unstable();
        if cols != h.row(r) {
            return Err(bad(l, format!("row {} disagrees with the column lists", r + 1)));
        }
    }
    Ok(h)
}

/// Parses an alist into a code without class information.
pub fn parse_alist(text: &str) -> Result<LdpcCode> {
    LdpcCode::from_matrix(parse_matrix(text)?)
}

/// Metadata stored next to an alist file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub class_map: Vec<ProtectionClass>,
    pub seed: Option<u64>,
    pub spec: Option<EnsembleSpec>,
    /// Fingerprint of the code this sidecar belongs to.
    pub code_hash: String,
}

impl Sidecar {
    pub fn for_code(code: &LdpcCode, spec: Option<EnsembleSpec>) -> Result<Self> {
        let class_map = code
            .classes()
            .ok_or_else(|| Error::InvalidLayout("code has no class map".into()))?
            .to_vec();
        Ok(Sidecar {
            class_map,
            seed: code.seed(),
            spec,
            code_hash: code.fingerprint(),
        })
    }

    /// Rebuilds the full code from an alist and this sidecar.
    pub fn attach(&self, alist: &str) -> Result<LdpcCode> {
        let mut code = parse_alist(alist)?.with_classes(self.class_map.clone())?;
        if let Some(seed) = self.seed {
            code = code.with_seed(seed);
        }
        if code.fingerprint() != self.code_hash {
            return Err(Error::InvalidLayout("sidecar hash does not match the alist".into()));
        }
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "4 2
2 3
1 2 2 1
3 3
1 0
1 2
1 2
2 0
1 2 3
2 3 4
";

    #[test]
    fn parses_hand_written_fixture() {
        let h = parse_matrix(FIXTURE).unwrap();
        assert_eq!((h.rows(), h.cols()), (2, 4));
        assert_eq!(h.row(0), &[0, 1, 2]);
        assert_eq!(h.row(1), &[1, 2, 3]);
        let code = LdpcCode::from_matrix(h).unwrap();
        assert_eq!(code.k(), 2);
    }

    #[test]
    fn serialize_matches_fixture() {
        let h = parse_matrix(FIXTURE).unwrap();
        assert_eq!(serialize_matrix(&h), FIXTURE);
    }

    #[test]
    fn accepts_unpadded_lists() {
        let unpadded = "4 2\n2 3\n1 2 2 1\n3 3\n1\n1 2\n1 2\n2\n1 2 3\n2 3 4\n";
        assert_eq!(parse_matrix(unpadded).unwrap(), parse_matrix(FIXTURE).unwrap());
    }

    #[test]
    fn rejects_out_of_range_column() {
        let text = FIXTURE.replace("2 3 4\n", "2 3 5\n");
        assert!(matches!(parse_matrix(&text), Err(Error::Alist { line: 10, .. })));
    }

    #[test]
    fn rejects_out_of_range_row_and_bad_counts() {
        let text = FIXTURE.replace("2 0\n", "3 0\n");
        assert!(matches!(parse_matrix(&text), Err(Error::Alist { .. })));
        let text = FIXTURE.replacen("1 2 2 1", "1 2 2", 1);
        assert!(matches!(parse_matrix(&text), Err(Error::Alist { line: 3, .. })));
        assert!(matches!(parse_matrix("4 x\n"), Err(Error::Alist { line: 1, .. })));
        assert!(parse_matrix("").is_err());
    }
}
