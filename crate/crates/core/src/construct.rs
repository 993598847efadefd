//! Zigzag-random parity-check matrix construction.
//!
//! The redundancy part is a dual-diagonal (zigzag) staircase: redundancy
//! column `j` has ones on rows `j` and `j + 1`, the last one only on row
//! `r - 1`. Redundancy columns whose target degree exceeds two receive their
//! extra ones strictly below the staircase, which keeps the redundancy part
//! lower-triangular. Information columns are then connected to check
//! sockets either by progressive edge growth or by uniform random socket
//! matching. Progressive edge growth picks the check farthest from the
//! column, ties going to the lowest current check degree and then the lowest
//! index; the search stops at depth `2 · min_girth` when a girth is required.
//! Its check degrees follow from that tie-break alone.
//!
//! Node counts come from largest-remainder apportionment of `n ν_i` over all
//! `n` columns. The `r` lowest degrees go to the redundancy columns and the
//! rest to the information columns, highest degree first (column 0 has the
//! highest degree). Random matching fills check sockets drawn from the
//! integerized check distribution, adjusted so that sockets and edges balance
//! exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{LdpcCode, ParityCheckMatrix, ProtectionClass};
use crate::degree_dist::{integer_counts, EnsembleSpec};
use crate::error::{Error, Result};

/// Strategy used to connect edges to check nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Progressive edge growth: maximize the local tree depth.
    #[default]
    Peg,
    /// Uniform random matching of free check sockets.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ClassAssignment {
    /// PC1 gets the given fraction of the information columns, highest degree first.
    Uep { pc1_fraction: f64 },
    /// All information columns get the same class (two-code scheme).
    Uniform { class: ProtectionClass },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildOptions {
    pub placement: Placement,
    /// Minimum girth required; 0 disables the check.
    pub min_girth: u32,
    /// Re-seeds attempted before giving up.
    pub retries: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            placement: Placement::Peg,
            min_girth: 0,
            retries: 32,
        }
    }
}

/// Seed used for the given retry of a construction.
pub fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    if attempt == 0 {
        return seed;
    }
    // splitmix64 finalizer
    let mut z = seed.wrapping_add((attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Builds a code for `spec` and labels its columns.
///
/// Identical arguments always give the identical code.
pub fn build_zigzag_random(
    spec: &EnsembleSpec,
    classes: ClassAssignment,
    seed: u64,
    options: &BuildOptions,
) -> Result<LdpcCode> {
    if let ClassAssignment::Uep { pc1_fraction } = classes {
        check_fraction(pc1_fraction)?;
    }
    let mut seeds = Vec::new();
    let mut last_reason = String::new();
    for attempt in 0..=options.retries {
        let s = attempt_seed(seed, attempt);
        seeds.push(s);
        let h = place_edges(spec, s, options)?;
        // the staircase makes H full rank; from_matrix re-checks the layout
        let code = LdpcCode::from_matrix(h)?.with_seed(s);
        if options.min_girth > 0 {
            let g = girth(code.h());
            if g != 0 && g < options.min_girth {
                last_reason = format!("girth {g} below {}", options.min_girth);
                continue;
            }
        }
        let class_map = match classes {
            ClassAssignment::Uep { pc1_fraction } => assign_protection_classes(&code, pc1_fraction)?,
            ClassAssignment::Uniform { class } => uniform_classes(&code, class)?,
        };
        return code.with_classes(class_map);
    }
    Err(Error::ConstructionFailed {
        attempts: seeds.len(),
        seeds,
        reason: last_reason,
    })
}

fn check_fraction(f: f64) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidFraction(f))
    }
}

struct Placer {
    h: ParityCheckMatrix,
    target: Vec<usize>,
    rng: ChaCha8Rng,
    // BFS scratch, stamped to avoid clearing
    row_stamp: Vec<u32>,
    col_stamp: Vec<u32>,
    row_dist: Vec<u32>,
    stamp: u32,
    max_depth: u32,
}

impl Placer {
    fn free(&self, row: usize) -> usize {
        self.target[row].saturating_sub(self.h.row_degree(row))
    }

    /// Depth at which each row is first reached from `col`, searching at
    /// most `max_depth` levels; unreached rows read as `u32::MAX`.
    fn bfs(&mut self, col: usize) {
        self.stamp += 1;
        let stamp = self.stamp;
        let mut frontier: Vec<usize> = Vec::new();
        self.col_stamp[col] = stamp;
        for &r in self.h.col(col) {
            self.row_stamp[r as usize] = stamp;
            self.row_dist[r as usize] = 0;
            frontier.push(r as usize);
        }
        let mut depth = 0;
        let mut next = Vec::new();
        while !frontier.is_empty() && depth < self.max_depth {
            depth += 1;
            next.clear();
            for &r in &frontier {
                for &c in self.h.row(r) {
                    let c = c as usize;
                    if self.col_stamp[c] == stamp {
                        continue;
                    }
                    self.col_stamp[c] = stamp;
                    for &r2 in self.h.col(c) {
                        let r2 = r2 as usize;
                        if self.row_stamp[r2] != stamp {
                            self.row_stamp[r2] = stamp;
                            self.row_dist[r2] = depth;
                            next.push(r2);
                        }
                    }
                }
            }
            std::mem::swap(&mut frontier, &mut next);
        }
    }

    fn distance(&self, row: usize) -> u32 {
        if self.row_stamp[row] == self.stamp {
            self.row_dist[row]
        } else {
            u32::MAX
        }
    }

    fn connect(&mut self, col: usize, rows: std::ops::Range<usize>, placement: Placement) -> Result<()> {
        let candidates: Vec<usize> = rows.filter(|&r| !self.h.contains(r, col)).collect();
        if candidates.is_empty() {
            return Err(Error::Unsatisfiable(format!("column {col} has no check left to connect")));
        }
        let row = match placement {
            Placement::Peg => {
                self.bfs(col);
                // deepest row first, then lowest current degree, then lowest index
                candidates
                    .iter()
                    .copied()
                    .min_by_key(|&r| (std::cmp::Reverse(self.distance(r)), self.h.row_degree(r), r))
                    .expect("non-empty")
            }
            Placement::Random => {
                let with_room: Vec<usize> = candidates.iter().copied().filter(|&r| self.free(r) > 0).collect();
                if with_room.is_empty() {
                    let least = candidates.iter().map(|&r| self.h.row_degree(r)).min().expect("non-empty");
                    let ties: Vec<usize> =
                        candidates.into_iter().filter(|&r| self.h.row_degree(r) == least).collect();
                    *ties.choose(&mut self.rng).expect("non-empty")
                } else {
                    let total: usize = with_room.iter().map(|&r| self.free(r)).sum();
                    let mut pick = self.rng.gen_range(0..total);
                    let mut chosen = with_room[0];
                    for &r in &with_room {
                        let f = self.free(r);
                        if pick < f {
                            chosen = r;
                            break;
                        }
                        pick -= f;
                    }
                    chosen
                }
            }
        };
        self.h.insert(row, col);
        Ok(())
    }
}

fn place_edges(spec: &EnsembleSpec, seed: u64, options: &BuildOptions) -> Result<ParityCheckMatrix> {
    let placement = options.placement;
    let (n, k, r) = (spec.n, spec.k(), spec.r());
    let mut degrees: Vec<usize> = Vec::with_capacity(n);
    for (d, count) in integer_counts(&spec.variable, n)? {
        degrees.extend(std::iter::repeat(d as usize).take(count));
    }
    if degrees[0] < 2 {
        return Err(Error::Unsatisfiable("variable degree below 2".into()));
    }
    if let Some(&d) = degrees.last().filter(|&&d| d > r) {
        return Err(Error::Unsatisfiable(format!("variable degree {d} exceeds {r} checks")));
    }
    // ascending: lowest r degrees to redundancy, assigned high-to-low along the staircase
    let mut redundancy: Vec<usize> = degrees[..r].to_vec();
    redundancy.reverse();
    let mut info: Vec<usize> = degrees[r..].to_vec();
    info.reverse();

    let extras: Vec<usize> = (0..r)
        .map(|j| {
            let room = r.saturating_sub(j + 2);
            redundancy[j].saturating_sub(2).min(room)
        })
        .collect();
    let redundancy_edges: usize = (0..r).map(|j| if j + 1 < r { 2 } else { 1 } + extras[j]).sum();
    let edges = info.iter().sum::<usize>() + redundancy_edges;

    // check degrees balanced against the realized edge count
    let mut check: Vec<usize> = Vec::with_capacity(r);
    for (d, count) in integer_counts(&spec.check, r)? {
        check.extend(std::iter::repeat(d as usize).take(count));
    }
    let mut sockets: usize = check.iter().sum();
    while sockets < edges {
        let i = (0..r).min_by_key(|&i| (check[i], i)).expect("r > 0");
        check[i] += 1;
        sockets += 1;
    }
    while sockets > edges {
        let i = (0..r).max_by_key(|&i| (check[i], std::cmp::Reverse(i))).expect("r > 0");
        check[i] -= 1;
        sockets -= 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    check.shuffle(&mut rng);

    let mut h = ParityCheckMatrix::new(r, n);
    for j in 0..r {
        h.insert(j, k + j);
        if j + 1 < r {
            h.insert(j + 1, k + j);
        }
    }
    let mut placer = Placer {
        h,
        target: check,
        rng,
        row_stamp: vec![0; r],
        col_stamp: vec![0; n],
        row_dist: vec![0; r],
        stamp: 0,
        max_depth: if options.min_girth > 0 { 2 * options.min_girth } else { u32::MAX },
    };
    for (j, &extra) in extras.iter().enumerate() {
        for _ in 0..extra {
            placer.connect(k + j, j + 2..r, placement)?;
        }
    }
    for (c, &degree) in info.iter().enumerate() {
        for _ in 0..degree {
            placer.connect(c, 0..r, placement)?;
        }
    }
    Ok(placer.h)
}

/// PC1 = the `k1` information columns of highest degree (ties by ascending
/// index), PC2 = the other information columns, PC3 = redundancy.
///
/// `k1 = round(k1_fraction · k)`, moved by at most one column when that lands
/// exactly on a degree boundary so that PC1 holds whole degree classes.
pub fn assign_protection_classes(code: &LdpcCode, k1_fraction: f64) -> Result<Vec<ProtectionClass>> {
    check_fraction(k1_fraction)?;
    let k = code.k();
    if k < 2 {
        return Err(Error::InvalidLayout("need at least two information bits".into()));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(code.h().col_degree(c)), c));

    let target = ((k1_fraction * k as f64).round() as usize).clamp(1, k - 1);
    let degree_at = |i: usize| code.h().col_degree(order[i]);
    let is_boundary = |b: usize| b > 0 && b < k && degree_at(b - 1) != degree_at(b);
    let k1 = [target, target + 1, target - 1]
        .into_iter()
        .filter(|&b| b >= 1 && b < k)
        .find(|&b| is_boundary(b))
        .unwrap_or(target);

    let mut classes = vec![ProtectionClass::Pc3; code.n()];
    for (rank, &c) in order.iter().enumerate() {
        classes[c] = if rank < k1 { ProtectionClass::Pc1 } else { ProtectionClass::Pc2 };
    }
    Ok(classes)
}

/// Labels every information column with `class`.
pub fn uniform_classes(code: &LdpcCode, class: ProtectionClass) -> Result<Vec<ProtectionClass>> {
    if class == ProtectionClass::Pc3 {
        return Err(Error::InvalidLayout("information columns cannot be PC3".into()));
    }
    Ok((0..code.n()).map(|c| if c < code.k() { class } else { ProtectionClass::Pc3 }).collect())
}

/// Length of the shortest cycle of the Tanner graph, 0 if there is none.
pub fn girth(h: &ParityCheckMatrix) -> u32 {
    girth_through(h, 0..h.cols())
}

/// Length of the shortest cycle through any of `cols`, 0 if there is none.
pub fn girth_through(h: &ParityCheckMatrix, cols: impl IntoIterator<Item = usize>) -> u32 {
    let n = h.cols();
    let total = n + h.rows();
    // node ids: columns 0..n, rows n..n+m
    let mut dist = vec![u32::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut best = u32::MAX;
    for root in cols {
        for &t in &touched {
            dist[t] = u32::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        let mut queue = std::collections::VecDeque::new();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 2 >= best {
                break;
            }
            let neighbours: Box<dyn Iterator<Item = usize>> = if u < n {
                Box::new(h.col(u).iter().map(|&r| n + r as usize))
            } else {
                Box::new(h.row(u - n).iter().map(|&c| c as usize))
            };
            for w in neighbours {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == u32::MAX {
        0
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_dist::{DegreePolynomial, NodeKind, Perspective};

    fn regular_spec(n: usize) -> EnsembleSpec {
        let nu = DegreePolynomial::regular(Perspective::Node, NodeKind::Variable, 3).unwrap();
        EnsembleSpec::with_concentrated_checks(n, 0.5, nu).unwrap()
    }

    #[test]
    fn girth_of_small_graphs() {
        let square = ParityCheckMatrix::from_dense(2, 2, &[1, 1, 1, 1]);
        assert_eq!(girth(&square), 4);
        let forest = ParityCheckMatrix::from_dense(2, 1, &[1, 1]);
        assert_eq!(girth(&forest), 0);
        // 6-cycle: c0-r0-c1-r1-c2-r2-c0
        let hexagon = ParityCheckMatrix::from_dense(3, 3, &[1, 1, 0, 0, 1, 1, 1, 0, 1]);
        assert_eq!(girth(&hexagon), 6);
    }

    #[test]
    fn regular_fixture_shape() {
        let code =
            build_zigzag_random(&regular_spec(16), ClassAssignment::Uep { pc1_fraction: 0.25 }, 7, &BuildOptions::default())
                .unwrap();
        assert_eq!((code.r(), code.n()), (8, 16));
        assert!((0..8).all(|c| code.h().col_degree(c) == 3));
        // 8 x 3 info edges, 7 x 2 + 1 staircase edges, and one extra edge on
        // each of the six redundancy columns with room below the staircase
        assert_eq!(code.h().edge_count(), 45);
        assert_eq!(code.h().to_dense().rank(), 8);
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        let spec = regular_spec(64);
        let classes = ClassAssignment::Uep { pc1_fraction: 0.2 };
        let random = BuildOptions {
            placement: Placement::Random,
            ..Default::default()
        };
        let a = build_zigzag_random(&spec, classes, 1, &random).unwrap();
        let b = build_zigzag_random(&spec, classes, 1, &random).unwrap();
        let c = build_zigzag_random(&spec, classes, 2, &random).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.h(), c.h());
        let peg = BuildOptions::default();
        let p1 = build_zigzag_random(&spec, classes, 1, &peg).unwrap();
        let p2 = build_zigzag_random(&spec, classes, 2, &peg).unwrap();
        assert_eq!(p1.h(), p2.h());
    }

    #[test]
    fn random_placement_matches_degrees() {
        let spec = regular_spec(128);
        let opts = BuildOptions {
            placement: Placement::Random,
            ..Default::default()
        };
        let code = build_zigzag_random(&spec, ClassAssignment::Uep { pc1_fraction: 0.2 }, 3, &opts).unwrap();
        assert!((0..code.k()).all(|c| code.h().col_degree(c) == 3));
        let degrees: Vec<usize> = (0..code.r()).map(|r| code.h().row_degree(r)).collect();
        let (lo, hi) = (degrees.iter().min().unwrap(), degrees.iter().max().unwrap());
        // late sockets may spill into a full row when every row with room is taken
        assert!(hi - lo <= 2, "row degrees {lo}..{hi}");
        assert_eq!(degrees.iter().sum::<usize>(), code.h().edge_count());
    }

    #[test]
    fn regular_tie_break_is_by_index() {
        let code =
            build_zigzag_random(&regular_spec(100), ClassAssignment::Uep { pc1_fraction: 0.2 }, 5, &BuildOptions::default())
                .unwrap();
        let pc1 = code.columns_in(ProtectionClass::Pc1);
        assert_eq!(pc1, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn peg_ties_prefer_low_degree_then_low_index() {
        let mut placer = Placer {
            h: ParityCheckMatrix::new(4, 2),
            target: vec![3; 4],
            rng: ChaCha8Rng::seed_from_u64(0),
            row_stamp: vec![0; 4],
            col_stamp: vec![0; 2],
            row_dist: vec![0; 4],
            stamp: 0,
            max_depth: u32::MAX,
        };
        for _ in 0..3 {
            placer.connect(0, 0..4, Placement::Peg).unwrap();
        }
        assert_eq!(placer.h.col(0), &[0, 1, 2]);
        placer.connect(1, 0..4, Placement::Peg).unwrap();
        placer.connect(1, 0..4, Placement::Peg).unwrap();
        assert_eq!(placer.h.col(1), &[0, 3]);
    }

    #[test]
    fn rejects_bad_fraction() {
        let spec = regular_spec(16);
        for f in [0.0, 1.0, 1.5] {
            assert_eq!(
                build_zigzag_random(&spec, ClassAssignment::Uep { pc1_fraction: f }, 0, &BuildOptions::default()),
                Err(Error::InvalidFraction(f))
            );
        }
    }

    #[test]
    fn degree_above_check_count_is_unsatisfiable() {
        let nu = DegreePolynomial::regular(Perspective::Node, NodeKind::Variable, 12).unwrap();
        let check = DegreePolynomial::regular(Perspective::Node, NodeKind::Check, 24).unwrap();
        let spec = EnsembleSpec::new(20, 0.5, nu, check).unwrap();
        let err = build_zigzag_random(&spec, ClassAssignment::Uep { pc1_fraction: 0.5 }, 0, &BuildOptions::default());
        assert!(matches!(err, Err(Error::Unsatisfiable(_))));
    }

    #[test]
    fn impossible_girth_exhausts_retries() {
        let opts = BuildOptions {
            min_girth: 40,
            retries: 3,
            ..Default::default()
        };
        match build_zigzag_random(&regular_spec(32), ClassAssignment::Uep { pc1_fraction: 0.2 }, 9, &opts) {
            Err(Error::ConstructionFailed { attempts, seeds, .. }) => {
                assert_eq!(attempts, 4);
                assert_eq!(seeds[0], 9);
                assert_eq!(seeds[2], attempt_seed(9, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn uniform_classes_are_degenerate() {
        let code =
            build_zigzag_random(&regular_spec(16), ClassAssignment::Uniform { class: ProtectionClass::Pc2 }, 0, &BuildOptions::default())
                .unwrap();
        assert_eq!(code.class_counts().unwrap().k1, 0);
        assert_eq!(code.class_counts().unwrap().k2, 8);
    }
}
