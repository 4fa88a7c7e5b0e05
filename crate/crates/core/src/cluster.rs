//! Group-average (UPGMA) agglomerative clustering and matrix reordering.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floatfmt::{fmt_csv, parse_special};
use crate::matrix::Matrix;

/// Factor applied to the largest finite entry to stand in for infinity.
pub const INFINITY_SENTINEL_FACTOR: f64 = 1e4;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("distance matrix is not symmetric")]
    NonSymmetric,
    #[error("negative or NaN distance at ({0}, {1})")]
    NegativeDistance(usize, usize),
    #[error("non-zero diagonal entry at {0}")]
    NonZeroDiagonal(usize),
    #[error("matrix has size {matrix} but the dendrogram has {leaves} leaves")]
    SizeMismatch { matrix: usize, leaves: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("cannot parse `{value}` in row {row}")]
    Parse { row: usize, value: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One agglomeration step. Leaves are clusters `0..n`; the cluster formed
/// by merge `k` gets id `n + k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub n_leaves: usize,
    pub merges: Vec<Merge>,
    pub leaf_order: Vec<usize>,
}

fn validate(dist: &Matrix) -> Result<(), ClusterError> {
    let n = dist.n();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    for i in 0..n {
        if dist[(i, i)] != 0.0 {
            return Err(ClusterError::NonZeroDiagonal(i));
        }
        for j in 0..n {
            if !(dist[(i, j)] >= 0.0) {
                return Err(ClusterError::NegativeDistance(i, j));
            }
        }
    }
    if !dist.is_symmetric(1e-12) {
        return Err(ClusterError::NonSymmetric);
    }
    Ok(())
}

/// Copy of `dist` with infinite entries replaced by
/// `1e4 * (largest finite entry)`.
pub fn replace_infinite(dist: &Matrix) -> Matrix {
    let max = dist
        .as_slice()
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let sentinel = INFINITY_SENTINEL_FACTOR * if max > 0.0 { max } else { 1.0 };
    dist.map(|v| if v.is_finite() { v } else { sentinel })
}

/// Group-average linkage: the distance between clusters is the mean of all
/// cross-pair distances. Among equally close pairs the one with the
/// smallest `(left id, right id)` merges first.
pub fn average_linkage(dist: &Matrix) -> Result<Dendrogram, ClusterError> {
    validate(dist)?;
    let n = dist.n();
    // sums of cross-pair distances; heights are sum / (size_a * size_b)
    let mut d = replace_infinite(dist);
    let mut id: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let key = (id[a].min(id[b]), id[a].max(id[b]));
                let v = d[(a, b)] / (size[a] * size[b]) as f64;
                let better = match best {
                    None => true,
                    Some((bv, bk, _, _)) => v < bv || (v == bv && key < bk),
                };
                if better {
                    best = Some((v, key, a, b));
                }
            }
        }
        let (h, (left, right), a, b) = best.expect("at least two active clusters");
        for &k in &active {
            if k != a && k != b {
                let v = d[(a, k)] + d[(b, k)];
                d[(a, k)] = v;
                d[(k, a)] = v;
            }
        }
        size[a] += size[b];
        id[a] = n + step;
        active.retain(|&k| k != b);
        merges.push(Merge {
            left,
            right,
            height: h,
            size: size[a],
        });
    }
    let leaf_order = leaf_order(n, &merges);
    Ok(Dendrogram {
        n_leaves: n,
        merges,
        leaf_order,
    })
}

/// Left-to-right leaves; at every node the child containing the smaller
/// leaf index comes first.
fn leaf_order(n: usize, merges: &[Merge]) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let mut min_leaf: Vec<usize> = (0..n).collect();
    for m in merges {
        min_leaf.push(min_leaf[m.left].min(min_leaf[m.right]));
    }
    let mut out = Vec::with_capacity(n);
    let mut stack = vec![n + merges.len() - 1];
    while let Some(c) = stack.pop() {
        if c < n {
            out.push(c);
            continue;
        }
        let m = merges[c - n];
        let (first, second) = if min_leaf[m.left] <= min_leaf[m.right] {
            (m.left, m.right)
        } else {
            (m.right, m.left)
        };
        stack.push(second);
        stack.push(first);
    }
    out
}

/// Rows and columns permuted into dendrogram leaf order.
pub fn reorder_matrix(dist: &Matrix, dg: &Dendrogram) -> Result<Matrix, ClusterError> {
    if dist.n() != dg.leaf_order.len() {
        return Err(ClusterError::SizeMismatch {
            matrix: dist.n(),
            leaves: dg.leaf_order.len(),
        });
    }
    Ok(dist.permuted(&dg.leaf_order))
}

/// Reads a square matrix from headerless CSV; `inf` is accepted.
pub fn read_matrix_csv<R: Read>(input: R) -> Result<Matrix, ClusterError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|v| {
                parse_special(v).ok_or_else(|| ClusterError::Parse {
                    row: r + 1,
                    value: v.to_string(),
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(ClusterError::Empty);
    }
    if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(ClusterError::Ragged {
            row: row + 1,
            expected: n,
            found: r.len(),
        });
    }
    Ok(Matrix::from_rows(rows).expect("square by construction"))
}

pub fn load_matrix_csv(path: impl AsRef<Path>) -> Result<Matrix, ClusterError> {
    read_matrix_csv(std::fs::File::open(path)?)
}

/// Headerless CSV, one matrix row per line, shortest round-trip floats.
pub fn write_matrix_csv<W: Write>(m: &Matrix, mut out: W) -> std::io::Result<()> {
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|&v| fmt_csv(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
