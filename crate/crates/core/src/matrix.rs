//! Dense square matrices of distances.

use std::ops::{Index, IndexMut};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::floatfmt;

/// Row-major `n x n` matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn filled(n: usize, value: f64) -> Self {
        Matrix {
            n,
            data: vec![value; n * n],
        }
    }

    /// Builds a matrix from rows; returns `None` when the rows are not square.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.n;
        &mut self.data[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Symmetric permutation: `out[a][b] = self[perm[a]][perm[b]]`.
    pub fn permuted(&self, perm: &[usize]) -> Matrix {
        Matrix::from_fn(self.n, |a, b| self[(perm[a], perm[b])])
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let (a, b) = (self[(i, j)], self[(j, i)]);
                if a == b {
                    continue;
                }
                if (a - b).abs() > rel_tol * a.abs().max(b.abs()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

struct Row<'a>(&'a [f64]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        floatfmt::vec::serialize(self.0, s)
    }
}

// Serialized as a list of rows, with non-finite entries as strings.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for r in self.rows() {
            seq.serialize_element(&Row(r))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct R(#[serde(with = "floatfmt::vec")] Vec<f64>);
        let rows: Vec<R> = Vec::deserialize(d)?;
        Matrix::from_rows(rows.into_iter().map(|r| r.0).collect())
            .ok_or_else(|| serde::de::Error::custom("matrix rows are not square"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permute_and_index() {
        let m = Matrix::from_fn(3, |i, j| (i * 3 + j) as f64);
        let p = m.permuted(&[2, 0, 1]);
        assert_eq!(p[(0, 0)], 8.0);
        assert_eq!(p[(0, 1)], 6.0);
        assert_eq!(p[(1, 2)], 1.0);
    }

    #[test]
    fn json_encodes_infinity_as_string() {
        let mut m = Matrix::filled(2, 0.0);
        m[(0, 1)] = f64::INFINITY;
        m[(1, 0)] = f64::INFINITY;
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[[0.0,"inf"],["inf",0.0]]"#);
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
