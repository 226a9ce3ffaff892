//! Sparse matrices over the integers, stored column by column.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::integer::Integer;

/// An exact sparse integer matrix. Each column holds `(row, value)` pairs
/// sorted by row with no zero values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<Vec<(u32, Integer)>>,
}

impl SparseIntMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseIntMatrix {
            n_rows,
            n_cols,
            cols: vec![Vec::new(); n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|i| vec![(i as u32, Integer::ONE)]).collect();
        SparseIntMatrix {
            n_rows: n,
            n_cols: n,
            cols,
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Zero values are
    /// dropped; a repeated position is an error.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Integer)>,
    ) -> Result<Self> {
        let mut cols: Vec<Vec<(u32, Integer)>> = vec![Vec::new(); n_cols];
        for (r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::Shape(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
            if !v.is_zero() {
                cols[c].push((r as u32, v));
            }
        }
        for (c, col) in cols.iter_mut().enumerate() {
            col.sort_by_key(|e| e.0);
            if col.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Shape(format!("duplicate entry in column {c}")));
            }
        }
        Ok(SparseIntMatrix {
            n_rows,
            n_cols,
            cols,
        })
    }

    /// Builds a matrix from sorted, zero-free columns.
    pub(crate) fn from_columns(n_rows: usize, cols: Vec<Vec<(u32, Integer)>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0)));
        debug_assert!(cols.iter().all(|c| c
            .iter()
            .all(|(r, v)| (*r as usize) < n_rows && !v.is_zero())));
        SparseIntMatrix {
            n_rows,
            n_cols: cols.len(),
            cols,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(move |(c, &v)| (r, c, Integer::from(v)))
        });
        SparseIntMatrix::from_triplets(n_rows, n_cols, triplets)
            .expect("dense input is well formed")
    }

    pub fn to_dense(&self) -> Vec<Vec<Integer>> {
        let mut out = vec![vec![Integer::ZERO; self.n_cols]; self.n_rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out[*r as usize][c] = v.clone();
            }
        }
        out
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(u32, Integer)] {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[Vec<(u32, Integer)>] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Integer {
        match self.cols[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(i) => self.cols[c][i].1.clone(),
            Err(_) => Integer::ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Triplets in `(col, row)` order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Integer)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r as usize, c, v)))
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut cols: Vec<Vec<(u32, Integer)>> = vec![Vec::new(); self.n_rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r as usize].push((c as u32, v.clone()));
            }
        }
        SparseIntMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            cols,
        }
    }

    /// Row-major view: for each row, `(col, value)` pairs sorted by column.
    pub fn rows(&self) -> Vec<Vec<(u32, Integer)>> {
        self.transpose().cols
    }

    pub fn mul(&self, rhs: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let mut acc = vec![Integer::ZERO; self.n_rows];
        let mut touched: Vec<u32> = Vec::new();
        let cols = rhs
            .cols
            .iter()
            .map(|rcol| {
                for (k, b) in rcol {
                    for (r, a) in &self.cols[*k as usize] {
                        let slot = &mut acc[*r as usize];
                        if slot.is_zero() {
                            touched.push(*r);
                        }
                        *slot = &*slot + &(a * b);
                    }
                }
                touched.sort_unstable();
                touched.dedup();
                let col = touched
                    .drain(..)
                    .filter_map(|r| {
                        let v = std::mem::take(&mut acc[r as usize]);
                        (!v.is_zero()).then_some((r, v))
                    })
                    .collect();
                col
            })
            .collect();
        Ok(SparseIntMatrix {
            n_rows: self.n_rows,
            n_cols: rhs.n_cols,
            cols,
        })
    }

    pub fn mul_vec(&self, x: &[Integer]) -> Result<Vec<Integer>> {
        if x.len() != self.n_cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.n_cols
            )));
        }
        let mut out = vec![Integer::ZERO; self.n_rows];
        for (col, xc) in self.cols.iter().zip(x) {
            if xc.is_zero() {
                continue;
            }
            for (r, a) in col {
                let slot = &mut out[*r as usize];
                *slot = &*slot + &(a * xc);
            }
        }
        Ok(out)
    }

    /// Reorders rows and columns: row `r` moves to `row_perm[r]`, column `c`
    /// to `col_perm[c]`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseIntMatrix {
        let mut cols: Vec<Vec<(u32, Integer)>> = vec![Vec::new(); self.n_cols];
        for (c, col) in self.cols.iter().enumerate() {
            let mut moved: Vec<(u32, Integer)> = col
                .iter()
                .map(|(r, v)| (row_perm[*r as usize] as u32, v.clone()))
                .collect();
            moved.sort_by_key(|e| e.0);
            cols[col_perm[c]] = moved;
        }
        SparseIntMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            cols,
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> SparseIntMatrix {
        let cols = keep.iter().map(|&c| self.cols[c].clone()).collect();
        SparseIntMatrix {
            n_rows: self.n_rows,
            n_cols: keep.len(),
            cols,
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.cols
            .iter()
            .flatten()
            .map(|(_, v)| v.bits())
            .max()
            .unwrap_or(0)
    }

    /// Serializes in the cache text format: a header line
    /// `qlab-matrix v1 n_rows n_cols n_entries` followed by `row col value`
    /// triplets sorted by `(col, row)`.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "qlab-matrix v1 {} {} {}\n",
            self.n_rows,
            self.n_cols,
            self.nnz()
        );
        for (r, c, v) in self.triplets() {
            writeln!(s, "{r} {c} {v}").expect("writing to a String");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "qlab-matrix" || fields[1] != "v1" {
            return Err(Error::Parse(format!("bad matrix header {header:?}")));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        };
        let (n_rows, n_cols, n_entries) = (num(fields[2])?, num(fields[3])?, num(fields[4])?);
        let mut triplets = Vec::with_capacity(n_entries);
        let mut last: Option<(usize, usize)> = None;
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("bad matrix line {line:?}")));
            }
            let (r, c) = (num(f[0])?, num(f[1])?);
            let v: Integer = f[2]
                .parse()
                .map_err(|e| Error::Parse(format!("{:?}: {e}", f[2])))?;
            if v.is_zero() {
                return Err(Error::Parse("explicit zero entry".into()));
            }
            if last.is_some_and(|l| l >= (c, r)) {
                return Err(Error::Parse("entries not sorted by (col, row)".into()));
            }
            last = Some((c, r));
            triplets.push((r, c, v));
        }
        if triplets.len() != n_entries {
            return Err(Error::Parse(format!(
                "header promises {n_entries} entries, found {}",
                triplets.len()
            )));
        }
        SparseIntMatrix::from_triplets(n_rows, n_cols, triplets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix() -> impl Strategy<Value = SparseIntMatrix> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-4i64..=4, c), r).prop_map(move |rows| {
                if r == 0 {
                    SparseIntMatrix::zeros(0, c)
                } else {
                    SparseIntMatrix::from_dense(&rows)
                }
            })
        })
    }

    #[test]
    fn multiply_small() {
        let a = SparseIntMatrix::from_dense(&[vec![1, 2], vec![3, 4]]);
        let b = SparseIntMatrix::from_dense(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            a.mul(&b).unwrap(),
            SparseIntMatrix::from_dense(&[vec![2, 1], vec![4, 3]])
        );
        let c = SparseIntMatrix::from_dense(&[vec![1, -1], vec![-1, 1]]);
        assert!(c
            .mul(&SparseIntMatrix::from_dense(&[vec![1], vec![1]]))
            .unwrap()
            .is_zero());
        assert!(a.mul(&SparseIntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn rejects_duplicates_and_malformed_text() {
        assert!(
            SparseIntMatrix::from_triplets(2, 2, [(0, 0, Integer::ONE), (0, 0, Integer::ONE)])
                .is_err()
        );
        assert!(SparseIntMatrix::from_text("qlab-matrix v1 2 2 1\n0 0 0\n").is_err());
        assert!(SparseIntMatrix::from_text("qlab-matrix v1 2 2 2\n0 1 1\n0 0 1\n").is_err());
        assert!(SparseIntMatrix::from_text("qlab-matrix v2 2 2 0\n").is_err());
        assert!(SparseIntMatrix::from_text("qlab-matrix v1 2 2 3\n0 0 1\n").is_err());
    }

    #[test]
    fn huge_values_survive_text_format() {
        let big: Integer = "123456789012345678901234567890".parse().unwrap();
        let m = SparseIntMatrix::from_triplets(1, 2, [(0, 1, big.clone())]).unwrap();
        let text = m.to_text();
        assert_eq!(
            text,
            "qlab-matrix v1 1 2 1\n0 1 123456789012345678901234567890\n"
        );
        assert_eq!(SparseIntMatrix::from_text(&text).unwrap().get(0, 1), big);
    }

    proptest! {
        #[test]
        fn text_round_trip_and_transpose(m in arb_matrix()) {
            prop_assert_eq!(SparseIntMatrix::from_text(&m.to_text()).unwrap(), m.clone());
            prop_assert_eq!(m.transpose().transpose(), m.clone());
            let x: Vec<Integer> = (0..m.n_cols()).map(|i| Integer::from(i as i64 - 2)).collect();
            let xm = SparseIntMatrix::from_triplets(m.n_cols(), 1, x.iter().enumerate().map(|(i, v)| (i, 0, v.clone()))).unwrap();
            let via_mat: Vec<Integer> = (0..m.n_rows()).map(|r| m.mul(&xm).unwrap().get(r, 0)).collect();
            prop_assert_eq!(m.mul_vec(&x).unwrap(), via_mat);
        }
    }
}
