//! Sparse exact matrices over ℚ and the elimination routines built on them.
//!
//! Rows are stored as sorted `(column, value)` lists with no explicit zeros.
//! Everything downstream (ranks, kernels, solves) is exact.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_q, q, Q};

pub type SparseVec = Vec<(usize, Q)>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in self.to_dense() {
            let cells: Vec<String> = r.iter().map(fmt_q).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `a + c * b` for sorted sparse vectors.
fn axpy(a: &[(usize, Q)], c: &Q, b: &[(usize, Q)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize_row(mut row: SparseVec) -> SparseVec {
    row.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Row echelon form with unit leading entries; returns pivot rows sorted by leading column.
fn echelon(rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut pivots: Vec<SparseVec> = Vec::new();
    let mut lead: HashMap<usize, usize> = HashMap::new();
    for mut row in rows {
        loop {
            let Some((c, v)) = row.first().cloned() else { break };
            if let Some(&p) = lead.get(&c) {
                row = axpy(&row, &(-v), &pivots[p]);
            } else {
                let inv = v.recip();
                for e in row.iter_mut() {
                    e.1 *= &inv;
                }
                lead.insert(c, pivots.len());
                pivots.push(row);
                break;
            }
        }
    }
    pivots.sort_by_key(|r| r[0].0);
    pivots
}

/// Fully reduced row echelon form.
fn rref_rows(rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut piv = echelon(rows);
    for k in (0..piv.len()).rev() {
        let c = piv[k][0].0;
        let pk = piv[k].clone();
        for row in piv.iter_mut().take(k) {
            if let Ok(pos) = row.binary_search_by_key(&c, |e| e.0) {
                let v = row[pos].1.clone();
                *row = axpy(row, &(-v), &pk);
            }
        }
    }
    piv
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Q::one()));
        }
        m
    }

    pub fn scalar(n: usize, c: &Q) -> Self {
        Self::identity(n).scale(c)
    }

    /// Sums duplicate entries and drops zeros.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, Q)>) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            data[r].push((c, v));
        }
        let data = data.into_iter().map(normalize_row).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<Q>]) -> Self {
        assert_eq!(dense.len(), rows);
        Self::from_triplets(
            rows,
            cols,
            dense.iter().enumerate().flat_map(|(i, r)| {
                assert_eq!(r.len(), cols);
                r.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn from_i64(rows: usize, cols: usize, dense: &[&[i64]]) -> Self {
        let d: Vec<Vec<Q>> = dense.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_dense(rows, cols, &d)
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        Self::from_triplets(
            rows,
            cols.len(),
            cols.iter().enumerate().flat_map(|(j, c)| {
                assert_eq!(c.len(), rows);
                c.iter().enumerate().map(move |(i, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[(usize, Q)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(p) => self.data[i][p].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v.clone())))
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|r| r.iter().map(|(j, v)| (*j, v * c)).collect()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&q(-1))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "add: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &Q::one(), b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "sub: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &q(-1), b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc: SparseVec = Vec::new();
                for (k, v) in r {
                    acc = axpy(&acc, v, &other.data[*k]);
                }
                acc
            })
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().fold(Q::zero(), |acc, (j, v)| acc + v * &x[*j]))
            .collect()
    }

    /// Places `other` with its top-left corner at `(r0, c0)`, adding to what is there.
    pub fn add_block(&mut self, r0: usize, c0: usize, other: &Matrix) {
        assert!(r0 + other.rows <= self.rows && c0 + other.cols <= self.cols, "block out of range");
        for (i, r) in other.data.iter().enumerate() {
            if r.is_empty() {
                continue;
            }
            let shifted: SparseVec = r.iter().map(|(j, v)| (j + c0, v.clone())).collect();
            self.data[r0 + i] = axpy(&self.data[r0 + i], &Q::one(), &shifted);
        }
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.add_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack: row mismatch");
            m.add_block(0, c, b);
            c += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut r = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack: column mismatch");
            m.add_block(r, 0, b);
            r += b.rows;
        }
        m
    }

    /// Rows `r0..r0+nr`, columns `c0..c0+nc`.
    pub fn slice(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Matrix {
        Matrix::from_triplets(
            nr,
            nc,
            self.data[r0..r0 + nr].iter().enumerate().flat_map(|(i, r)| {
                r.iter()
                    .filter(move |(j, _)| *j >= c0 && *j < c0 + nc)
                    .map(move |(j, v)| (i, j - c0, v.clone()))
            }),
        )
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let t = self.transpose();
        let data = cols.iter().map(|&c| t.data[c].clone()).collect();
        Matrix { rows: cols.len(), cols: self.rows, data }.transpose()
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            echelon(self.data.iter().cloned()).len()
        } else {
            echelon(self.transpose().data).len()
        }
    }

    /// Columns form a basis of the null space.
    pub fn kernel(&self) -> Matrix {
        let red = rref_rows(self.data.iter().cloned());
        let pivot_cols: Vec<usize> = red.iter().map(|r| r[0].0).collect();
        let is_pivot: std::collections::HashSet<usize> = pivot_cols.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !is_pivot.contains(c)).collect();
        let free_index: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut trip = Vec::new();
        for (k, &f) in free.iter().enumerate() {
            trip.push((f, k, Q::one()));
        }
        for (row, &p) in red.iter().zip(&pivot_cols) {
            for (c, v) in row.iter().skip(1) {
                if let Some(&k) = free_index.get(c) {
                    trip.push((p, k, -v.clone()));
                }
            }
        }
        Matrix::from_triplets(self.cols, free.len(), trip)
    }

    /// A particular solution of `self * X = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let n = self.cols;
        let aug = Matrix::hstack(&[self, rhs]);
        let red = rref_rows(aug.data);
        let mut trip = Vec::new();
        for row in &red {
            let p = row[0].0;
            if p >= n {
                return None;
            }
            for (c, v) in row.iter().skip(1) {
                if *c >= n {
                    trip.push((p, c - n, v.clone()));
                }
            }
        }
        Some(Matrix::from_triplets(n, rhs.cols, trip))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows))?;
        if self.mul(&x) == Matrix::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    /// Indices of standard basis vectors completing the column span to the whole space.
    pub fn complement_indices(&self) -> Vec<usize> {
        let red = echelon(self.transpose().data);
        let pivots: std::collections::HashSet<usize> = red.iter().map(|r| r[0].0).collect();
        (0..self.rows).filter(|i| !pivots.contains(i)).collect()
    }

    /// Columns forming a basis of the column span.
    pub fn column_basis(&self) -> Matrix {
        let red = echelon(self.transpose().data);
        Matrix { rows: red.len(), cols: self.rows, data: red }.transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn rank_and_kernel() {
        let a = Matrix::from_i64(3, 4, &[&[1, 2, 0, 1], &[2, 4, 1, 0], &[3, 6, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.ncols(), 2);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let a = Matrix::from_i64(2, 2, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let b = Matrix::from_i64(2, 1, &[&[3], &[2]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let sing = Matrix::from_i64(2, 2, &[&[1, 1], &[1, 1]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&Matrix::from_i64(2, 1, &[&[1], &[0]])).is_none());
    }

    #[test]
    fn blocks_and_slices() {
        let a = Matrix::from_i64(1, 2, &[&[1, 2]]);
        let b = Matrix::from_i64(1, 1, &[&[3]]);
        let d = Matrix::block_diag(&[&a, &b]);
        assert_eq!(d.shape(), (2, 3));
        assert_eq!(d.get(1, 2), q(3));
        assert_eq!(d.slice(0, 1, 0, 2), a);
        let h = Matrix::hstack(&[&a, &Matrix::from_i64(1, 1, &[&[5]])]);
        assert_eq!(h.get(0, 2), q(5));
        assert_eq!(h.select_columns(&[2, 0]), Matrix::from_i64(1, 2, &[&[5, 1]]));
    }

    #[test]
    fn complement() {
        let c = Matrix::from_columns(3, &[vec![q(1), q(1), q(0)]]);
        let idx = c.complement_indices();
        assert_eq!(idx.len(), 2);
        let mut cols = vec![c.column(0)];
        for i in idx {
            let mut e = vec![q(0); 3];
            e[i] = q(1);
            cols.push(e);
        }
        assert_eq!(Matrix::from_columns(3, &cols).rank(), 3);
        assert_eq!(c.column_basis().ncols(), 1);
        assert_eq!(Matrix::scalar(2, &frac(1, 2)).get(1, 1), frac(1, 2));
    }
}
