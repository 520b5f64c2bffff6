//! Semisimplicial sets presented by ordered vertex tuples, and poset nerves.

use std::collections::{BTreeMap, HashMap};

use crate::error::{invariant, Result};
use crate::homlin::complex::RationalComplex;
use crate::linalg::Matrix;
use crate::rational::{q, sign};
use crate::shape::poset::Poset;

/// Cells in dimension `k` are `(k+1)`-tuples of vertices; face `i` drops entry `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiSimplicialSet {
    vertex_labels: Vec<String>,
    cells: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl SemiSimplicialSet {
    /// All faces of listed cells must also be listed.
    pub fn new(vertex_labels: Vec<String>, mut cells: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        while cells.last().is_some_and(Vec::is_empty) {
            cells.pop();
        }
        let lookup: Vec<HashMap<Vec<usize>, usize>> = cells
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        let s = SemiSimplicialSet { vertex_labels, cells, lookup };
        for (k, cs) in s.cells.iter().enumerate() {
            for c in cs {
                if c.len() != k + 1 {
                    return invariant(format!("cell {c:?} listed in dimension {k}"));
                }
                if k > 0 {
                    for i in 0..=k {
                        let mut f = c.clone();
                        f.remove(i);
                        if !s.lookup[k - 1].contains_key(&f) {
                            return invariant(format!("face {f:?} of {c:?} missing"));
                        }
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cells(&self, k: usize) -> &[Vec<usize>] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn cell_index(&self, cell: &[usize]) -> Option<usize> {
        self.lookup.get(cell.len().checked_sub(1)?)?.get(cell).copied()
    }

    /// Index of face `i` of cell `id` in dimension `k`.
    pub fn face(&self, k: usize, id: usize, i: usize) -> usize {
        let mut f = self.cells[k][id].clone();
        f.remove(i);
        self.lookup[k - 1][&f]
    }

    pub fn faces(&self, k: usize, id: usize) -> Vec<usize> {
        (0..=k).map(|i| self.face(k, id, i)).collect()
    }

    /// `d_i d_j = d_{j-1} d_i` for `i < j` on every cell.
    pub fn check_face_identities(&self) -> bool {
        for k in 2..self.cells.len() {
            for id in 0..self.cells[k].len() {
                for j in 0..=k {
                    for i in 0..j {
                        let a = self.face(k - 1, self.face(k, id, j), i);
                        let b = self.face(k - 1, self.face(k, id, i), j - 1);
                        if a != b {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `∂_k : C_k → C_{k-1}` with `∂ = Σ (-1)^i d_i`.
    pub fn boundary_matrix(&self, k: usize) -> Matrix {
        let rows = if k == 0 { 0 } else { self.cells(k - 1).len() };
        let cols = self.cells(k).len();
        if k == 0 {
            return Matrix::zeros(0, cols);
        }
        Matrix::from_triplets(
            rows,
            cols,
            (0..cols).flat_map(|id| (0..=k).map(move |i| (self.face(k, id, i), id, sign(i as i64)))),
        )
    }

    fn homology_with(&self, augmented: bool) -> BTreeMap<usize, usize> {
        let top = self.cells.len();
        let mut ranks: Vec<usize> = vec![0; top + 1];
        for (k, r) in ranks.iter_mut().enumerate().take(top).skip(1) {
            *r = self.boundary_matrix(k).rank();
        }
        if augmented && !self.cells(0).is_empty() {
            ranks[0] = 1;
        }
        let mut out = BTreeMap::new();
        for k in 0..top {
            let h = self.cells[k].len() - ranks[k] - ranks[k + 1];
            if h > 0 {
                out.insert(k, h);
            }
        }
        out
    }

    /// Rational homology `H_k`, nonzero entries only.
    pub fn homology(&self) -> BTreeMap<usize, usize> {
        self.homology_with(false)
    }

    /// Reduced homology; the empty set has `H̃_{-1} = ℚ`, reported as key `usize::MAX`.
    pub fn reduced_homology(&self) -> BTreeMap<usize, usize> {
        if self.cells(0).is_empty() {
            return [(usize::MAX, 1)].into();
        }
        self.homology_with(true)
    }

    pub fn components(&self) -> usize {
        self.homology().get(&0).copied().unwrap_or(0)
    }

    /// Cycles of `∂_k` (columns) that are not boundaries: a basis of `H_k` representatives.
    pub fn reduced_cycles(&self, k: usize) -> Matrix {
        let mut z = if k == 0 {
            let n = self.cells(0).len();
            // augmentation kernel
            Matrix::from_triplets(1, n, (0..n).map(|j| (0, j, q(1)))).kernel()
        } else {
            self.boundary_matrix(k).kernel()
        };
        let b = self.boundary_matrix(k + 1).column_basis();
        let mut chosen = b.clone();
        let mut keep = Vec::new();
        for j in 0..z.ncols() {
            let col = z.select_columns(&[j]);
            let trial = Matrix::hstack(&[&chosen, &col]);
            if trial.rank() > chosen.ncols() {
                chosen = trial;
                keep.push(j);
            }
        }
        z = z.select_columns(&keep);
        z
    }

    /// Cochain complex `C^k = Hom(C_k, ℚ)` with `δ = ∂^T`, in degrees `0..=dim`.
    pub fn cochain_complex(&self) -> RationalComplex {
        let dims = self.cells.iter().enumerate().map(|(k, c)| (k as i32, c.len())).collect();
        let d = (1..self.cells.len())
            .map(|k| ((k - 1) as i32, self.boundary_matrix(k).transpose()))
            .collect();
        RationalComplex::new_unchecked(dims, d)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }
}

/// All strictly increasing chains of `p`, grouped by length.
pub fn chains(p: &Poset) -> Vec<Vec<Vec<usize>>> {
    let order = p.linear_extension();
    let mut by_len: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut current: Vec<Vec<usize>> = order.iter().map(|&a| vec![a]).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for c in &current {
            let last = *c.last().unwrap();
            for &b in &order {
                if p.lt(last, b) {
                    let mut e = c.clone();
                    e.push(b);
                    next.push(e);
                }
            }
        }
        by_len.push(current);
        current = next;
    }
    by_len
}

pub fn nerve(p: &Poset) -> SemiSimplicialSet {
    SemiSimplicialSet::new(p.labels().to_vec(), chains(p)).expect("chains are closed under faces")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary_of_triangle() -> SemiSimplicialSet {
        SemiSimplicialSet::new(
            vec!["0".into(), "1".into(), "2".into()],
            vec![vec![vec![0], vec![1], vec![2]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]],
        )
        .unwrap()
    }

    #[test]
    fn circle_homology() {
        let s = boundary_of_triangle();
        assert_eq!(s.homology(), [(0, 1), (1, 1)].into());
        assert_eq!(s.reduced_homology(), [(1, 1)].into());
        assert_eq!(s.reduced_cycles(1).ncols(), 1);
        assert_eq!(s.cochain_complex().homology(), [(0, 1), (1, 1)].into());
        assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn missing_faces_rejected() {
        let r = SemiSimplicialSet::new(vec!["0".into(), "1".into()], vec![vec![vec![0]], vec![vec![0, 1]]]);
        assert!(r.is_err());
    }

    #[test]
    fn face_identities_on_simplex() {
        let labels = (0..4).map(|i| i.to_string()).collect();
        let rel = [(0, 1), (1, 2), (2, 3)];
        let p = Poset::new(labels, &rel).unwrap();
        let n = nerve(&p);
        assert_eq!(n.counts(), vec![4, 6, 4, 1]);
        assert!(n.check_face_identities());
        assert!(n.reduced_homology().is_empty());
    }

    #[test]
    fn empty_nerve() {
        let p = Poset::new(vec![], &[]).unwrap();
        assert_eq!(nerve(&p).reduced_homology(), [(usize::MAX, 1)].into());
    }
}
