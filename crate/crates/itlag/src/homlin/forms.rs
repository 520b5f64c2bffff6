//! Shifted bilinear pairings between complexes, stored as their adjoint maps.
//!
//! A pairing `B` of shift `s` between `X` and `Y` pairs `X^a` with `Y^{-a-s}`.
//! Block `a` is the `dim Y^{-a-s} x dim X^a` matrix with entries `B(e_i, f_j)`
//! at `[j][i]`, which is exactly degree `a` of the adjoint `X → Y^∨[s]`.

use std::collections::BTreeMap;

use crate::error::{dim_err, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::map::{homotopy_boundary, solve_null_homotopy, ChainMap};
use crate::linalg::Matrix;
use crate::rational::{q, sign, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    left: RationalComplex,
    right: RationalComplex,
    shift: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl BilinearForm {
    pub fn new(left: RationalComplex, right: RationalComplex, shift: i32, mut blocks: BTreeMap<i32, Matrix>) -> Result<Self> {
        for (&a, m) in &blocks {
            let want = (right.dim(-a - shift), left.dim(a));
            if m.shape() != want {
                return dim_err(format!("pairing block {a} has shape {:?}, expected {want:?}", m.shape()));
            }
        }
        blocks.retain(|_, m| !m.is_zero());
        Ok(BilinearForm { left, right, shift, blocks })
    }

    pub fn zero(left: &RationalComplex, right: &RationalComplex, shift: i32) -> Self {
        BilinearForm { left: left.clone(), right: right.clone(), shift, blocks: BTreeMap::new() }
    }

    pub fn from_map(f: &ChainMap, right: &RationalComplex, shift: i32) -> Result<Self> {
        Self::new(f.source().clone(), right.clone(), shift, f.components().clone())
    }

    pub fn left(&self) -> &RationalComplex {
        &self.left
    }

    pub fn right(&self) -> &RationalComplex {
        &self.right
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Matrix> {
        &self.blocks
    }

    pub fn block(&self, a: i32) -> Matrix {
        self.blocks
            .get(&a)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.right.dim(-a - self.shift), self.left.dim(a)))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `Y^∨[s]`, the target of the adjoint.
    pub fn adjoint_target(&self) -> RationalComplex {
        self.right.dual().shift(self.shift)
    }

    /// The adjoint as a family of matrices, not checked to be a chain map.
    pub fn adjoint_unchecked(&self) -> ChainMap {
        ChainMap::new_unchecked(self.left.clone(), self.adjoint_target(), self.blocks.clone())
    }

    /// The adjoint chain map; fails unless `B(dx, y) + (-1)^{|x|} B(x, dy) = 0`.
    pub fn adjoint(&self) -> Result<ChainMap> {
        ChainMap::new(self.left.clone(), self.adjoint_target(), self.blocks.clone())
    }

    pub fn is_closed(&self) -> bool {
        self.adjoint().is_ok()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.adjoint_unchecked().is_quasi_iso()
    }

    /// `B(x, y)` for `x ∈ X^a`, `y ∈ Y^{-a-s}`.
    pub fn eval(&self, a: i32, x: &[Q], y: &[Q]) -> Q {
        let w = self.block(a).mul_vec(x);
        w.iter().zip(y).map(|(u, v)| u * v).sum()
    }

    /// For `X = Y`: `B(x, y) = -(-1)^{|x||y|} B(y, x)`.
    pub fn is_antisymmetric(&self) -> bool {
        if self.left != self.right {
            return false;
        }
        let s = self.shift;
        let degs: Vec<i32> = self.left.dims().keys().copied().collect();
        degs.into_iter().all(|a| {
            let b = -a - s;
            let sgn = -sign((a as i64) * (b as i64));
            self.block(a) == self.block(b).transpose().scale(&sgn)
        })
    }

    /// `(α, β)^* B (x, y) = B(α x, β y)`.
    pub fn pullback(&self, alpha: &ChainMap, beta: &ChainMap) -> Result<BilinearForm> {
        if alpha.target() != &self.left || beta.target() != &self.right {
            return dim_err("pullback: maps do not land in the paired complexes");
        }
        let s = self.shift;
        let blocks = alpha
            .source()
            .dims()
            .keys()
            .map(|&a| {
                let m = beta.component(-a - s).transpose().mul(&self.block(a)).mul(&alpha.component(a));
                (a, m)
            })
            .collect();
        BilinearForm::new(alpha.source().clone(), beta.source().clone(), s, blocks)
    }

    fn combine(&self, other: &BilinearForm, c: &Q) -> Result<BilinearForm> {
        if self.left != other.left || self.right != other.right || self.shift != other.shift {
            return dim_err("pairing arithmetic: mismatched complexes or shifts");
        }
        let mut keys: Vec<i32> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let blocks = keys.into_iter().map(|a| (a, self.block(a).add(&other.block(a).scale(c)))).collect();
        BilinearForm::new(self.left.clone(), self.right.clone(), self.shift, blocks)
    }

    pub fn add(&self, other: &BilinearForm) -> Result<BilinearForm> {
        self.combine(other, &q(1))
    }

    pub fn sub(&self, other: &BilinearForm) -> Result<BilinearForm> {
        self.combine(other, &q(-1))
    }

    pub fn scale(&self, c: &Q) -> BilinearForm {
        let blocks = self.blocks.iter().map(|(&a, m)| (a, m.scale(c))).collect();
        BilinearForm { left: self.left.clone(), right: self.right.clone(), shift: self.shift, blocks }
    }

    pub fn neg(&self) -> BilinearForm {
        self.scale(&q(-1))
    }

    /// `δh`: for a pairing `h` of shift `s - 1`, the shift-`s` pairing adjoint to `dh + hd`.
    pub fn boundary(&self) -> BilinearForm {
        let s = self.shift + 1;
        let target = self.right.dual().shift(s);
        let blocks = homotopy_boundary(&self.left, &target, &self.blocks);
        BilinearForm::new(self.left.clone(), self.right.clone(), s, blocks).expect("shapes agree by construction")
    }

    /// A shift `s - 1` pairing `h` with `δh = self`, if `self` is exact.
    pub fn primitive(&self) -> Option<BilinearForm> {
        let blocks = solve_null_homotopy(&self.adjoint_unchecked())?;
        BilinearForm::new(self.left.clone(), self.right.clone(), self.shift - 1, blocks).ok()
    }

    pub fn is_exact(&self) -> bool {
        self.is_zero() || self.primitive().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ℚ in degree 0 with the shift-0 pairing `B(x, y) = c x y`.
    fn scalar_form(c: i64) -> BilinearForm {
        let v = RationalComplex::concentrated(0, 1);
        BilinearForm::new(v.clone(), v, 0, [(0, Matrix::from_i64(1, 1, &[&[c]]))].into()).unwrap()
    }

    #[test]
    fn shapes_are_checked() {
        let v = RationalComplex::concentrated(0, 1);
        assert!(BilinearForm::new(v.clone(), v, 1, [(0, Matrix::identity(1))].into()).is_err());
    }

    #[test]
    fn symmetric_scalar_is_not_antisymmetric() {
        let b = scalar_form(1);
        assert!(!b.is_antisymmetric());
        assert!(b.is_closed());
        assert!(b.is_nondegenerate());
        assert_eq!(b.eval(0, &[q(2)], &[q(3)]), q(6));
    }

    #[test]
    fn pullback_scales() {
        let b = scalar_form(1);
        let v = b.left().clone();
        let two = ChainMap::identity(&v).scale(&q(2));
        let p = b.pullback(&two, &two).unwrap();
        assert_eq!(p, scalar_form(4));
    }

    #[test]
    fn exactness_on_contractible() {
        let c = RationalComplex::from_parts(&[(0, 1), (1, 1)], vec![(0, Matrix::identity(1))]).unwrap();
        // pairing of shift -1 between degree 0 and degree 1
        let b = BilinearForm::new(c.clone(), c.clone(), -1, [(0, Matrix::identity(1)), (1, Matrix::identity(1).neg())].into()).unwrap();
        assert!(b.is_closed());
        let h = b.primitive().expect("contractible complexes have no cohomology");
        assert_eq!(h.boundary(), b);
    }
}
