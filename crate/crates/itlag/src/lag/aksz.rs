//! Cochain algebras with fundamental functionals and the AKSZ transgression.
//!
//! Products are stored per bidegree: `product(p, q)` is a `dim C^{p+q} × (dim C^p · dim C^q)`
//! matrix with `e_i ⊗ e_j` at column `i * dim C^q + j`. Pairings built from a functional
//! `[T]` use the graded symmetrization `½([T](ab) + (-1)^{|a||b|}[T](ba))`, which agrees with
//! `[T](ab)` on cohomology and is graded symmetric on the nose.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{dim_err, invariant, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::forms::BilinearForm;
use crate::homlin::map::ChainMap;
use crate::homlin::ops::{kronecker, tensor, tensor_maps, TensorLayout};
use crate::linalg::Matrix;
use crate::rational::{frac, q, sign, Q};

use super::correspondence::Correspondence;
use super::symplectic::SymplecticComplex;
use super::{cartesian_comparison, oriented_homotopy, quadratic, Homotopy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainAlgebra {
    complex: RationalComplex,
    products: BTreeMap<(i32, i32), Matrix>,
    unit: Vec<Q>,
}

impl CochainAlgebra {
    /// Validates shapes, the unit law, the Leibniz rule and associativity.
    pub fn new(complex: RationalComplex, products: BTreeMap<(i32, i32), Matrix>, unit: Vec<Q>) -> Result<Self> {
        let a = Self::new_unchecked(complex, products, unit)?;
        a.validate()?;
        Ok(a)
    }

    /// Validates shapes only.
    pub fn new_unchecked(complex: RationalComplex, mut products: BTreeMap<(i32, i32), Matrix>, unit: Vec<Q>) -> Result<Self> {
        if unit.len() != complex.dim(0) {
            return dim_err("unit must lie in degree 0");
        }
        for (&(p, qd), m) in &products {
            let want = (complex.dim(p + qd), complex.dim(p) * complex.dim(qd));
            if m.shape() != want {
                return dim_err(format!("product ({p}, {qd}) has shape {:?}, expected {want:?}", m.shape()));
            }
        }
        products.retain(|_, m| !m.is_zero());
        Ok(CochainAlgebra { complex, products, unit })
    }

    /// `ℚ` in degree 0.
    pub fn point() -> Self {
        let c = RationalComplex::concentrated(0, 1);
        CochainAlgebra::new(c, [((0, 0), Matrix::identity(1))].into(), vec![q(1)]).expect("valid")
    }

    /// `ℚ⟨1, x⟩` with `|x| = 1`, `x² = 0` and zero differential.
    pub fn formal_circle() -> Self {
        let c = RationalComplex::from_parts(&[(0, 1), (1, 1)], vec![]).expect("valid");
        let products = [((0, 0), Matrix::identity(1)), ((0, 1), Matrix::identity(1)), ((1, 0), Matrix::identity(1))].into();
        CochainAlgebra::new(c, products, vec![q(1)]).expect("valid")
    }

    pub fn zero() -> Self {
        CochainAlgebra { complex: RationalComplex::zero(), products: BTreeMap::new(), unit: vec![] }
    }

    pub fn complex(&self) -> &RationalComplex {
        &self.complex
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    pub fn product(&self, p: i32, qd: i32) -> Matrix {
        self.products.get(&(p, qd)).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.complex.dim(p + qd), self.complex.dim(p) * self.complex.dim(qd))
        })
    }

    pub fn multiply(&self, p: i32, x: &[Q], qd: i32, y: &[Q]) -> Vec<Q> {
        let xy: Vec<Q> = x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect();
        self.product(p, qd).mul_vec(&xy)
    }

    fn degrees(&self) -> Vec<i32> {
        self.complex.dims().keys().copied().collect()
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.complex;
        let degs = self.degrees();
        for &p in &degs {
            let n = c.dim(p);
            let one = Matrix::from_columns(c.dim(0), std::slice::from_ref(&self.unit));
            if n > 0 && c.dim(0) > 0 {
                let left = self.product(0, p).mul(&kronecker(&one, &Matrix::identity(n)));
                let right = self.product(p, 0).mul(&kronecker(&Matrix::identity(n), &one));
                if left != Matrix::identity(n) || right != Matrix::identity(n) {
                    return invariant(format!("unit law fails in degree {p}"));
                }
            } else if n > 0 {
                return invariant("nonzero algebra without a unit");
            }
        }
        for &p in &degs {
            for &qd in &degs {
                let lhs = c.diff(p + qd).mul(&self.product(p, qd));
                let a = self.product(p + 1, qd).mul(&kronecker(&c.diff(p), &Matrix::identity(c.dim(qd))));
                let b = self.product(p, qd + 1).mul(&kronecker(&Matrix::identity(c.dim(p)), &c.diff(qd)));
                if lhs != a.add(&b.scale(&sign(p as i64))) {
                    return invariant(format!("Leibniz rule fails in bidegree ({p}, {qd})"));
                }
                for &r in &degs {
                    let ab_c = self
                        .product(p + qd, r)
                        .mul(&kronecker(&self.product(p, qd), &Matrix::identity(c.dim(r))));
                    let a_bc = self
                        .product(p, qd + r)
                        .mul(&kronecker(&Matrix::identity(c.dim(p)), &self.product(qd, r)));
                    if ab_c != a_bc {
                        return invariant(format!("associativity fails in degrees ({p}, {qd}, {r})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `f: self → target` preserves products and the unit.
    pub fn is_algebra_map(&self, target: &CochainAlgebra, f: &ChainMap) -> bool {
        if f.source() != &self.complex || f.target() != &target.complex {
            return false;
        }
        if f.component(0).mul_vec(&self.unit) != target.unit {
            return false;
        }
        let degs = self.degrees();
        degs.iter().all(|&p| {
            degs.iter().all(|&qd| {
                let lhs = f.component(p + qd).mul(&self.product(p, qd));
                let rhs = target.product(p, qd).mul(&kronecker(&f.component(p), &f.component(qd)));
                lhs == rhs
            })
        })
    }
}

/// Graded-symmetrized `[T](a·b)` as form blocks of shift `-n` on `C`.
pub fn symmetric_pairing(alg: &CochainAlgebra, n: i32, functional: &[Q]) -> BTreeMap<i32, Matrix> {
    let c = alg.complex();
    let t = Matrix::from_triplets(
        1,
        functional.len(),
        functional.iter().enumerate().filter(|(_, x)| **x != q(0)).map(|(i, x)| (0, i, x.clone())),
    );
    let half = frac(1, 2);
    let mut out = BTreeMap::new();
    for &a in c.dims().keys() {
        let b = n - a;
        let (da, db) = (c.dim(a), c.dim(b));
        if da * db == 0 {
            continue;
        }
        // values[x ⊗ y] with x in degree a
        let ab = t.mul(&alg.product(a, b));
        let ba = t.mul(&alg.product(b, a));
        let sgn = sign((a as i64) * (b as i64));
        let mut trip = Vec::new();
        for i in 0..db {
            for j in 0..da {
                let v = (ab.get(0, j * db + i) + &sgn * ba.get(0, i * da + j)) * &half;
                if v != q(0) {
                    trip.push((i, j, v));
                }
            }
        }
        let m = Matrix::from_triplets(db, da, trip);
        if !m.is_zero() {
            out.insert(a, m);
        }
    }
    out
}

/// `B((a⊗v), (b⊗w)) = (-1)^{|v||b|} B_C(a, b) B_V(v, w)` on `C ⊗ V`, of shift `sc + sv`.
pub fn tensor_form(
    c: &RationalComplex,
    bc: &BTreeMap<i32, Matrix>,
    sc: i32,
    v: &RationalComplex,
    bv: &BTreeMap<i32, Matrix>,
    sv: i32,
) -> BTreeMap<i32, Matrix> {
    let lay = TensorLayout::new(c, v);
    let s = sc + sv;
    let mut out = BTreeMap::new();
    for n in lay.degrees() {
        let m_deg = -n - s;
        let (rows, cols) = (lay.dim(m_deg), lay.dim(n));
        if rows * cols == 0 {
            continue;
        }
        let mut m = Matrix::zeros(rows, cols);
        for (p, off) in lay.blocks(n) {
            let qd = n - p;
            let p2 = -p - sc;
            let q2 = -qd - sv;
            let (Some(x), Some(y)) = (bc.get(&p), bv.get(&qd)) else { continue };
            if c.dim(p2) * v.dim(q2) == 0 {
                continue;
            }
            let r0 = lay.index(p2, 0, q2, 0);
            m.add_block(r0, off, &kronecker(x, y).scale(&sign((qd as i64) * (p2 as i64))));
        }
        if !m.is_zero() {
            out.insert(n, m);
        }
    }
    out
}

/// A cochain algebra with a functional `[T]` on degree `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedCochainAlgebra {
    algebra: CochainAlgebra,
    dim: i32,
    functional: Vec<Q>,
}

/// Which orientation conditions hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrientationCheck {
    /// `[T]` vanishes on exact cochains.
    pub closed: bool,
    /// The duality map `C → C^∨[-d]` is a quasi-isomorphism.
    pub nondegenerate: bool,
}

impl OrientationCheck {
    pub fn ok(&self) -> bool {
        self.closed && self.nondegenerate
    }
}

impl OrientedCochainAlgebra {
    pub fn new(algebra: CochainAlgebra, dim: i32, functional: Vec<Q>) -> Result<Self> {
        if functional.len() != algebra.complex().dim(dim) {
            return dim_err(format!("functional has length {}, degree {dim} has dimension {}", functional.len(), algebra.complex().dim(dim)));
        }
        Ok(OrientedCochainAlgebra { algebra, dim, functional })
    }

    pub fn point() -> Self {
        Self::new(CochainAlgebra::point(), 0, vec![q(1)]).expect("valid")
    }

    /// The formal circle with `[T](x) = 1`.
    pub fn formal_circle() -> Self {
        Self::new(CochainAlgebra::formal_circle(), 1, vec![q(1)]).expect("valid")
    }

    pub fn empty(dim: i32) -> Self {
        OrientedCochainAlgebra { algebra: CochainAlgebra::zero(), dim, functional: vec![] }
    }

    pub fn algebra(&self) -> &CochainAlgebra {
        &self.algebra
    }

    pub fn complex(&self) -> &RationalComplex {
        self.algebra.complex()
    }

    pub fn dim(&self) -> i32 {
        self.dim
    }

    pub fn functional(&self) -> &[Q] {
        &self.functional
    }

    /// The symmetrized pairing of shift `-d`.
    pub fn duality_form(&self) -> BilinearForm {
        let c = self.complex();
        let blocks = symmetric_pairing(&self.algebra, self.dim, &self.functional);
        BilinearForm::new(c.clone(), c.clone(), -self.dim, blocks).expect("shapes agree")
    }

    pub fn duality_map(&self) -> ChainMap {
        self.duality_form().adjoint_unchecked()
    }

    pub fn check(&self) -> OrientationCheck {
        let d = self.complex().diff(self.dim - 1);
        let closed = (0..d.ncols()).all(|j| {
            d.column(j).iter().zip(&self.functional).map(|(a, b)| a * b).sum::<Q>() == q(0)
        });
        let form = self.duality_form();
        OrientationCheck { closed, nondegenerate: closed && form.is_closed() && form.is_nondegenerate() }
    }

    pub fn is_oriented(&self) -> bool {
        self.check().ok()
    }
}

/// Result of transgressing a pairing; `presymplectic_only` is set when the
/// orientation or the input pairing fails its checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transgression {
    pub object: SymplecticComplex,
    pub presymplectic_only: bool,
}

/// `C ⊗ V` with the pairing `(a⊗v, b⊗w) ↦ ±[T](a·b) ω(v, w)`, of shift `s - d`.
pub fn aksz_transgress(t: &OrientedCochainAlgebra, x: &SymplecticComplex) -> Result<Transgression> {
    let c = t.complex();
    let v = x.complex();
    let bc = symmetric_pairing(t.algebra(), t.dim(), t.functional());
    let blocks = tensor_form(c, &bc, -t.dim(), v, x.form().blocks(), x.shift());
    let object = SymplecticComplex::from_blocks(&tensor(c, v), x.shift() - t.dim(), blocks)?;
    let presymplectic_only = !t.is_oriented() || !x.is_symplectic();
    Ok(Transgression { object, presymplectic_only })
}

/// `M_0 → M ← M_1` at the level of cochains: restrictions `C(M) → C(M_i)`, feet with
/// functionals of degree `n - 1` and a relative functional `[M]` on `C^n(M)` with
/// `[M](dω) = [M_1](ω|) - [M_0](ω|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CospanOfAlgebras {
    dim: i32,
    left: OrientedCochainAlgebra,
    right: OrientedCochainAlgebra,
    total: CochainAlgebra,
    to_left: ChainMap,
    to_right: ChainMap,
    relative: Vec<Q>,
}

impl CospanOfAlgebras {
    /// Validates shapes, that restrictions are algebra maps, and the Stokes identity.
    pub fn new(
        left: OrientedCochainAlgebra,
        right: OrientedCochainAlgebra,
        total: CochainAlgebra,
        to_left: ChainMap,
        to_right: ChainMap,
        relative: Vec<Q>,
    ) -> Result<Self> {
        if left.dim() != right.dim() {
            return dim_err("feet of different dimensions");
        }
        let dim = left.dim() + 1;
        if relative.len() != total.complex().dim(dim) {
            return dim_err("relative functional has the wrong length");
        }
        if !total.is_algebra_map(left.algebra(), &to_left) || !total.is_algebra_map(right.algebra(), &to_right) {
            return invariant("restriction is not a map of cochain algebras");
        }
        let c = Self { dim, left, right, total, to_left, to_right, relative };
        if let Some(j) = c.stokes_violation() {
            return invariant(format!("Stokes identity fails on basis cochain {j} of degree {}", dim - 1));
        }
        Ok(c)
    }

    /// The width-zero cospan `X → X ← X`.
    pub fn identity(foot: &OrientedCochainAlgebra) -> Self {
        let id = ChainMap::identity(foot.complex());
        let rel = vec![q(0); foot.complex().dim(foot.dim() + 1)];
        Self::new(foot.clone(), foot.clone(), foot.algebra().clone(), id.clone(), id, rel).expect("valid")
    }

    /// `∅ → ∅ ← ∅` in dimension `n`.
    pub fn empty(n: i32) -> Self {
        let z = RationalComplex::zero();
        let e = OrientedCochainAlgebra::empty(n - 1);
        Self::new(e.clone(), e, CochainAlgebra::zero(), ChainMap::zero(&z, &z), ChainMap::zero(&z, &z), vec![]).expect("valid")
    }

    pub fn dim(&self) -> i32 {
        self.dim
    }

    pub fn left(&self) -> &OrientedCochainAlgebra {
        &self.left
    }

    pub fn right(&self) -> &OrientedCochainAlgebra {
        &self.right
    }

    pub fn total(&self) -> &CochainAlgebra {
        &self.total
    }

    pub fn to_left(&self) -> &ChainMap {
        &self.to_left
    }

    pub fn to_right(&self) -> &ChainMap {
        &self.to_right
    }

    pub fn relative(&self) -> &[Q] {
        &self.relative
    }

    /// First basis cochain of degree `n - 1` violating Stokes, if any.
    pub fn stokes_violation(&self) -> Option<usize> {
        let n = self.dim;
        let c = self.total.complex();
        let d = c.diff(n - 1);
        let (rl, rr) = (self.to_left.component(n - 1), self.to_right.component(n - 1));
        let eval = |f: &[Q], x: &[Q]| x.iter().zip(f).map(|(a, b)| a * b).sum::<Q>();
        (0..c.dim(n - 1)).find(|&j| {
            let lhs = eval(&self.relative, &d.column(j));
            let rhs = eval(self.right.functional(), &rr.column(j)) - eval(self.left.functional(), &rl.column(j));
            lhs != rhs
        })
    }

    /// The relative pairing as a degree `-1` family `C(M) → C(M)^∨[-n+1-1]`.
    pub fn relative_pairing(&self) -> Homotopy {
        symmetric_pairing(&self.total, self.dim, &self.relative)
    }

    /// The Lefschetz square comparison `C(M) → hpb(C(M_0) ⊕ C(M_1) → C(M)^∨[1-n] ← 0)`.
    pub fn lefschetz_comparison(&self) -> Result<ChainMap> {
        let s = 1 - self.dim;
        let (wl, wr) = (self.left.duality_map(), self.right.duality_map());
        let ql = quadratic(&wl, &self.to_left, s);
        let qr = quadratic(&wr, &self.to_right, s);
        let h = oriented_homotopy(&self.relative_pairing(), &ql, &qr)?;
        cartesian_comparison(&wl, &wr, &self.to_left, &self.to_right, &h, s)
    }

    /// Poincaré–Lefschetz: the comparison is a quasi-isomorphism.
    pub fn is_oriented(&self) -> Result<bool> {
        Ok(self.lefschetz_comparison()?.is_quasi_iso())
    }
}

/// The correspondence `aksz(M_0) ← C(M) ⊗ V → aksz(M_1)` with isotropic structure from
/// the relative functional.
pub fn aksz_on_cospan(cospan: &CospanOfAlgebras, x: &SymplecticComplex) -> Result<Correspondence> {
    if !cospan.is_oriented()? {
        return invariant("cospan fails the orientation check");
    }
    let left = aksz_transgress(&cospan.left, x)?.object;
    let right = aksz_transgress(&cospan.right, x)?.object;
    let v = x.complex();
    let id = ChainMap::identity(v);
    let alpha = tensor_maps(&cospan.to_left, &id);
    let beta = tensor_maps(&cospan.to_right, &id);
    let h = tensor_form(cospan.total.complex(), &cospan.relative_pairing(), -cospan.dim, v, x.form().blocks(), x.shift());
    let s = left.shift();
    let ql = quadratic(&left.pairing(), &alpha, s);
    let qr = quadratic(&right.pairing(), &beta, s);
    let h = oriented_homotopy(&h, &ql, &qr)?;
    Correspondence::new(left, right, alpha, beta, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_transgression_is_the_identity() {
        let x = SymplecticComplex::standard();
        let t = aksz_transgress(&OrientedCochainAlgebra::point(), &x).unwrap();
        assert!(!t.presymplectic_only);
        assert_eq!(t.object, x);
    }

    #[test]
    fn formal_circle_shifts_down_by_one() {
        let t = OrientedCochainAlgebra::formal_circle();
        assert!(t.is_oriented());
        for x in [SymplecticComplex::standard(), SymplecticComplex::hyperbolic(1, 1).unwrap()] {
            let y = aksz_transgress(&t, &x).unwrap();
            assert_eq!(y.object.shift(), x.shift() - 1);
            assert!(y.object.is_symplectic(), "{:?}", y.object.check());
        }
    }

    #[test]
    fn identity_cospan_gives_identity_correspondence() {
        let foot = OrientedCochainAlgebra::formal_circle();
        let c = CospanOfAlgebras::identity(&foot);
        assert!(c.is_oriented().unwrap());
        let x = SymplecticComplex::standard();
        let corr = aksz_on_cospan(&c, &x).unwrap();
        let circle = aksz_transgress(&foot, &x).unwrap().object;
        assert_eq!(corr, Correspondence::identity(&circle));
    }

    #[test]
    fn empty_cospan() {
        let c = CospanOfAlgebras::empty(2);
        assert!(c.is_oriented().unwrap());
        let corr = aksz_on_cospan(&c, &SymplecticComplex::standard()).unwrap();
        assert!(corr.apex().is_zero());
        assert!(corr.is_lagrangian().unwrap());
    }

    #[test]
    fn broken_unit_is_rejected() {
        let c = RationalComplex::concentrated(0, 1);
        let err = CochainAlgebra::new(c, [((0, 0), Matrix::identity(1))].into(), vec![q(2)]);
        assert!(err.is_err());
    }
}
