//! Chain maps and chain homotopies.

use std::collections::BTreeMap;

use crate::error::{dim_err, invariant, Result};
use crate::homlin::complex::RationalComplex;
use crate::linalg::Matrix;
use crate::rational::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: RationalComplex,
    target: RationalComplex,
    maps: BTreeMap<i32, Matrix>,
}

fn degree_union(a: &RationalComplex, b: &RationalComplex) -> Vec<i32> {
    let mut v: Vec<i32> = a.dims().keys().chain(b.dims().keys()).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl ChainMap {
    /// Checks shapes and `d f = f d`.
    pub fn new(source: RationalComplex, target: RationalComplex, maps: BTreeMap<i32, Matrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, maps);
        for (&n, m) in &f.maps {
            if m.shape() != (f.target.dim(n), f.source.dim(n)) {
                return dim_err(format!(
                    "map component {n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (f.target.dim(n), f.source.dim(n))
                ));
            }
        }
        if let Some(n) = f.commutator_failure() {
            return invariant(format!("not a chain map: d f != f d in degree {n}"));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: RationalComplex, target: RationalComplex, mut maps: BTreeMap<i32, Matrix>) -> Self {
        maps.retain(|_, m| !m.is_zero());
        ChainMap { source, target, maps }
    }

    fn commutator_failure(&self) -> Option<i32> {
        for n in degree_union(&self.source, &self.target) {
            let lhs = self.target.diff(n).mul(&self.component(n));
            let rhs = self.component(n + 1).mul(&self.source.diff(n));
            if lhs != rhs {
                return Some(n);
            }
        }
        None
    }

    pub fn identity(c: &RationalComplex) -> Self {
        let maps = c.dims().iter().map(|(&n, &k)| (n, Matrix::identity(k))).collect();
        Self::new_unchecked(c.clone(), c.clone(), maps)
    }

    pub fn zero(source: &RationalComplex, target: &RationalComplex) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn source(&self) -> &RationalComplex {
        &self.source
    }

    pub fn target(&self) -> &RationalComplex {
        &self.target
    }

    pub fn component(&self, n: i32) -> Matrix {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(n), self.source.dim(n)))
    }

    pub fn components(&self) -> &BTreeMap<i32, Matrix> {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return dim_err("compose: target of first map differs from source of second");
        }
        Ok(self.compose_unchecked(first))
    }

    pub(crate) fn compose_unchecked(&self, first: &ChainMap) -> ChainMap {
        let maps = first
            .maps
            .iter()
            .filter_map(|(&n, m)| self.maps.get(&n).map(|g| (n, g.mul(m))))
            .collect();
        Self::new_unchecked(first.source.clone(), self.target.clone(), maps)
    }

    fn combine(&self, other: &ChainMap, c: &Q) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return dim_err("chain map arithmetic: endpoints differ");
        }
        let maps = degree_union(&self.source, &self.target)
            .into_iter()
            .map(|n| (n, self.component(n).add(&other.component(n).scale(c))))
            .collect();
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), maps))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, &q(1))
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.combine(other, &q(-1))
    }

    pub fn scale(&self, c: &Q) -> ChainMap {
        let maps = self.maps.iter().map(|(&n, m)| (n, m.scale(c))).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(&q(-1))
    }

    /// `f[k]^n = f^{n+k}`, no sign.
    pub fn shift(&self, k: i32) -> ChainMap {
        let maps = self.maps.iter().map(|(&n, m)| (n - k, m.clone())).collect();
        Self::new_unchecked(self.source.shift(k), self.target.shift(k), maps)
    }

    /// `f^∨ : T^∨ → S^∨` with component `(f^{-k})^T` in degree `k`.
    pub fn dual(&self) -> ChainMap {
        let maps = self.maps.iter().map(|(&n, m)| (-n, m.transpose())).collect();
        Self::new_unchecked(self.target.dual(), self.source.dual(), maps)
    }

    pub fn is_quasi_iso(&self) -> bool {
        crate::homlin::ops::cone(self).is_acyclic()
    }

    /// Ranks of the induced maps on homology, computed without the cone.
    pub fn homology_ranks(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for n in degree_union(&self.source, &self.target) {
            let z = self.source.cocycles(n);
            let img = self.component(n).mul(&z);
            let b = self.target.diff(n - 1);
            let r = Matrix::hstack(&[&b, &img]).rank() - b.rank();
            if r > 0 {
                out.insert(n, r);
            }
        }
        out
    }

    /// Homotopy-invariant check that does not go through the cone: ranks match both homologies.
    pub fn is_quasi_iso_by_ranks(&self) -> bool {
        let hs = self.source.homology();
        let ht = self.target.homology();
        hs == ht && self.homology_ranks() == hs
    }
}

/// `h^n : S^n → T^{n-1}` witnessing `d h + h d = g - f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainHomotopy {
    f: ChainMap,
    g: ChainMap,
    maps: BTreeMap<i32, Matrix>,
}

/// `d h + h d` for a family of degree −1 maps.
pub fn homotopy_boundary(
    source: &RationalComplex,
    target: &RationalComplex,
    h: &BTreeMap<i32, Matrix>,
) -> BTreeMap<i32, Matrix> {
    let comp = |n: i32| {
        h.get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(target.dim(n - 1), source.dim(n)))
    };
    degree_union(source, target)
        .into_iter()
        .map(|n| {
            let a = target.diff(n - 1).mul(&comp(n));
            let b = comp(n + 1).mul(&source.diff(n));
            (n, a.add(&b))
        })
        .collect()
}

impl ChainHomotopy {
    pub fn new(f: ChainMap, g: ChainMap, maps: BTreeMap<i32, Matrix>) -> Result<Self> {
        if f.source != g.source || f.target != g.target {
            return dim_err("homotopy: f and g have different endpoints");
        }
        for (&n, m) in &maps {
            if m.shape() != (f.target.dim(n - 1), f.source.dim(n)) {
                return dim_err(format!("homotopy component {n} has shape {:?}", m.shape()));
            }
        }
        let bd = homotopy_boundary(&f.source, &f.target, &maps);
        let diff = g.sub(&f)?;
        for (n, m) in bd {
            if m != diff.component(n) {
                return invariant(format!("d h + h d != g - f in degree {n}"));
            }
        }
        Ok(ChainHomotopy { f, g, maps })
    }

    pub fn component(&self, n: i32) -> Matrix {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.f.target.dim(n - 1), self.f.source.dim(n)))
    }

    pub fn components(&self) -> &BTreeMap<i32, Matrix> {
        &self.maps
    }

    pub fn endpoints(&self) -> (&ChainMap, &ChainMap) {
        (&self.f, &self.g)
    }
}

/// Finds `h` with `d h + h d = phi` (so `phi` is null-homotopic), if one exists.
pub fn solve_null_homotopy(phi: &ChainMap) -> Option<BTreeMap<i32, Matrix>> {
    let s = phi.source();
    let t = phi.target();
    let degs = degree_union(s, t);
    // unknowns: entries of h^n for every n with S^n and T^{n-1} nonzero
    let mut offsets: BTreeMap<i32, usize> = BTreeMap::new();
    let mut nvars = 0;
    for &n in &degs {
        let (r, c) = (t.dim(n - 1), s.dim(n));
        if r * c > 0 {
            offsets.insert(n, nvars);
            nvars += r * c;
        }
    }
    let var = |n: i32, i: usize, j: usize| offsets.get(&n).map(|o| o + i * s.dim(n) + j);
    let mut trip = Vec::new();
    let mut rhs = Vec::new();
    let mut row = 0;
    for &n in &degs {
        let (rows, cols) = (t.dim(n), s.dim(n));
        if rows * cols == 0 {
            continue;
        }
        let dt = t.diff(n - 1);
        let ds = s.diff(n);
        let target = phi.component(n);
        for i in 0..rows {
            for j in 0..cols {
                // (dt h^n)_{ij} = Σ_k dt[i][k] h^n[k][j]
                for (k, v) in dt.row(i) {
                    if let Some(x) = var(n, *k, j) {
                        trip.push((row, x, v.clone()));
                    }
                }
                // (h^{n+1} ds)_{ij} = Σ_k h^{n+1}[i][k] ds[k][j]
                if offsets.contains_key(&(n + 1)) {
                    for k in 0..s.dim(n + 1) {
                        let v = ds.get(k, j);
                        if v != q(0) {
                            trip.push((row, var(n + 1, i, k).unwrap(), v));
                        }
                    }
                }
                rhs.push((row, 0, target.get(i, j)));
                row += 1;
            }
        }
    }
    let a = Matrix::from_triplets(row, nvars, trip);
    let b = Matrix::from_triplets(row, 1, rhs);
    let x = a.solve(&b)?;
    let mut out = BTreeMap::new();
    for (&n, &o) in &offsets {
        let (r, c) = (t.dim(n - 1), s.dim(n));
        let m = Matrix::from_triplets(r, c, (0..r * c).map(|k| (k / c, k % c, x.get(o + k, 0))));
        if !m.is_zero() {
            out.insert(n, m);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> RationalComplex {
        RationalComplex::from_parts(&[(0, 1), (1, 1)], vec![(0, Matrix::from_i64(1, 1, &[&[1]]))]).unwrap()
    }

    #[test]
    fn rejects_non_chain_maps() {
        let c = line();
        let p = RationalComplex::concentrated(0, 1);
        // inclusion of degree 0 into an acyclic complex is not a chain map
        let maps = [(0, Matrix::identity(1))].into();
        assert!(ChainMap::new(p.clone(), c.clone(), maps).is_err());
        let maps = [(1, Matrix::identity(1))].into();
        assert!(ChainMap::new(RationalComplex::concentrated(1, 1), c, maps).is_ok());
    }

    #[test]
    fn identity_on_contractible_is_null_homotopic() {
        let c = line();
        let id = ChainMap::identity(&c);
        let h = solve_null_homotopy(&id).expect("contractible");
        let z = ChainMap::zero(&c, &c);
        assert!(ChainHomotopy::new(z, id, h).is_ok());
        let p = RationalComplex::concentrated(0, 1);
        assert!(solve_null_homotopy(&ChainMap::identity(&p)).is_none());
    }

    #[test]
    fn quasi_iso_two_ways() {
        let p = RationalComplex::concentrated(0, 2);
        let two = ChainMap::identity(&p).scale(&q(2));
        assert!(two.is_quasi_iso());
        assert!(two.is_quasi_iso_by_ranks());
        let z = ChainMap::zero(&p, &p);
        assert!(!z.is_quasi_iso());
        assert!(!z.is_quasi_iso_by_ranks());
    }

    #[test]
    fn dual_of_composite() {
        let c = line();
        let id = ChainMap::identity(&c);
        let d = id.dual();
        assert_eq!(d.source(), &c.dual());
        assert_eq!(d, ChainMap::identity(&c.dual()));
    }
}
