//! Cones, fibers, homotopy pullbacks, sums and tensor products.

use std::collections::BTreeMap;

use crate::error::{dim_err, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::map::ChainMap;
use crate::linalg::Matrix;
use crate::rational::{sign, Q};

fn span(cs: &[&RationalComplex]) -> Option<(i32, i32)> {
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for c in cs {
        if let Some((a, b)) = c.range() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Degree `n`: `target^n ⊕ source^{n+1}`, `d(b, a) = (f a + d b, -d a)`.
pub fn cone(f: &ChainMap) -> RationalComplex {
    let s = f.source();
    let t = f.target();
    let Some((lo, hi)) = span(&[t, &s.shift(1)]) else {
        return RationalComplex::zero();
    };
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    for n in lo..=hi {
        dims.insert(n, t.dim(n) + s.dim(n + 1));
    }
    for n in lo..hi {
        let (tn, sn1) = (t.dim(n), s.dim(n + 1));
        let (tn1, sn2) = (t.dim(n + 1), s.dim(n + 2));
        let mut m = Matrix::zeros(tn1 + sn2, tn + sn1);
        m.add_block(0, 0, &t.diff(n));
        m.add_block(0, tn, &f.component(n + 1));
        m.add_block(tn1, tn, &s.diff(n + 1).neg());
        d.insert(n, m);
    }
    RationalComplex::new_unchecked(dims, d)
}

/// `cone(f)[-1]`: degree `n` is `target^{n-1} ⊕ source^n`.
pub fn fiber(f: &ChainMap) -> RationalComplex {
    cone(f).shift(-1)
}

/// The inclusion `target → cone(f)`.
pub fn cone_inclusion(f: &ChainMap) -> ChainMap {
    let c = cone(f);
    let t = f.target();
    let maps = t
        .dims()
        .iter()
        .map(|(&n, &k)| {
            let mut m = Matrix::zeros(c.dim(n), k);
            m.add_block(0, 0, &Matrix::identity(k));
            (n, m)
        })
        .collect();
    ChainMap::new_unchecked(t.clone(), c, maps)
}

/// Homotopy pullback of `f: A → C ← B: g` with its two projections.
#[derive(Clone, Debug)]
pub struct Hpb {
    pub complex: RationalComplex,
    pub to_left: ChainMap,
    pub to_right: ChainMap,
    left: RationalComplex,
    right: RationalComplex,
    base: RationalComplex,
}

impl Hpb {
    /// Offsets `(a, b, c)` of the three blocks in degree `n`.
    pub fn offsets(&self, n: i32) -> (usize, usize, usize) {
        (0, self.left.dim(n), self.left.dim(n) + self.right.dim(n))
    }

    /// Comparison `x ↦ (ρ_l x, ρ_r x, K x)`, requiring `f ρ_l - g ρ_r = dK + Kd`.
    pub fn compare(
        &self,
        rho_left: &ChainMap,
        rho_right: &ChainMap,
        homotopy: &BTreeMap<i32, Matrix>,
    ) -> Result<ChainMap> {
        let x = rho_left.source().clone();
        if rho_right.source() != &x {
            return dim_err("hpb comparison: legs have different sources");
        }
        let mut maps = BTreeMap::new();
        let Some((lo, hi)) = span(&[&x]) else {
            return Ok(ChainMap::zero(&x, &self.complex));
        };
        for n in lo..=hi {
            let (oa, ob, oc) = self.offsets(n);
            let mut m = Matrix::zeros(self.complex.dim(n), x.dim(n));
            m.add_block(oa, 0, &rho_left.component(n));
            m.add_block(ob, 0, &rho_right.component(n));
            if let Some(k) = homotopy.get(&n) {
                if k.shape() != (self.base.dim(n - 1), x.dim(n)) {
                    return dim_err(format!("hpb comparison: homotopy in degree {n} has shape {:?}", k.shape()));
                }
                m.add_block(oc, 0, k);
            }
            maps.insert(n, m);
        }
        ChainMap::new(x, self.complex.clone(), maps)
    }
}

/// Degree `n`: `A^n ⊕ B^n ⊕ C^{n-1}`, `d(a,b,c) = (da, db, f a - g b - dc)`.
pub fn hpb(f: &ChainMap, g: &ChainMap) -> Result<Hpb> {
    if f.target() != g.target() {
        return dim_err("hpb: maps have different targets");
    }
    let (a, b, c) = (f.source(), g.source(), f.target());
    let c1 = c.shift(-1);
    let Some((lo, hi)) = span(&[a, b, &c1]) else {
        let z = RationalComplex::zero();
        return Ok(Hpb {
            complex: z.clone(),
            to_left: ChainMap::zero(&z, a),
            to_right: ChainMap::zero(&z, b),
            left: a.clone(),
            right: b.clone(),
            base: c.clone(),
        });
    };
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    for n in lo..=hi {
        dims.insert(n, a.dim(n) + b.dim(n) + c.dim(n - 1));
    }
    for n in lo..hi {
        let (an, bn, cn) = (a.dim(n), b.dim(n), c.dim(n - 1));
        let (an1, bn1, cn1) = (a.dim(n + 1), b.dim(n + 1), c.dim(n));
        let mut m = Matrix::zeros(an1 + bn1 + cn1, an + bn + cn);
        m.add_block(0, 0, &a.diff(n));
        m.add_block(an1, an, &b.diff(n));
        m.add_block(an1 + bn1, 0, &f.component(n));
        m.add_block(an1 + bn1, an, &g.component(n).neg());
        m.add_block(an1 + bn1, an + bn, &c.diff(n - 1).neg());
        d.insert(n, m);
    }
    let complex = RationalComplex::new_unchecked(dims, d);
    let proj = |target: &RationalComplex, off: &dyn Fn(i32) -> usize| {
        let maps = target
            .dims()
            .iter()
            .map(|(&n, &k)| {
                let mut m = Matrix::zeros(k, complex.dim(n));
                m.add_block(0, off(n), &Matrix::identity(k));
                (n, m)
            })
            .collect();
        ChainMap::new_unchecked(complex.clone(), target.clone(), maps)
    };
    let to_left = proj(a, &|_| 0);
    let to_right = proj(b, &|n| a.dim(n));
    Ok(Hpb { complex, to_left, to_right, left: a.clone(), right: b.clone(), base: c.clone() })
}

/// Map from `X` into `⊕ T_i` with components `f_i`.
pub fn map_into_sum(source: &RationalComplex, parts: &[&ChainMap]) -> Result<ChainMap> {
    for p in parts {
        if p.source() != source {
            return dim_err("map_into_sum: mismatched source");
        }
    }
    let targets: Vec<&RationalComplex> = parts.iter().map(|p| p.target()).collect();
    let target = RationalComplex::direct_sum(&targets);
    let mut maps = BTreeMap::new();
    for (&n, &k) in source.dims() {
        let offs = RationalComplex::sum_offsets(&targets, n);
        let mut m = Matrix::zeros(target.dim(n), k);
        for (p, o) in parts.iter().zip(offs) {
            m.add_block(o, 0, &p.component(n));
        }
        maps.insert(n, m);
    }
    Ok(ChainMap::new_unchecked(source.clone(), target, maps))
}

/// Map from `⊕ S_i` to `T` with components `f_i`.
pub fn map_from_sum(target: &RationalComplex, parts: &[&ChainMap]) -> Result<ChainMap> {
    for p in parts {
        if p.target() != target {
            return dim_err("map_from_sum: mismatched target");
        }
    }
    let sources: Vec<&RationalComplex> = parts.iter().map(|p| p.source()).collect();
    let source = RationalComplex::direct_sum(&sources);
    let mut maps = BTreeMap::new();
    for (&n, &k) in source.dims() {
        let offs = RationalComplex::sum_offsets(&sources, n);
        let mut m = Matrix::zeros(target.dim(n), k);
        for (p, o) in parts.iter().zip(offs) {
            m.add_block(0, o, &p.component(n));
        }
        maps.insert(n, m);
    }
    Ok(ChainMap::new_unchecked(source, target.clone(), maps))
}

/// `⊕ f_i : ⊕ S_i → ⊕ T_i`.
pub fn sum_of_maps(parts: &[&ChainMap]) -> ChainMap {
    let sources: Vec<&RationalComplex> = parts.iter().map(|p| p.source()).collect();
    let targets: Vec<&RationalComplex> = parts.iter().map(|p| p.target()).collect();
    let s = RationalComplex::direct_sum(&sources);
    let t = RationalComplex::direct_sum(&targets);
    let maps = s
        .dims()
        .keys()
        .map(|&n| {
            let blocks: Vec<Matrix> = parts.iter().map(|p| p.component(n)).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            (n, Matrix::block_diag(&refs))
        })
        .collect();
    ChainMap::new_unchecked(s, t, maps)
}

/// Projection from `⊕ parts` onto summand `i`.
pub fn sum_projection(parts: &[&RationalComplex], i: usize) -> ChainMap {
    let s = RationalComplex::direct_sum(parts);
    let maps = parts[i]
        .dims()
        .iter()
        .map(|(&n, &k)| {
            let o = RationalComplex::sum_offsets(parts, n)[i];
            let mut m = Matrix::zeros(k, s.dim(n));
            m.add_block(0, o, &Matrix::identity(k));
            (n, m)
        })
        .collect();
    ChainMap::new_unchecked(s, parts[i].clone(), maps)
}

/// Inclusion of summand `i` into `⊕ parts`.
pub fn sum_inclusion(parts: &[&RationalComplex], i: usize) -> ChainMap {
    let s = RationalComplex::direct_sum(parts);
    let maps = parts[i]
        .dims()
        .iter()
        .map(|(&n, &k)| {
            let o = RationalComplex::sum_offsets(parts, n)[i];
            let mut m = Matrix::zeros(s.dim(n), k);
            m.add_block(o, 0, &Matrix::identity(k));
            (n, m)
        })
        .collect();
    ChainMap::new_unchecked(parts[i].clone(), s, maps)
}

pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (br, bc) = b.shape();
    Matrix::from_triplets(
        a.nrows() * br,
        a.ncols() * bc,
        a.triplets().flat_map(|(i, j, x)| {
            b.triplets()
                .map(move |(k, l, y)| (i * br + k, j * bc + l, x * y))
                .collect::<Vec<_>>()
        }),
    )
}

/// Basis bookkeeping for `A ⊗ B`: degree `n` is `⊕_{p+q=n} A^p ⊗ B^q`,
/// blocks ordered by increasing `p`, `a ⊗ b` at `offset + i * dim B^q + j`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    a: RationalComplex,
    b: RationalComplex,
}

impl TensorLayout {
    pub fn new(a: &RationalComplex, b: &RationalComplex) -> Self {
        TensorLayout { a: a.clone(), b: b.clone() }
    }

    /// Pairs `(p, offset)` for the blocks of total degree `n`.
    pub fn blocks(&self, n: i32) -> Vec<(i32, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for (&p, &da) in self.a.dims() {
            let db = self.b.dim(n - p);
            if db > 0 {
                out.push((p, off));
                off += da * db;
            }
        }
        out
    }

    pub fn dim(&self, n: i32) -> usize {
        self.blocks(n).iter().map(|&(p, _)| self.a.dim(p) * self.b.dim(n - p)).sum()
    }

    pub fn index(&self, p: i32, i: usize, q_deg: i32, j: usize) -> usize {
        let off = self
            .blocks(p + q_deg)
            .into_iter()
            .find(|&(pp, _)| pp == p)
            .map(|(_, o)| o)
            .expect("tensor block present");
        off + i * self.b.dim(q_deg) + j
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut v = Vec::new();
        for &p in self.a.dims().keys() {
            for &qq in self.b.dims().keys() {
                v.push(p + qq);
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Koszul tensor product: `d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db`.
pub fn tensor(a: &RationalComplex, b: &RationalComplex) -> RationalComplex {
    let lay = TensorLayout::new(a, b);
    let degs = lay.degrees();
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    for &n in &degs {
        dims.insert(n, lay.dim(n));
    }
    for &n in &degs {
        let rows = lay.dim(n + 1);
        if rows == 0 {
            continue;
        }
        let mut m = Matrix::zeros(rows, lay.dim(n));
        for (p, off) in lay.blocks(n) {
            let qd = n - p;
            let ib = Matrix::identity(b.dim(qd));
            let ia = Matrix::identity(a.dim(p));
            if a.dim(p + 1) > 0 {
                let o = lay.index(p + 1, 0, qd, 0);
                m.add_block(o, off, &kronecker(&a.diff(p), &ib));
            }
            if b.dim(qd + 1) > 0 {
                let o = lay.index(p, 0, qd + 1, 0);
                m.add_block(o, off, &kronecker(&ia, &b.diff(qd)).scale(&sign(p as i64)));
            }
        }
        d.insert(n, m);
    }
    RationalComplex::new_unchecked(dims, d)
}

/// `f ⊗ g` for degree-zero chain maps.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let sl = TensorLayout::new(f.source(), g.source());
    let tl = TensorLayout::new(f.target(), g.target());
    let s = tensor(f.source(), g.source());
    let t = tensor(f.target(), g.target());
    let mut maps = BTreeMap::new();
    for &n in s.dims().keys() {
        let mut m = Matrix::zeros(t.dim(n), s.dim(n));
        for (p, off) in sl.blocks(n) {
            let qd = n - p;
            if f.target().dim(p) > 0 && g.target().dim(qd) > 0 {
                let o = tl.index(p, 0, qd, 0);
                m.add_block(o, off, &kronecker(&f.component(p), &g.component(qd)));
            }
        }
        maps.insert(n, m);
    }
    ChainMap::new_unchecked(s, t, maps)
}

/// Constant multiple `c · id`.
pub fn scalar_map(c: &RationalComplex, x: &Q) -> ChainMap {
    ChainMap::identity(c).scale(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pt(deg: i32) -> RationalComplex {
        RationalComplex::concentrated(deg, 1)
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = RationalComplex::from_parts(&[(0, 2), (1, 1)], vec![(0, Matrix::from_i64(1, 2, &[&[1, 0]]))]).unwrap();
        let k = cone(&ChainMap::identity(&c));
        assert!(k.is_acyclic());
        assert_eq!(k.total_dim(), 6);
    }

    #[test]
    fn cone_of_zero_map_is_shift() {
        let a = RationalComplex::from_parts(&[(0, 1), (2, 3)], vec![]).unwrap();
        let z = RationalComplex::zero();
        let k = cone(&ChainMap::zero(&a, &z));
        assert_eq!(k.homology(), a.shift(1).homology());
    }

    #[test]
    fn cone_of_doubling_is_acyclic() {
        let p = pt(0);
        assert!(cone(&ChainMap::identity(&p).scale(&q(2))).is_acyclic());
    }

    #[test]
    fn hpb_examples() {
        let a = RationalComplex::from_parts(&[(0, 2), (1, 1)], vec![]).unwrap();
        let z = RationalComplex::zero();
        let h = hpb(&ChainMap::zero(&a, &z), &ChainMap::zero(&z, &z)).unwrap();
        assert_eq!(h.complex.homology(), a.homology());
        let c = pt(0);
        let h = hpb(&ChainMap::zero(&z, &c), &ChainMap::zero(&z, &c)).unwrap();
        assert_eq!(h.complex.homology(), c.shift(-1).homology());
        let id = ChainMap::identity(&c);
        let h = hpb(&id, &id).unwrap();
        assert_eq!(h.complex.homology(), c.homology());
        // diagonal comparison is a quasi-iso
        let cmp = h.compare(&id, &id, &BTreeMap::new()).unwrap();
        assert!(cmp.is_quasi_iso());
    }

    #[test]
    fn tensor_dims_and_square_zero() {
        let a = RationalComplex::from_parts(&[(0, 2), (1, 1)], vec![(0, Matrix::from_i64(1, 2, &[&[1, -1]]))]).unwrap();
        let t = tensor(&a, &a);
        assert_eq!(t.dims(), &[(0, 4), (1, 4), (2, 1)].into());
        assert!(RationalComplex::new(t.dims().clone(), (0..2).map(|n| (n, t.diff(n))).collect()).is_ok());
        assert_eq!(t.homology(), [(0, 1)].into());
        let f = tensor_maps(&ChainMap::identity(&a), &ChainMap::identity(&a));
        assert_eq!(f, ChainMap::identity(&t));
    }

    #[test]
    fn sums_and_projections() {
        let a = pt(0);
        let b = pt(1);
        let p = sum_projection(&[&a, &b], 1);
        let i = sum_inclusion(&[&a, &b], 1);
        assert_eq!(p.compose(&i).unwrap(), ChainMap::identity(&b));
        let into = map_into_sum(&a, &[&ChainMap::identity(&a), &ChainMap::zero(&a, &b)]).unwrap();
        assert_eq!(sum_projection(&[&a, &b], 0).compose(&into).unwrap(), ChainMap::identity(&a));
    }
}
