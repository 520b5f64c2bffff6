//! Ordered simplicial complexes with signed top simplices, flat local systems and their
//! cochains.
//!
//! Simplices are strictly increasing lists of global vertex labels. Cochains of degree `k`
//! with coefficients of rank `r` are indexed by `simplex * r + component`, simplices in
//! lexicographic order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::error::{dim_err, invariant, Error, Result};
use crate::homlin::complex::{matrix_from_json, matrix_to_json, RationalComplex};
use crate::homlin::forms::BilinearForm;
use crate::homlin::map::ChainMap;
use crate::lag::CochainAlgebra;
use crate::linalg::Matrix;
use crate::rational::{q, sign, Q};

pub type Simplex = Vec<usize>;

/// A pure complex of dimension `dim` given by its signed top simplices, closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedSimplicialComplex {
    dim: usize,
    simplices: Vec<Vec<Simplex>>,
    signs: Vec<i64>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl OrientedSimplicialComplex {
    pub fn from_top(dim: usize, top: Vec<(Simplex, i64)>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (s, e) in top {
            if s.len() != dim + 1 || s.windows(2).any(|w| w[0] >= w[1]) {
                return dim_err(format!("{s:?} is not an increasing list of {} vertices", dim + 1));
            }
            if e != 1 && e != -1 {
                return invariant(format!("orientation sign {e} on {s:?}"));
            }
            if seen.insert(s.clone(), e).is_some() {
                return invariant(format!("{s:?} listed twice"));
            }
        }
        let mut levels: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
        levels[dim] = seen.keys().cloned().collect();
        for k in (1..=dim).rev() {
            let faces: Vec<Simplex> = levels[k].iter().flat_map(faces_of).collect();
            levels[k - 1].extend(faces);
        }
        let simplices: Vec<Vec<Simplex>> = levels.into_iter().map(|l| l.into_iter().collect()).collect();
        let signs = simplices[dim].iter().map(|s| seen[s]).collect();
        let index = simplices.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        Ok(OrientedSimplicialComplex { dim, simplices, signs, index })
    }

    pub fn empty(dim: usize) -> Self {
        Self::from_top(dim, vec![]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.simplices[self.dim].is_empty()
    }

    /// `k`-simplices in lexicographic order; empty above the dimension.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn position(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    /// Signed top simplices.
    pub fn top(&self) -> Vec<(Simplex, i64)> {
        self.simplices[self.dim].iter().cloned().zip(self.signs.iter().copied()).collect()
    }

    /// The orientation sign of a top simplex, `0` if absent.
    pub fn top_sign(&self, s: &[usize]) -> i64 {
        if s.len() != self.dim + 1 {
            return 0;
        }
        self.position(s).map_or(0, |i| self.signs[i])
    }

    /// `∂[M] = Σ_σ ε_σ Σ_i (-1)^i d_iσ`, zero coefficients dropped.
    pub fn boundary_chain(&self) -> BTreeMap<Simplex, i64> {
        let mut out: BTreeMap<Simplex, i64> = BTreeMap::new();
        if self.dim == 0 {
            return out;
        }
        for (s, e) in self.top() {
            for (i, f) in faces_of(&s).into_iter().enumerate() {
                *out.entry(f).or_default() += e * if i % 2 == 0 { 1 } else { -1 };
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// The fundamental chain as a map simplex ↦ sign.
    pub fn fundamental_chain(&self) -> BTreeMap<Simplex, i64> {
        self.top().into_iter().collect()
    }

    /// Codimension-one faces lying on more than two top simplices, or on two whose induced
    /// orientations do not cancel.
    pub fn orientation_defects(&self) -> Vec<(Simplex, i64)> {
        if self.dim == 0 {
            return vec![];
        }
        let mut incidence: BTreeMap<Simplex, Vec<i64>> = BTreeMap::new();
        for (s, e) in self.top() {
            for (i, f) in faces_of(&s).into_iter().enumerate() {
                incidence.entry(f).or_default().push(e * if i % 2 == 0 { 1 } else { -1 });
            }
        }
        incidence
            .into_iter()
            .filter(|(_, v)| v.len() > 2 || (v.len() == 2 && v[0] + v[1] != 0))
            .map(|(f, v)| (f, v.iter().sum()))
            .collect()
    }

    /// Every codimension-one face on exactly two top simplices with cancelling orientations.
    pub fn is_closed(&self) -> bool {
        self.orientation_defects().is_empty() && self.boundary_chain().is_empty()
    }

    pub fn is_subcomplex_of(&self, other: &OrientedSimplicialComplex) -> bool {
        self.simplices.iter().flatten().all(|s| other.position(s).is_some())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.top().into_iter().map(|(s, e)| json!({ "verts": s, "sign": e })).collect())
    }

    /// Parses a list of `{"verts": [...], "sign": ±1}`; all cells must have `dim + 1` vertices.
    pub fn from_json(dim: usize, v: &Value) -> Result<Self> {
        let cells = v.as_array().ok_or_else(|| Error::Parse("expected a list of cells".into()))?;
        let mut top = Vec::new();
        for (i, c) in cells.iter().enumerate() {
            let bad = || Error::Parse(format!("cell {i}: expected {{\"verts\": [..], \"sign\": ±1}}"));
            let verts: Simplex = serde_json::from_value(c.get("verts").cloned().ok_or_else(bad)?).map_err(|_| bad())?;
            let e = c.get("sign").and_then(Value::as_i64).ok_or_else(bad)?;
            top.push((verts, e));
        }
        Self::from_top(dim, top)
    }
}

fn faces_of(s: &Simplex) -> Vec<Simplex> {
    (0..s.len())
        .map(|i| {
            let mut f = s.clone();
            f.remove(i);
            f
        })
        .collect()
}

/// A flat system of rank `r`: an invertible `g(u, v): E_u → E_v` per edge `u < v`, identity
/// where unspecified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLocalSystem {
    rank: usize,
    edges: BTreeMap<(usize, usize), Matrix>,
}

impl FlatLocalSystem {
    pub fn trivial(rank: usize) -> Self {
        FlatLocalSystem { rank, edges: BTreeMap::new() }
    }

    pub fn new(rank: usize, edges: BTreeMap<(usize, usize), Matrix>) -> Result<Self> {
        for (&(u, v), g) in &edges {
            if u >= v {
                return invariant(format!("edge ({u}, {v}) must be listed with u < v"));
            }
            if g.shape() != (rank, rank) || g.inverse().is_none() {
                return invariant(format!("transport along ({u}, {v}) is not an invertible {rank}×{rank} matrix"));
            }
        }
        Ok(FlatLocalSystem { rank, edges })
    }

    /// Rank one with `g(u, v) = m` on the given edge.
    pub fn rank_one(edge: (usize, usize), m: Q) -> Result<Self> {
        Self::new(1, [(edge, Matrix::scalar(1, &m))].into())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn transport(&self, u: usize, v: usize) -> Matrix {
        if u == v {
            return Matrix::identity(self.rank);
        }
        self.edges.get(&(u, v)).cloned().unwrap_or_else(|| Matrix::identity(self.rank))
    }

    fn transport_back(&self, u: usize, v: usize) -> Matrix {
        self.transport(u, v).inverse().expect("validated invertible")
    }

    /// `g_02 = g_12 g_01` on every 2-simplex.
    pub fn check_cocycle(&self, m: &OrientedSimplicialComplex) -> Result<()> {
        for s in m.simplices(2) {
            let (a, b, c) = (s[0], s[1], s[2]);
            if self.transport(a, c) != self.transport(b, c).mul(&self.transport(a, b)) {
                return invariant(format!("cocycle condition fails on {s:?}"));
            }
        }
        Ok(())
    }

    /// `E^∨` with transport `(g^{-1})^T`.
    pub fn dual(&self) -> Self {
        let edges = self.edges.iter().map(|(&e, g)| (e, g.inverse().expect("invertible").transpose())).collect();
        FlatLocalSystem { rank: self.rank, edges }
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.values().all(|g| *g == Matrix::identity(self.rank))
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|(&(u, v), g)| json!({ "from": u, "to": v, "matrix": matrix_to_json(g) }))
            .collect();
        json!({ "rank": self.rank, "edges": edges })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("local system: {m}"));
        let rank = v.get("rank").and_then(Value::as_u64).ok_or_else(|| bad("missing rank"))? as usize;
        let mut edges = BTreeMap::new();
        for e in v.get("edges").and_then(Value::as_array).into_iter().flatten() {
            let u = e.get("from").and_then(Value::as_u64).ok_or_else(|| bad("edge without \"from\""))? as usize;
            let w = e.get("to").and_then(Value::as_u64).ok_or_else(|| bad("edge without \"to\""))? as usize;
            let m = matrix_from_json(e.get("matrix").ok_or_else(|| bad("edge without matrix"))?, rank, rank)?;
            edges.insert((u, w), m);
        }
        Self::new(rank, edges)
    }
}

/// `C^*(M; E)`: `δf(σ) = g(v_0, v_1)^{-1} f(d_0σ) + Σ_{i≥1} (-1)^i f(d_iσ)`, values in `E_{v_0}`.
pub fn cochains(m: &OrientedSimplicialComplex, e: &FlatLocalSystem) -> Result<RationalComplex> {
    e.check_cocycle(m)?;
    let r = e.rank();
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for k in 0..=m.dim() {
        dims.push((k as i32, m.count(k) * r));
        if k == m.dim() || m.count(k + 1) == 0 {
            continue;
        }
        let mut trip = Vec::new();
        for (row, s) in m.simplices(k + 1).iter().enumerate() {
            for (i, f) in faces_of(s).into_iter().enumerate() {
                let col = m.position(&f).expect("closed under faces");
                let block = if i == 0 { e.transport_back(s[0], s[1]) } else { Matrix::scalar(r, &sign(i as i64)) };
                trip.extend(block.triplets().map(|(a, b, x)| (row * r + a, col * r + b, x.clone())));
            }
        }
        diffs.push((k as i32, Matrix::from_triplets(m.count(k + 1) * r, m.count(k) * r, trip)));
    }
    RationalComplex::from_parts(&dims, diffs)
}

pub fn trivial_cochains(m: &OrientedSimplicialComplex) -> RationalComplex {
    cochains(m, &FlatLocalSystem::trivial(1)).expect("trivial system is flat")
}

/// Cup product on `C^*(M; ℚ)` by front and back faces, with unit the constant cochain `1`.
pub fn cochain_algebra(m: &OrientedSimplicialComplex) -> Result<CochainAlgebra> {
    let c = trivial_cochains(m);
    let mut products = BTreeMap::new();
    for p in 0..=m.dim() {
        for qd in 0..=m.dim() - p {
            let (dp, dq) = (m.count(p), m.count(qd));
            let trip: Vec<(usize, usize, Q)> = m
                .simplices(p + qd)
                .iter()
                .enumerate()
                .map(|(row, s)| {
                    let front = m.position(&s[..=p]).expect("face");
                    let back = m.position(&s[p..]).expect("face");
                    (row, front * dq + back, q(1))
                })
                .collect();
            products.insert((p as i32, qd as i32), Matrix::from_triplets(m.count(p + qd), dp * dq, trip));
        }
    }
    let unit = vec![q(1); m.count(0)];
    CochainAlgebra::new(c, products, unit)
}

/// `[M](ω) = Σ_σ ε_σ ω(σ)` on top-degree cochains.
pub fn fundamental_functional(m: &OrientedSimplicialComplex) -> Vec<Q> {
    m.top().into_iter().map(|(_, e)| q(e)).collect()
}

/// `(x, y) ↦ T(x ∪ y)` on `C(M; E^∨) × C(M; E)`, for `T` a functional on `n`-simplices of `M`,
/// with `x ∪ y (σ) = ⟨x(front), g(v_0, v_p)^{-1} y(back)⟩`. Shift `-n`.
pub fn cup_pairing(m: &OrientedSimplicialComplex, e: &FlatLocalSystem, n: usize, t: &[Q]) -> Result<BilinearForm> {
    if t.len() != m.count(n) {
        return dim_err("functional does not match the number of simplices");
    }
    let left = cochains(m, &e.dual())?;
    let right = cochains(m, e)?;
    let r = e.rank();
    let mut blocks = BTreeMap::new();
    for a in 0..=n.min(m.dim()) {
        let b = n - a;
        let mut trip = Vec::new();
        for (s, w) in m.simplices(n).iter().zip(t) {
            if *w == q(0) {
                continue;
            }
            let front = m.position(&s[..=a]).expect("face");
            let back = m.position(&s[a..]).expect("face");
            let g = e.transport_back(s[0], s[a]).scale(w);
            // entry [y-index][x-index] = ⟨e_i, g e_j⟩ = g[i][j]
            trip.extend(g.triplets().map(|(i, j, x)| (back * r + j, front * r + i, x.clone())));
        }
        blocks.insert(a as i32, Matrix::from_triplets(m.count(b) * r, m.count(a) * r, trip));
    }
    BilinearForm::new(left, right, -(n as i32), blocks)
}

/// Restriction `C(M; E) → C(N; E)` to a subcomplex.
pub fn restriction(m: &OrientedSimplicialComplex, n: &OrientedSimplicialComplex, e: &FlatLocalSystem) -> Result<ChainMap> {
    if !n.is_subcomplex_of(m) {
        return invariant("restriction to something that is not a subcomplex");
    }
    let r = e.rank();
    let mut maps = BTreeMap::new();
    for k in 0..=n.dim().min(m.dim()) {
        let trip: Vec<(usize, usize, Q)> = n
            .simplices(k)
            .iter()
            .enumerate()
            .flat_map(|(row, s)| {
                let col = m.position(s).expect("subcomplex");
                (0..r).map(move |a| (row * r + a, col * r + a, q(1)))
            })
            .collect();
        maps.insert(k as i32, Matrix::from_triplets(n.count(k) * r, m.count(k) * r, trip));
    }
    ChainMap::new(cochains(m, e)?, cochains(n, e)?, maps)
}

/// `f^*: C(N) → C(M)` for a vertex map `f` that is weakly increasing on every simplex of `M`
/// and sends simplices to simplices; degenerate images contribute zero.
pub fn pullback(m: &OrientedSimplicialComplex, n: &OrientedSimplicialComplex, f: &BTreeMap<usize, usize>) -> Result<ChainMap> {
    let mut maps = BTreeMap::new();
    for k in 0..=m.dim() {
        let mut trip = Vec::new();
        for (row, s) in m.simplices(k).iter().enumerate() {
            let img: Vec<usize> = s.iter().map(|v| f.get(v).copied().ok_or_else(|| Error::Invariant(format!("vertex {v} has no image")))).collect::<Result<_>>()?;
            if img.windows(2).any(|w| w[0] > w[1]) {
                return invariant(format!("vertex map is not increasing on {s:?}"));
            }
            if img.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let col = n.position(&img).ok_or_else(|| Error::Invariant(format!("{img:?} is not a simplex of the target")))?;
            trip.push((row, col, q(1)));
        }
        maps.insert(k as i32, Matrix::from_triplets(m.count(k), n.count(k), trip));
    }
    ChainMap::new(trivial_cochains(n), trivial_cochains(m), maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> OrientedSimplicialComplex {
        OrientedSimplicialComplex::from_top(1, vec![(vec![0, 1], 1), (vec![1, 2], 1), (vec![0, 2], -1)]).unwrap()
    }

    #[test]
    fn circle_cohomology() {
        let c = circle();
        assert!(c.is_closed());
        assert_eq!(trivial_cochains(&c).homology(), [(0, 1), (1, 1)].into());
        let e = FlatLocalSystem::rank_one((0, 2), q(2)).unwrap();
        assert!(cochains(&c, &e).unwrap().is_acyclic());
        assert!(cochains(&c, &e.dual()).unwrap().is_acyclic());
    }

    #[test]
    fn point() {
        let p = OrientedSimplicialComplex::from_top(0, vec![(vec![7], 1)]).unwrap();
        assert_eq!(trivial_cochains(&p), RationalComplex::concentrated(0, 1));
        assert_eq!(cochain_algebra(&p).unwrap(), CochainAlgebra::point());
    }

    #[test]
    fn fundamental_class_kills_exact_cochains_on_closed_circle() {
        let c = circle();
        let d = trivial_cochains(&c).diff(0);
        let t = fundamental_functional(&c);
        for j in 0..3 {
            assert_eq!(d.column(j).iter().zip(&t).map(|(a, b)| a * b).sum::<Q>(), q(0));
        }
    }

    #[test]
    fn one_edge_stokes() {
        let i = OrientedSimplicialComplex::from_top(1, vec![(vec![0, 1], 1)]).unwrap();
        assert_eq!(i.boundary_chain(), [(vec![1], 1), (vec![0], -1)].into());
        let d = trivial_cochains(&i).diff(0);
        assert_eq!(d.row(0).len(), 2);
        assert_eq!((d.get(0, 1), d.get(0, 0)), (q(1), q(-1)));
    }

    #[test]
    fn cup_pairing_is_closed() {
        let c = circle();
        let t = fundamental_functional(&c);
        for e in [FlatLocalSystem::trivial(1), FlatLocalSystem::rank_one((0, 2), q(2)).unwrap()] {
            let b = cup_pairing(&c, &e, 1, &t).unwrap();
            assert!(b.is_closed());
        }
        let trivial = cup_pairing(&c, &FlatLocalSystem::trivial(1), 1, &t).unwrap();
        assert!(trivial.is_nondegenerate());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(OrientedSimplicialComplex::from_top(1, vec![(vec![1, 0], 1)]).is_err());
        assert!(OrientedSimplicialComplex::from_top(1, vec![(vec![0, 1], 2)]).is_err());
        assert!(FlatLocalSystem::rank_one((0, 1), q(0)).is_err());
        let tri = OrientedSimplicialComplex::from_top(2, vec![(vec![0, 1, 2], 1)]).unwrap();
        let bad = FlatLocalSystem::rank_one((0, 1), q(3)).unwrap();
        assert!(cochains(&tri, &bad).is_err());
    }
}
