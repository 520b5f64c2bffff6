//! Spine and normalized (co)chain complexes, the diagrams `P_{j,l}` and the maps `ℓ`, `r`, `ζ`.
//!
//! Duals in this module use the geometric convention: `(C^∨)^k = (C^{-k})^*` with the
//! transposed differential and no sign. [`geometric_to_koszul`] converts to the Koszul dual
//! used elsewhere in the crate.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::error::{dim_err, invariant, Error, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::map::{ChainHomotopy, ChainMap};
use crate::homlin::ops::hpb;
use crate::linalg::Matrix;
use crate::rational::{q, sign, Q};
use crate::shape::delta::DeltaMorphism;
use crate::shape::shapes::sd_faces;

/// `(C^∨)^k = (C^{-k})^*`, `d^k = (d^{-k-1})^T`.
pub fn geometric_dual(c: &RationalComplex) -> RationalComplex {
    let dims = c.dims().iter().map(|(&n, &d)| (-n, d)).collect();
    let d = c.diff_iter().map(|(&n, m)| (-n - 1, m.transpose())).collect();
    RationalComplex::new(dims, d).expect("transpose of a differential squares to zero")
}

/// `f^∨: T^∨ → S^∨`, component `k` equal to `(f^{-k})^T`.
pub fn geometric_dual_map(f: &ChainMap) -> ChainMap {
    let maps = f.components().iter().map(|(&n, m)| (-n, m.transpose())).collect();
    ChainMap::new(geometric_dual(f.target()), geometric_dual(f.source()), maps).expect("dual of a chain map")
}

/// The isomorphism from the geometric to the Koszul dual, `(-1)^{k(k+1)/2}` in degree `k`.
pub fn geometric_to_koszul(c: &RationalComplex) -> ChainMap {
    let g = geometric_dual(c);
    let maps = g
        .dims()
        .iter()
        .map(|(&k, &n)| (k, Matrix::scalar(n, &sign((k as i64) * (k as i64 + 1) / 2))))
        .collect();
    ChainMap::new(g, c.dual(), maps).expect("sign change intertwines the two differentials")
}

/// `C` regraded by `k` without the sign on the differential: degree `n` is `C^{n+k}`.
pub fn regrade(c: &RationalComplex, k: i32) -> RationalComplex {
    let dims = c.dims().iter().map(|(&n, &d)| (n - k, d)).collect();
    let d = c.diff_iter().map(|(&n, m)| (n - k, m.clone())).collect();
    RationalComplex::new(dims, d).expect("regrading keeps d² = 0")
}

/// `C(Δ^l_{nd,sp})`: `[s]` in degree 0, `[(s-1)s]` in degree `-1`, `d[(s-1)s] = [s] - [s-1]`.
pub fn spine_chains(l: usize) -> RationalComplex {
    let mut trip = Vec::new();
    for s in 1..=l {
        trip.push((s, s - 1, q(1)));
        trip.push((s - 1, s - 1, q(-1)));
    }
    let d = Matrix::from_triplets(l + 1, l, trip);
    RationalComplex::from_parts(&[(-1, l), (0, l + 1)], vec![(-1, d)]).expect("valid")
}

/// `N^sp_l`: `ℚ^{l+1} → ℚ^l`, `d(x) = (x_1 - x_0, …, x_l - x_{l-1})`.
pub fn spine_cochains(l: usize) -> RationalComplex {
    geometric_dual(&spine_chains(l))
}

/// Strictly increasing sequences of length `size` in `[l]`, lexicographically.
pub fn subsets(l: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(l: usize, size: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in lo..=l {
            cur.push(v);
            go(l, size, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size > 0 && size <= l + 1 {
        go(l, size, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// `C(Δ^l_{nd})`: degree `-b` spanned by `b`-simplices, `d = Σ (-1)^i d_i`.
pub fn nondegenerate_chains(l: usize) -> RationalComplex {
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for b in 0..=l {
        dims.push((-(b as i32), subsets(l, b + 1).len()));
    }
    for b in 1..=l {
        let src = subsets(l, b + 1);
        let tgt = subsets(l, b);
        let idx: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut trip = Vec::new();
        for (j, s) in src.iter().enumerate() {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                trip.push((idx[&f], j, sign(i as i64)));
            }
        }
        diffs.push((-(b as i32), Matrix::from_triplets(tgt.len(), src.len(), trip)));
    }
    RationalComplex::from_parts(&dims, diffs).expect("simplicial identities")
}

/// `N_l`, normalized cochains of `Δ^l`: `binom(l+1, k+1)` in degree `k`.
pub fn normalized_cochains(l: usize) -> RationalComplex {
    geometric_dual(&nondegenerate_chains(l))
}

/// `φ_*` on spine chains: `[s] ↦ [φ(s)]`, `[(s-1)s] ↦` the edges from `φ(s-1)` to `φ(s)`.
pub fn pushforward_phi(phi: &DeltaMorphism) -> ChainMap {
    let (i, j) = (phi.source(), phi.target());
    let d0 = Matrix::from_triplets(j + 1, i + 1, (0..=i).map(|s| (phi.apply(s), s, q(1))));
    let d1 = Matrix::from_triplets(
        j,
        i,
        (1..=i).flat_map(|s| (phi.apply(s - 1) + 1..=phi.apply(s)).map(move |e| (e - 1, s - 1, q(1)))),
    );
    ChainMap::new(spine_chains(i), spine_chains(j), [(0, d0), (-1, d1)].into()).expect("pushforward is a chain map")
}

/// `N^sp(φ): N^sp_m → N^sp_n` for `φ: [n] → [m]`: evaluation in degree 0, partial sums in degree 1.
pub fn restriction_nsp(phi: &DeltaMorphism) -> ChainMap {
    let (n, m) = (phi.source(), phi.target());
    let d0 = Matrix::from_triplets(n + 1, m + 1, (0..=n).map(|k| (k, phi.apply(k), q(1))));
    let d1 = Matrix::from_triplets(
        n,
        m,
        (1..=n).flat_map(|k| (phi.apply(k - 1) + 1..=phi.apply(k)).map(move |i| (k - 1, i - 1, q(1)))),
    );
    ChainMap::new(spine_cochains(m), spine_cochains(n), [(0, d0), (1, d1)].into()).expect("restriction is a chain map")
}

/// `ψ_*: C(Δ^k_{nd}) → C(Δ^l_{nd})` for injective `ψ`.
pub fn injective_pushforward(psi: &DeltaMorphism) -> Result<ChainMap> {
    if !psi.is_injective() {
        return invariant("pushforward of nondegenerate chains needs an injective map");
    }
    let (k, l) = (psi.source(), psi.target());
    let mut maps = BTreeMap::new();
    for b in 0..=k {
        let src = subsets(k, b + 1);
        let tgt = subsets(l, b + 1);
        let idx: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let trip = src.iter().enumerate().map(|(j, s)| {
            let img: Vec<usize> = s.iter().map(|&v| psi.apply(v)).collect();
            (idx[&img], j, q(1))
        });
        maps.insert(-(b as i32), Matrix::from_triplets(tgt.len(), src.len(), trip.collect::<Vec<_>>()));
    }
    ChainMap::new(nondegenerate_chains(k), nondegenerate_chains(l), maps)
}

/// `N_l → N_k`, dual to [`injective_pushforward`].
pub fn normalized_restriction(psi: &DeltaMorphism) -> Result<ChainMap> {
    Ok(geometric_dual_map(&injective_pushforward(psi)?))
}

/// An object `ξ = (σ, τ)` of `Σ^{j_1} × … × Σ^{j_n} × sd(Δ^l)^op`: one interval `(a, b)` per
/// direction and a face `τ ⊆ [l]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PObject {
    pub intervals: Vec<(usize, usize)>,
    pub face: Vec<usize>,
}

impl PObject {
    pub fn widths(&self) -> Vec<usize> {
        self.intervals.iter().map(|&(a, b)| b - a).collect()
    }

    /// `t` with `τ: [t] → [l]`.
    pub fn face_dim(&self) -> usize {
        self.face.len() - 1
    }

    /// Whether there is a morphism `self → other`: nested intervals and `other.face ⊆ self.face`.
    pub fn maps_to(&self, other: &PObject) -> bool {
        self.intervals.len() == other.intervals.len()
            && self.intervals.iter().zip(&other.intervals).all(|(&(a, b), &(c, d))| a <= c && d <= b)
            && other.face.iter().all(|v| self.face.contains(v))
    }

    pub fn label(&self) -> String {
        let iv: Vec<String> = self.intervals.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let f: Vec<String> = self.face.iter().map(usize::to_string).collect();
        format!("{}{{{}}}", iv.join(""), f.join(","))
    }

    pub fn to_json(&self) -> Value {
        json!({ "intervals": self.intervals, "face": self.face })
    }
}

/// A generator `Γ = (γ, δ)` of `P(ξ)^∨`: per direction a vertex `(0, k)` or edge `(1, k)` meaning
/// `[(k-1)k]`, and a face `δ` of `Δ^t` as positions in `[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PGenerator {
    pub spine: Vec<(u8, usize)>,
    pub simplex: Vec<usize>,
}

impl PGenerator {
    /// `b` with `Γ` in `(P^∨)^{-b}`.
    pub fn codegree(&self) -> usize {
        self.spine.iter().map(|&(c, _)| c as usize).sum::<usize>() + self.simplex.len() - 1
    }

    /// The sub-object `ξΓ`: intervals cut down to `γ`, face cut down to `δ`.
    pub fn restrict(&self, xi: &PObject) -> PObject {
        let intervals = self
            .spine
            .iter()
            .zip(&xi.intervals)
            .map(|(&(c, k), &(a, _))| if c == 0 { (a + k, a + k) } else { (a + k - 1, a + k) })
            .collect();
        let face = self.simplex.iter().map(|&p| xi.face[p]).collect();
        PObject { intervals, face }
    }
}

/// The family `P_{j,l}(ξ) = N^sp_{s_1} ⊗ … ⊗ N^sp_{s_n} ⊗ N_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PFamily {
    j: Vec<usize>,
    l: usize,
}

/// Generators by codegree, with positions.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    pub by_codegree: BTreeMap<usize, Vec<PGenerator>>,
    index: HashMap<PGenerator, usize>,
}

impl GeneratorTable {
    pub fn position(&self, g: &PGenerator) -> usize {
        self.index[g]
    }
}

impl PFamily {
    pub fn new(j: Vec<usize>, l: usize) -> Self {
        PFamily { j, l }
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn objects(&self) -> Vec<PObject> {
        let mut acc: Vec<Vec<(usize, usize)>> = vec![vec![]];
        for &ji in &self.j {
            let mut next = Vec::new();
            for prefix in &acc {
                for a in 0..=ji {
                    for b in a..=ji {
                        let mut p = prefix.clone();
                        p.push((a, b));
                        next.push(p);
                    }
                }
            }
            acc = next;
        }
        let faces = sd_faces(self.l);
        acc.into_iter()
            .flat_map(|iv| faces.iter().map(move |f| PObject { intervals: iv.clone(), face: f.clone() }))
            .collect()
    }

    /// The initial object `(id, id)`.
    pub fn initial(&self) -> PObject {
        PObject { intervals: self.j.iter().map(|&j| (0, j)).collect(), face: (0..=self.l).collect() }
    }

    fn check(&self, xi: &PObject) -> Result<()> {
        let ok = xi.intervals.len() == self.j.len()
            && xi.intervals.iter().zip(&self.j).all(|(&(a, b), &j)| a <= b && b <= j)
            && !xi.face.is_empty()
            && xi.face.windows(2).all(|w| w[0] < w[1])
            && xi.face.iter().all(|&v| v <= self.l);
        if ok {
            Ok(())
        } else {
            dim_err(format!("{} is not an object of the index category", xi.label()))
        }
    }

    pub fn generators(&self, xi: &PObject) -> GeneratorTable {
        let mut spines: Vec<Vec<(u8, usize)>> = vec![vec![]];
        for s in xi.widths() {
            let mut next = Vec::new();
            for prefix in &spines {
                for k in 0..=s {
                    let mut p = prefix.clone();
                    p.push((0, k));
                    next.push(p);
                }
                for k in 1..=s {
                    let mut p = prefix.clone();
                    p.push((1, k));
                    next.push(p);
                }
            }
            spines = next;
        }
        let t = xi.face_dim();
        let mut by_codegree: BTreeMap<usize, Vec<PGenerator>> = BTreeMap::new();
        for sp in &spines {
            for a in 0..=t {
                for simplex in subsets(t, a + 1) {
                    let g = PGenerator { spine: sp.clone(), simplex };
                    by_codegree.entry(g.codegree()).or_default().push(g);
                }
            }
        }
        let mut index = HashMap::new();
        for gens in by_codegree.values_mut() {
            gens.sort();
            for (i, g) in gens.iter().enumerate() {
                index.insert(g.clone(), i);
            }
        }
        GeneratorTable { by_codegree, index }
    }

    /// `dΓ = Σ_i (-1)^{c_1+…+c_{i-1}} γ_1 ⊗ … ⊗ dγ_i ⊗ … ⊗ δ + (-1)^{c_1+…+c_n} γ ⊗ dδ`.
    pub fn generator_differential(g: &PGenerator) -> Vec<(PGenerator, Q)> {
        let mut out = Vec::new();
        let mut cs = 0i64;
        for (i, &(c, k)) in g.spine.iter().enumerate() {
            if c == 1 {
                let s = sign(cs);
                for (v, x) in [(k, s.clone()), (k - 1, -s)] {
                    let mut h = g.clone();
                    h.spine[i] = (0, v);
                    out.push((h, x));
                }
            }
            cs += c as i64;
        }
        if g.simplex.len() > 1 {
            for pos in 0..g.simplex.len() {
                let mut h = g.clone();
                h.simplex.remove(pos);
                out.push((h, sign(cs + pos as i64)));
            }
        }
        out
    }

    /// `P(ξ)^∨`, with `(P^∨)^{-b}` spanned by the codegree-`b` generators.
    pub fn dual_value(&self, xi: &PObject) -> Result<RationalComplex> {
        self.check(xi)?;
        let table = self.generators(xi);
        let dims: Vec<(i32, usize)> = table.by_codegree.iter().map(|(&b, g)| (-(b as i32), g.len())).collect();
        let mut diffs = Vec::new();
        for (&b, gens) in &table.by_codegree {
            if b == 0 {
                continue;
            }
            let rows = table.by_codegree.get(&(b - 1)).map_or(0, Vec::len);
            let mut trip = Vec::new();
            for (j, g) in gens.iter().enumerate() {
                for (h, x) in Self::generator_differential(g) {
                    trip.push((table.position(&h), j, x));
                }
            }
            diffs.push((-(b as i32), Matrix::from_triplets(rows, gens.len(), trip)));
        }
        RationalComplex::from_parts(&dims, diffs)
    }

    /// `P(ξ)`, the geometric dual of [`PFamily::dual_value`].
    pub fn value(&self, xi: &PObject) -> Result<RationalComplex> {
        Ok(geometric_dual(&self.dual_value(xi)?))
    }

    /// `P(ξ) → P(ξ')` for `ξ → ξ'`: the dual of the inclusion of generators.
    pub fn structure_map(&self, xi: &PObject, xi2: &PObject) -> Result<ChainMap> {
        if !xi.maps_to(xi2) {
            return invariant(format!("no morphism {} → {}", xi.label(), xi2.label()));
        }
        let (src, tgt) = (self.generators(xi), self.generators(xi2));
        let face_pos: Vec<usize> =
            xi2.face.iter().map(|v| xi.face.iter().position(|w| w == v).expect("subface")).collect();
        let mut maps = BTreeMap::new();
        for (&b, gens2) in &tgt.by_codegree {
            let gens = &src.by_codegree[&b];
            let trip: Vec<(usize, usize, Q)> = gens2
                .iter()
                .enumerate()
                .map(|(i, g2)| {
                    let spine = g2
                        .spine
                        .iter()
                        .zip(xi.intervals.iter().zip(&xi2.intervals))
                        .map(|(&(c, k), (&(a, _), &(a2, _)))| (c, k + a2 - a))
                        .collect();
                    let simplex = g2.simplex.iter().map(|&p| face_pos[p]).collect();
                    (i, src.position(&PGenerator { spine, simplex }), q(1))
                })
                .collect();
            maps.insert(b as i32, Matrix::from_triplets(gens2.len(), gens.len(), trip));
        }
        ChainMap::new(self.value(xi)?, self.value(xi2)?, maps)
    }

    /// `Σ(Φ)`: `(a_i, b_i) ↦ (φ_i(a_i), φ_i(b_i))`.
    pub fn sigma_image(phi: &[DeltaMorphism], xi: &PObject) -> PObject {
        let intervals = phi.iter().zip(&xi.intervals).map(|(f, &(a, b))| (f.apply(a), f.apply(b))).collect();
        PObject { intervals, face: xi.face.clone() }
    }

    /// The oplax component `α_{Φ,l}: P_{j,l}(Σ(Φ)ξ) → P_{i,l}(ξ)` for `Φ: i → j`, where `self`
    /// is the source family `P_{i,l}`: restriction along `φ_i|: [b-a] → [φ(b)-φ(a)]` in each
    /// direction.
    pub fn oplax(&self, phi: &[DeltaMorphism], target: &PFamily, xi: &PObject) -> Result<ChainMap> {
        if phi.len() != self.j.len()
            || target.j.len() != self.j.len()
            || target.l != self.l
            || phi.iter().zip(self.j.iter().zip(&target.j)).any(|(f, (&a, &b))| f.source() != a || f.target() != b)
        {
            return dim_err("oplax map: Φ does not go from i to j");
        }
        let image = Self::sigma_image(phi, xi);
        let (src, tgt) = (self.generators(xi), target.generators(&image));
        let restricted: Vec<DeltaMorphism> = phi
            .iter()
            .zip(&xi.intervals)
            .map(|(f, &(a, b))| {
                let lo = f.apply(a);
                DeltaMorphism::new(f.apply(b) - lo, (a..=b).map(|k| f.apply(k) - lo).collect()).expect("monotone")
            })
            .collect();
        // dual map on generators: Γ ↦ ⊗ φ_*γ_i ⊗ δ
        let mut maps = BTreeMap::new();
        for (&b, gens) in &src.by_codegree {
            let rows = tgt.by_codegree.get(&b).map_or(0, Vec::len);
            let mut trip = Vec::new();
            for (j, g) in gens.iter().enumerate() {
                let mut terms: Vec<(Vec<(u8, usize)>, Q)> = vec![(vec![], q(1))];
                for (&(c, k), f) in g.spine.iter().zip(&restricted) {
                    let images: Vec<(u8, usize)> = if c == 0 {
                        vec![(0, f.apply(k))]
                    } else {
                        (f.apply(k - 1) + 1..=f.apply(k)).map(|e| (1, e)).collect()
                    };
                    terms = terms
                        .into_iter()
                        .flat_map(|(p, x)| {
                            images.iter().map(move |&im| {
                                let mut p = p.clone();
                                p.push(im);
                                (p, x.clone())
                            })
                        })
                        .collect();
                }
                for (spine, x) in terms {
                    let h = PGenerator { spine, simplex: g.simplex.clone() };
                    trip.push((tgt.position(&h), j, x));
                }
            }
            // the dual of (target^∨ ← source^∨) lands in P_i(ξ) from P_j(image)
            let m = Matrix::from_triplets(rows, gens.len(), trip);
            maps.insert(b as i32, m.transpose());
        }
        ChainMap::new(target.value(&image)?, self.value(xi)?, maps)
    }
}

/// The diagrams over `Σ^1 = {(0,0) ← (0,1) → (1,1)}` and the maps `ℓ: Z_0(ℚ[-1]) → N^sp_1 ← ℚ: r`,
/// listed in the order `(0,0), (0,1), (1,1)`.
#[derive(Clone, Debug)]
pub struct SpineMaps {
    pub ell: Vec<ChainMap>,
    pub r: Vec<ChainMap>,
}

pub fn sigma_one_objects() -> [(usize, usize); 3] {
    [(0, 0), (0, 1), (1, 1)]
}

pub fn spine_maps() -> SpineMaps {
    let n0 = spine_cochains(0);
    let n1 = spine_cochains(1);
    let qm1 = RationalComplex::concentrated(1, 1);
    let q0 = RationalComplex::concentrated(0, 1);
    let z = RationalComplex::zero();
    let ell01 = ChainMap::new(qm1, n1.clone(), [(1, Matrix::identity(1))].into()).expect("valid");
    let r01 = ChainMap::new(q0.clone(), n1, [(0, Matrix::from_i64(2, 1, &[&[1], &[1]]))].into()).expect("valid");
    SpineMaps {
        ell: vec![ChainMap::zero(&z, &n0), ell01, ChainMap::zero(&z, &n0)],
        r: vec![ChainMap::identity(&q0), r01, ChainMap::identity(&q0)],
    }
}

/// Whether `ℓ` and `r` commute with the restrictions of `N^sp_1` to its two vertices.
pub fn spine_maps_natural(m: &SpineMaps) -> bool {
    let ends = [DeltaMorphism::new(1, vec![0]).unwrap(), DeltaMorphism::new(1, vec![1]).unwrap()];
    ends.iter().enumerate().all(|(e, f)| {
        let res = restriction_nsp(f);
        let k = if e == 0 { 0 } else { 2 };
        let ell_ok = res.compose(&m.ell[1]).map(|c| c.is_zero()).unwrap_or(false);
        let r_ok = res.compose(&m.r[1]).ok().as_ref() == Some(&m.r[k]);
        ell_ok && r_ok
    })
}

/// `ℓ_{(0,1)}` identifies `ℚ[-1]` with the homotopy pullback of `0 → ℚ ← 0`: it is the kernel of
/// the (surjective) evaluation at both vertices, and the induced comparison is a quasi-isomorphism.
pub fn ell_is_hpb(m: &SpineMaps) -> Result<bool> {
    let n1 = spine_cochains(1);
    let q0 = RationalComplex::concentrated(0, 1);
    let ev = |v: usize| restriction_nsp(&DeltaMorphism::new(1, vec![v]).unwrap());
    let (ev0, ev1) = (ev(0), ev(1));
    let both = Matrix::vstack(&[&ev0.component(0), &ev1.component(0)]);
    let surjective = both.rank() == 2;
    let image_is_kernel = m.ell[1].component(1).rank() == n1.dim(1) && both.kernel().ncols() == n1.dim(0) - 2;
    // ev1 - ev0 = k d with k(a) = a
    let k: BTreeMap<i32, Matrix> = [(1, Matrix::identity(1))].into();
    ChainHomotopy::new(ev0.clone(), ev1.clone(), k.clone())
        .map_err(|e| Error::Consistency(format!("path homotopy: {e}")))?;
    let z = RationalComplex::zero();
    let square = hpb(&ChainMap::zero(&z, &q0), &ChainMap::zero(&z, &q0))?;
    let kk: BTreeMap<i32, Matrix> = [(1, k[&1].mul(&m.ell[1].component(1)))].into();
    let src = m.ell[1].source();
    let cmp = square.compare(&ChainMap::zero(src, &z), &ChainMap::zero(src, &z), &kk)?;
    Ok(surjective && image_is_kernel && cmp.is_quasi_iso())
}

/// `ζ^{(d)}_{j,l}` at `(e, ξ)`: `Z(P_{j,l}[-d-1]) → P_{(1,j),l}[-d]`, which is `ℓ ⊗ id` at
/// `e = (0,1)` and zero elsewhere.
pub fn zeta(family: &PFamily, d: i32, e: (usize, usize), xi: &PObject) -> Result<ChainMap> {
    let mut j1 = vec![1];
    j1.extend_from_slice(family.j());
    let big = PFamily::new(j1, family.l());
    let mut iv = vec![e];
    iv.extend_from_slice(&xi.intervals);
    let bxi = PObject { intervals: iv, face: xi.face.clone() };
    let target = big.value(&bxi)?.shift(-d);
    if e != (0, 1) {
        return Ok(ChainMap::zero(&RationalComplex::zero(), &target));
    }
    let p = family.value(xi)?;
    let source = p.shift(-d - 1);
    let (small, large) = (family.generators(xi), big.generators(&bxi));
    let mut maps = BTreeMap::new();
    for (&b, gens) in &small.by_codegree {
        let n = b as i32 + d + 1;
        let rows = large.by_codegree.get(&(b + 1)).map_or(0, Vec::len);
        let trip: Vec<(usize, usize, Q)> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut spine = vec![(1u8, 1usize)];
                spine.extend_from_slice(&g.spine);
                (large.position(&PGenerator { spine, simplex: g.simplex.clone() }), i, q(1))
            })
            .collect();
        maps.insert(n, Matrix::from_triplets(rows, gens.len(), trip));
    }
    ChainMap::new(source, target, maps)
}

/// Objects reachable from `xi` by one elementary step: shrink one interval from either end, or
/// drop one vertex of the face.
pub fn covers(xi: &PObject) -> Vec<PObject> {
    let mut out = Vec::new();
    for (i, &(a, b)) in xi.intervals.iter().enumerate() {
        if a < b {
            for iv in [(a + 1, b), (a, b - 1)] {
                let mut next = xi.clone();
                next.intervals[i] = iv;
                out.push(next);
            }
        }
    }
    if xi.face.len() > 1 {
        for k in 0..xi.face.len() {
            let mut next = xi.clone();
            next.face.remove(k);
            out.push(next);
        }
    }
    out
}

/// Outcome of an exhaustive identity check: how many identities were tested and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckTally {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckTally {
    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn absorb(&mut self, other: CheckTally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Values, homology, identities and composition of structure maps of one family. Composition is
/// tested on every pair `ξ → ξ' → ξ''` whose first step is elementary, which determines the rest.
pub fn check_family(family: &PFamily) -> Result<CheckTally> {
    let mut tally = CheckTally::default();
    let objects = family.objects();
    let mut maps: HashMap<(PObject, PObject), ChainMap> = HashMap::new();
    let mut get = |a: &PObject, b: &PObject| -> Result<ChainMap> {
        if let Some(m) = maps.get(&(a.clone(), b.clone())) {
            return Ok(m.clone());
        }
        let m = family.structure_map(a, b)?;
        maps.insert((a.clone(), b.clone()), m.clone());
        Ok(m)
    };
    for xi in &objects {
        let v = family.value(xi)?;
        tally.record(v.homology() == BTreeMap::from([(0, 1)]), || format!("H(P{}) ≠ ℚ[0]", xi.label()));
        let id = get(xi, xi)?;
        tally.record(id == ChainMap::identity(&v), || format!("P(id) ≠ id at {}", xi.label()));
        for c in covers(xi) {
            let f = get(xi, &c)?;
            tally.record(f.is_quasi_iso(), || format!("{} → {} is not a quasi-isomorphism", xi.label(), c.label()));
            for far in objects.iter().filter(|o| c.maps_to(o)) {
                let direct = get(xi, far)?;
                let via = get(&c, far)?.compose(&f)?;
                tally.record(direct == via, || format!("composition fails on {} → {} → {}", xi.label(), c.label(), far.label()));
            }
        }
    }
    Ok(tally)
}

/// Chain-map, naturality and sd-square identities of `α_Φ` for every `Φ: i → j` and every `ξ`.
pub fn check_oplax(i: &[usize], j: &[usize], l: usize) -> Result<CheckTally> {
    let (src, tgt) = (PFamily::new(i.to_vec(), l), PFamily::new(j.to_vec(), l));
    let mut tally = CheckTally::default();
    for phi in delta_tuples(i, j) {
        for xi in src.objects() {
            let a = src.oplax(&phi, &tgt, &xi)?;
            tally.checked += 1;
            let image = PFamily::sigma_image(&phi, &xi);
            for c in covers(&xi) {
                let c_image = PFamily::sigma_image(&phi, &c);
                let lhs = src.oplax(&phi, &tgt, &c)?.compose(&tgt.structure_map(&image, &c_image)?)?;
                let rhs = src.structure_map(&xi, &c)?.compose(&a)?;
                tally.record(lhs == rhs, || format!("α not natural on {} → {}", xi.label(), c.label()));
            }
            // sd(ψ) for ψ: [t] → [l] the face itself, viewed in P_{·,t}
            let t = xi.face_dim();
            let (src_t, tgt_t) = (PFamily::new(i.to_vec(), t), PFamily::new(j.to_vec(), t));
            let flat = PObject { intervals: xi.intervals.clone(), face: (0..=t).collect() };
            let b = src_t.oplax(&phi, &tgt_t, &flat)?;
            tally.record(a.components() == b.components(), || format!("sd square fails at {}", xi.label()));
        }
    }
    Ok(tally)
}

/// `α_{ΨΦ} = α_Φ ∘ α_Ψ` on every `ξ`, for all `Φ: i → j`, `Ψ: j → k`.
pub fn check_oplax_composition(i: &[usize], j: &[usize], k: &[usize], l: usize) -> Result<CheckTally> {
    let (fi, fj, fk) = (PFamily::new(i.to_vec(), l), PFamily::new(j.to_vec(), l), PFamily::new(k.to_vec(), l));
    let mut tally = CheckTally::default();
    for phi in delta_tuples(i, j) {
        for psi in delta_tuples(j, k) {
            let comp: Vec<DeltaMorphism> =
                psi.iter().zip(&phi).map(|(g, f)| g.compose(f)).collect::<Result<_>>()?;
            for xi in fi.objects() {
                let direct = fi.oplax(&comp, &fk, &xi)?;
                let image = PFamily::sigma_image(&phi, &xi);
                let via = fi.oplax(&phi, &fj, &xi)?.compose(&fj.oplax(&psi, &fk, &image)?)?;
                tally.record(direct == via, || format!("α composition fails at {}", xi.label()));
            }
        }
    }
    Ok(tally)
}

/// `(φψ)_* = φ_* ψ_*` on spine chains and `(φψ)^* = ψ^* φ^*` on `N^sp`, for arities `≤ max`.
pub fn check_spine_functoriality(max: usize) -> CheckTally {
    let mut tally = CheckTally::default();
    for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                for psi in DeltaMorphism::all(a, b) {
                    for phi in DeltaMorphism::all(b, c) {
                        let comp = phi.compose(&psi).expect("composable");
                        let push = pushforward_phi(&phi).compose(&pushforward_phi(&psi)).expect("composable");
                        tally.record(pushforward_phi(&comp) == push, || format!("pushforward of {comp:?}"));
                        let res = restriction_nsp(&psi).compose(&restriction_nsp(&phi)).expect("composable");
                        tally.record(restriction_nsp(&comp) == res, || format!("restriction of {comp:?}"));
                    }
                }
                if c == 0 {
                    for phi in DeltaMorphism::all(a, b) {
                        let dual = geometric_dual_map(&pushforward_phi(&phi));
                        tally.record(restriction_nsp(&phi) == dual, || format!("duality for {phi:?}"));
                    }
                }
            }
        }
    }
    tally
}

/// Naturality of `ζ^{(d)}_{j,l}` over `Σ^1 × Σ^{j} × sd(Δ^l)^op`, plus the reduction to `ℓ`.
pub fn check_zeta(family: &PFamily, d: i32) -> Result<CheckTally> {
    let mut tally = CheckTally::default();
    let mut j1 = vec![1];
    j1.extend_from_slice(family.j());
    let big = PFamily::new(j1, family.l());
    let lift = |e: (usize, usize), xi: &PObject| {
        let mut iv = vec![e];
        iv.extend_from_slice(&xi.intervals);
        PObject { intervals: iv, face: xi.face.clone() }
    };
    for xi in family.objects() {
        let z = zeta(family, d, (0, 1), &xi)?;
        for end in [(0, 0), (1, 1)] {
            let s = big.structure_map(&lift((0, 1), &xi), &lift(end, &xi))?.shift(-d);
            tally.record(s.compose(&z)?.is_zero(), || format!("ζ not natural towards {end:?} at {}", xi.label()));
        }
        for c in covers(&xi) {
            let lhs = zeta(family, d, (0, 1), &c)?.compose(&family.structure_map(&xi, &c)?.shift(-d - 1))?;
            let rhs = big.structure_map(&lift((0, 1), &xi), &lift((0, 1), &c))?.shift(-d).compose(&z)?;
            tally.record(lhs == rhs, || format!("ζ not natural on {} → {}", xi.label(), c.label()));
        }
    }
    if family.j().is_empty() && family.l() == 0 {
        let z = zeta(family, d, (0, 1), &family.initial())?;
        tally.record(z.components() == spine_maps().ell[1].shift(-d).components(), || "ζ ≠ ℓ[-d]".into());
    }
    Ok(tally)
}

/// All identities for `P_{j,l}` with `n ≤ 2` directions, `j_i ≤ max_j`, `l ≤ max_l`; oplax maps
/// in one direction with arities `≤ max_j`, and `ℓ`, `r`, `ζ`.
pub fn check_all(max_j: usize, max_l: usize) -> Result<CheckTally> {
    let mut tally = check_spine_functoriality(max_j.max(1) + 1);
    let mut js: Vec<Vec<usize>> = vec![vec![]];
    for a in 0..=max_j {
        js.push(vec![a]);
        for b in 0..=max_j {
            js.push(vec![a, b]);
        }
    }
    for l in 0..=max_l {
        for j in &js {
            tally.absorb(check_family(&PFamily::new(j.clone(), l))?);
        }
        for a in 0..=max_j {
            for b in 0..=max_j {
                tally.absorb(check_oplax(&[a], &[b], l)?);
                for c in 0..=max_j {
                    tally.absorb(check_oplax_composition(&[a], &[b], &[c], l)?);
                }
            }
        }
        for j in js.iter().filter(|j| j.len() <= 1) {
            for d in 0..=1 {
                tally.absorb(check_zeta(&PFamily::new(j.clone(), l), d)?);
            }
        }
    }
    let m = spine_maps();
    tally.record(spine_maps_natural(&m), || "ℓ or r not natural".into());
    tally.record(ell_is_hpb(&m)?, || "ℓ does not exhibit ℚ[-1] as the homotopy pullback".into());
    tally.record(m.r.iter().all(ChainMap::is_quasi_iso), || "r is not a quasi-isomorphism".into());
    Ok(tally)
}

fn delta_tuples(i: &[usize], j: &[usize]) -> Vec<Vec<DeltaMorphism>> {
    let mut acc: Vec<Vec<DeltaMorphism>> = vec![vec![]];
    for (&a, &b) in i.iter().zip(j) {
        acc = acc
            .into_iter()
            .flat_map(|p| {
                DeltaMorphism::all(a, b).into_iter().map(move |f| {
                    let mut p = p.clone();
                    p.push(f);
                    p
                })
            })
            .collect();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pushforward_examples() {
        let d1 = DeltaMorphism::coface(2, 1);
        let f = pushforward_phi(&d1);
        assert_eq!(f.component(-1).column(0), vec![q(1), q(1)]);
        let s0 = DeltaMorphism::codegeneracy(0, 0);
        assert!(pushforward_phi(&s0).component(-1).is_zero());
        let inert = DeltaMorphism::inert(1, 3, 1).unwrap();
        assert_eq!(pushforward_phi(&inert).component(-1).column(0), vec![q(0), q(1), q(0)]);
    }

    #[test]
    fn restriction_examples() {
        let d1 = DeltaMorphism::coface(2, 1);
        assert_eq!(restriction_nsp(&d1).component(1), Matrix::from_i64(1, 2, &[&[1, 1]]));
        let id = DeltaMorphism::identity(3);
        assert_eq!(restriction_nsp(&id), ChainMap::identity(&spine_cochains(3)));
        assert!(restriction_nsp(&DeltaMorphism::codegeneracy(0, 0)).component(1).is_zero());
    }

    #[test]
    fn restriction_is_dual_to_pushforward() {
        for a in 0..=3 {
            for b in 0..=3 {
                for phi in DeltaMorphism::all(a, b) {
                    assert_eq!(restriction_nsp(&phi), geometric_dual_map(&pushforward_phi(&phi)));
                }
            }
        }
    }

    #[test]
    fn normalized_cochain_dimensions() {
        for l in 0..=4usize {
            let n = normalized_cochains(l);
            for k in 0..=l {
                let binom = subsets(l, k + 1).len();
                assert_eq!(n.dim(k as i32), binom);
            }
            assert_eq!(n.homology(), [(0, 1)].into_iter().filter(|_| true).collect::<BTreeMap<_, _>>());
        }
    }

    #[test]
    fn koszul_conversion_is_a_chain_iso() {
        let c = normalized_cochains(3);
        assert!(geometric_to_koszul(&c).is_quasi_iso());
    }

    #[test]
    fn p_value_dimensions() {
        let f = PFamily::new(vec![1], 1);
        let v = f.value(&f.initial()).unwrap();
        assert_eq!((v.dim(0), v.dim(1), v.dim(2)), (4, 4, 1));
        let f = PFamily::new(vec![1, 1], 0);
        let v = f.value(&f.initial()).unwrap();
        assert_eq!((v.dim(0), v.dim(1), v.dim(2)), (4, 4, 1));
        assert_eq!(v.homology(), [(0, 1)].into());
    }

    #[test]
    fn ell_and_r() {
        let m = spine_maps();
        assert!(spine_maps_natural(&m));
        assert!(ell_is_hpb(&m).unwrap());
        assert!(m.r[1].is_quasi_iso());
    }

    #[test]
    fn small_families_pass_every_identity() {
        let t = check_all(1, 1).unwrap();
        assert!(t.ok(), "{:?}", t.failures);
        assert!(t.checked > 100);
    }

    #[test]
    fn oplax_in_two_directions() {
        let t = check_oplax(&[1, 0], &[2, 1], 1).unwrap();
        assert!(t.ok(), "{:?}", t.failures);
    }

    #[test]
    fn zeta_reduces_to_ell() {
        let f = PFamily::new(vec![], 0);
        let xi = f.initial();
        for d in -1..=2 {
            let z = zeta(&f, d, (0, 1), &xi).unwrap();
            assert_eq!(z.components(), spine_maps().ell[1].shift(-d).components());
        }
    }
}
