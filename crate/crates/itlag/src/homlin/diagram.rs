//! Strictly commuting diagrams of complexes over finite posets, their homotopy
//! limits (totalization of the cosimplicial replacement) and strict limits.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::error::{dim_err, invariant, Error, Result};
use crate::homlin::complex::{matrix_from_json, matrix_to_json, RationalComplex};
use crate::homlin::map::ChainMap;
use crate::linalg::Matrix;
use crate::rational::{q, sign};
use crate::shape::nerve::chains;
use crate::shape::poset::{Poset, PosetMap};

/// A functor `P → Ch_ℚ`. Arrows are stored for every strict relation `a < b`.
#[derive(Clone, Debug)]
pub struct Diagram {
    index: Poset,
    objects: Vec<RationalComplex>,
    arrows: HashMap<(usize, usize), ChainMap>,
}

impl Diagram {
    /// Builds from maps on covering relations; composites along every chain must agree.
    pub fn new(index: Poset, objects: Vec<RationalComplex>, covers: BTreeMap<(usize, usize), ChainMap>) -> Result<Self> {
        let n = index.len();
        if objects.len() != n {
            return dim_err(format!("diagram: {} objects for {} elements", objects.len(), n));
        }
        let cover_list = index.covers();
        for &(a, b) in &cover_list {
            let f = covers
                .get(&(a, b))
                .ok_or_else(|| Error::Invariant(format!("diagram: no map for {} ⋖ {}", index.label(a), index.label(b))))?;
            if f.source() != &objects[a] || f.target() != &objects[b] {
                return dim_err(format!("diagram: map {} → {} has wrong endpoints", index.label(a), index.label(b)));
            }
        }
        if let Some(&(a, b)) = covers.keys().find(|k| !cover_list.contains(k)) {
            return invariant(format!("diagram: {} → {} is not a covering relation", index.label(a), index.label(b)));
        }
        let mut arrows: HashMap<(usize, usize), ChainMap> = HashMap::new();
        // fill arrows out of `a` once every arrow out of its successors is known
        let mut order = index.linear_extension();
        order.reverse();
        for &a in &order {
            for b in 0..n {
                if !index.lt(a, b) {
                    continue;
                }
                let mut found: Option<ChainMap> = None;
                for &(x, c) in cover_list.iter().filter(|&&(x, c)| x == a && index.leq(c, b)) {
                    let first = &covers[&(x, c)];
                    let path = if c == b { first.clone() } else { arrows[&(c, b)].compose_unchecked(first) };
                    match &found {
                        None => found = Some(path),
                        Some(prev) if *prev != path => {
                            return invariant(format!(
                                "diagram does not commute on {} → {}",
                                index.label(a),
                                index.label(b)
                            ))
                        }
                        _ => {}
                    }
                }
                arrows.insert((a, b), found.expect("a < b has a cover above a"));
            }
        }
        Ok(Diagram { index, objects, arrows })
    }

    /// Builds from a function giving the map for every strict relation, using only covers.
    pub fn from_fn(index: Poset, objects: Vec<RationalComplex>, f: impl Fn(usize, usize) -> ChainMap) -> Result<Self> {
        let covers = index.covers().into_iter().map(|(a, b)| ((a, b), f(a, b))).collect();
        Self::new(index, objects, covers)
    }

    pub fn constant(index: &Poset, c: &RationalComplex) -> Self {
        let id = ChainMap::identity(c);
        let arrows = index.relations().into_iter().filter(|(a, b)| a != b).map(|k| (k, id.clone())).collect();
        Diagram { index: index.clone(), objects: vec![c.clone(); index.len()], arrows }
    }

    pub fn index(&self) -> &Poset {
        &self.index
    }

    pub fn object(&self, a: usize) -> &RationalComplex {
        &self.objects[a]
    }

    pub fn objects(&self) -> &[RationalComplex] {
        &self.objects
    }

    /// The map `D(a) → D(b)` for `a ≤ b`.
    pub fn arrow(&self, a: usize, b: usize) -> ChainMap {
        if a == b {
            return ChainMap::identity(&self.objects[a]);
        }
        self.arrows
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| panic!("no arrow {} → {}", self.index.label(a), self.index.label(b)))
    }

    /// Restriction to the full subposet on `elems` (in that order).
    pub fn restrict(&self, elems: &[usize]) -> Diagram {
        let index = self.index.subposet(elems);
        let objects = elems.iter().map(|&e| self.objects[e].clone()).collect();
        let mut arrows = HashMap::new();
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                if self.index.lt(a, b) {
                    arrows.insert((i, j), self.arrows[&(a, b)].clone());
                }
            }
        }
        Diagram { index, objects, arrows }
    }

    /// `D ∘ f` for `f` with target the index poset.
    pub fn pullback(&self, f: &PosetMap) -> Result<Diagram> {
        if f.target != self.index {
            return dim_err("diagram pullback: functor lands in a different poset");
        }
        let objects = (0..f.source.len()).map(|a| self.objects[f.apply(a)].clone()).collect();
        let mut arrows = HashMap::new();
        for (a, b) in f.source.relations() {
            if a != b {
                arrows.insert((a, b), self.arrow(f.apply(a), f.apply(b)));
            }
        }
        Ok(Diagram { index: f.source.clone(), objects, arrows })
    }

    /// Replaces the object at `a` and every arrow touching it; commutativity is rechecked.
    pub fn with_object(&self, a: usize, object: RationalComplex, arrows_out: &BTreeMap<usize, ChainMap>) -> Result<Diagram> {
        let mut objects = self.objects.clone();
        objects[a] = object;
        let covers = self
            .index
            .covers()
            .into_iter()
            .map(|(x, y)| {
                let f = if x == a {
                    arrows_out
                        .get(&y)
                        .cloned()
                        .ok_or_else(|| Error::Invariant(format!("with_object: missing map to {}", self.index.label(y))))?
                } else if y == a {
                    return invariant("with_object: only elements without incoming maps can be replaced");
                } else {
                    self.arrows[&(x, y)].clone()
                };
                Ok(((x, y), f))
            })
            .collect::<Result<_>>()?;
        Diagram::new(self.index.clone(), objects, covers)
    }

    pub fn to_json(&self) -> Value {
        let objects: BTreeMap<&str, Value> =
            (0..self.index.len()).map(|a| (self.index.label(a), self.objects[a].to_json())).collect();
        let arrows: Vec<Value> = self
            .index
            .covers()
            .into_iter()
            .map(|(a, b)| {
                let f = &self.arrows[&(a, b)];
                let maps: BTreeMap<String, Value> =
                    f.components().iter().map(|(n, m)| (n.to_string(), matrix_to_json(m))).collect();
                json!({ "from": self.index.label(a), "to": self.index.label(b), "maps": maps })
            })
            .collect();
        json!({ "poset": self.index.to_json(), "objects": objects, "arrows": arrows })
    }

    pub fn from_json(v: &Value) -> Result<Diagram> {
        let index = Poset::from_json(v.get("poset").ok_or_else(|| Error::Parse("diagram: missing \"poset\"".into()))?)?;
        let objs = v
            .get("objects")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("diagram: missing \"objects\" map".into()))?;
        let objects = (0..index.len())
            .map(|a| {
                let l = index.label(a);
                let c = objs.get(l).ok_or_else(|| Error::Parse(format!("diagram: no object for {l:?}")))?;
                RationalComplex::from_json(c)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut covers = BTreeMap::new();
        for (k, arr) in v.get("arrows").and_then(Value::as_array).into_iter().flatten().enumerate() {
            let end = |key: &str| -> Result<usize> {
                let name = arr
                    .get(key)
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse(format!("diagram: arrows[{k}] lacks {key:?}")))?;
                index.element(name)
            };
            let (a, b) = (end("from")?, end("to")?);
            let mut maps = BTreeMap::new();
            if let Some(ms) = arr.get("maps").and_then(Value::as_object) {
                for (deg, m) in ms {
                    let n: i32 = deg.parse().map_err(|_| Error::Parse(format!("diagram: bad degree {deg:?}")))?;
                    maps.insert(n, matrix_from_json(m, objects[b].dim(n), objects[a].dim(n))?);
                }
            }
            covers.insert((a, b), ChainMap::new(objects[a].clone(), objects[b].clone(), maps)?);
        }
        Diagram::new(index, objects, covers)
    }
}

/// Homotopy limit of a diagram: degree `m` is `⊕_{p_0<…<p_k} D(p_k)^{m-k}`.
#[derive(Clone, Debug)]
pub struct Holim {
    pub complex: RationalComplex,
    chains: Vec<Vec<usize>>,
    /// `(degree, chain) → offset`.
    offsets: HashMap<(i32, usize), usize>,
    objects: Vec<RationalComplex>,
}

impl Holim {
    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    fn offset(&self, m: i32, chain: usize) -> Option<usize> {
        self.offsets.get(&(m, chain)).copied()
    }

    /// Map from `x` given compatible legs `x → D(p)` for every `p`.
    pub fn cone_map(&self, x: &RationalComplex, legs: &[ChainMap]) -> Result<ChainMap> {
        if legs.len() != self.objects.len() {
            return dim_err("holim cone: one leg per element required");
        }
        let mut maps = BTreeMap::new();
        for &m in x.dims().keys() {
            let mut out = Matrix::zeros(self.complex.dim(m), x.dim(m));
            for (p, leg) in legs.iter().enumerate() {
                if let Some(off) = self.offset(m, p) {
                    out.add_block(off, 0, &leg.component(m));
                }
            }
            maps.insert(m, out);
        }
        ChainMap::new(x.clone(), self.complex.clone(), maps)
    }

    /// Projection onto the length-zero component at `p`.
    pub fn projection(&self, p: usize) -> ChainMap {
        let target = &self.objects[p];
        let maps = target
            .dims()
            .iter()
            .filter_map(|(&m, &k)| {
                let off = self.offset(m, p)?;
                let mut out = Matrix::zeros(k, self.complex.dim(m));
                out.add_block(0, off, &Matrix::identity(k));
                Some((m, out))
            })
            .collect();
        ChainMap::new_unchecked(self.complex.clone(), target.clone(), maps)
    }

    pub fn chain_index(&self, chain: &[usize]) -> Option<usize> {
        self.chains.iter().position(|c| c == chain)
    }

    /// The map of homotopy limits induced by a natural transformation `η: D → E`,
    /// where `other` is the homotopy limit of `E` over the same index.
    pub fn map_to(&self, other: &Holim, eta: &[ChainMap]) -> Result<ChainMap> {
        if self.chains != other.chains || eta.len() != self.objects.len() {
            return dim_err("holim map: indices differ");
        }
        let mut maps = BTreeMap::new();
        for &m in self.complex.dims().keys() {
            let mut out = Matrix::zeros(other.complex.dim(m), self.complex.dim(m));
            for (ci, c) in self.chains.iter().enumerate() {
                let deg = m - (c.len() as i32 - 1);
                if let (Some(r0), Some(c0)) = (other.offset(m, ci), self.offset(m, ci)) {
                    out.add_block(r0, c0, &eta[*c.last().unwrap()].component(deg));
                }
            }
            maps.insert(m, out);
        }
        ChainMap::new(self.complex.clone(), other.complex.clone(), maps)
    }

    /// Pairs the length-`k` components with a chain of the nerve: `w ↦ Σ z_σ w_σ`.
    /// Only meaningful when every object is the same complex `A`; lands in `A[-k]`.
    pub fn evaluate_on_chain(&self, k: usize, z: &[(usize, crate::rational::Q)]) -> Result<ChainMap> {
        let a = self.objects.first().cloned().unwrap_or_else(RationalComplex::zero);
        if self.objects.iter().any(|o| *o != a) {
            return invariant("evaluate_on_chain needs a constant diagram");
        }
        let target = a.shift(-(k as i32));
        let maps = self
            .complex
            .dims()
            .keys()
            .map(|&m| {
                let inner = m - k as i32;
                let mut out = Matrix::zeros(a.dim(inner), self.complex.dim(m));
                for (sigma, c) in z {
                    if self.chains[*sigma].len() != k + 1 {
                        continue;
                    }
                    if let Some(off) = self.offset(m, *sigma) {
                        out.add_block(0, off, &Matrix::scalar(a.dim(inner), c));
                    }
                }
                (m, out)
            })
            .collect();
        ChainMap::new(self.complex.clone(), target, maps)
    }
}

/// Totalization of the cosimplicial replacement. Chains `σ` are indexed as in
/// [`chains`], flattened; the length-zero chains come first in the order of `D`'s index.
pub fn holim(d: &Diagram) -> Holim {
    let p = &d.index;
    let mut flat: Vec<Vec<usize>> = (0..p.len()).map(|a| vec![a]).collect();
    for layer in chains(p).into_iter().skip(1) {
        flat.extend(layer);
    }
    let lookup: HashMap<&[usize], usize> = flat.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();

    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut offsets = HashMap::new();
    for (ci, c) in flat.iter().enumerate() {
        let k = (c.len() - 1) as i32;
        let obj = &d.objects[*c.last().unwrap()];
        for (&deg, &dim) in obj.dims() {
            let m = deg + k;
            let e = dims.entry(m).or_insert(0);
            offsets.insert((m, ci), *e);
            *e += dim;
        }
    }

    let mut diffs: BTreeMap<i32, Vec<(usize, usize, crate::rational::Q)>> = BTreeMap::new();
    let put = |diffs: &mut BTreeMap<i32, Vec<_>>, m: i32, r0: usize, c0: usize, mat: &Matrix, s: &crate::rational::Q| {
        let e = diffs.entry(m).or_default();
        for (i, j, v) in mat.triplets() {
            e.push((r0 + i, c0 + j, v * s));
        }
    };
    for (ci, c) in flat.iter().enumerate() {
        let k = c.len() - 1;
        let last = *c.last().unwrap();
        let obj = &d.objects[last];
        let sk = sign(k as i64);
        // internal differential
        for (&deg, dm) in obj.diff_iter() {
            let m = deg + k as i32;
            if let (Some(r0), Some(c0)) = (offsets.get(&(m + 1, ci)), offsets.get(&(m, ci))) {
                put(&mut diffs, m, *r0, *c0, dm, &sk);
            }
        }
        // coface terms landing in `c`, for chains with at least two elements
        if k == 0 {
            continue;
        }
        for i in 0..=k {
            let mut face = c.clone();
            face.remove(i);
            let fi = lookup[face.as_slice()];
            let s = sign(i as i64);
            for (&deg, &dim) in obj.dims() {
                let _ = dim;
                let m_src = deg + (k as i32 - 1);
                let (Some(&r0), Some(&c0)) = (offsets.get(&(m_src + 1, ci)), offsets.get(&(m_src, fi))) else {
                    continue;
                };
                if i < k {
                    put(&mut diffs, m_src, r0, c0, &Matrix::identity(dim), &s);
                } else {
                    let f = d.arrow(c[k - 1], last).component(deg);
                    put(&mut diffs, m_src, r0, c0, &f, &s);
                }
            }
        }
    }
    let d_maps: BTreeMap<i32, Matrix> = diffs
        .into_iter()
        .filter_map(|(m, t)| {
            let (r, c) = (dims.get(&(m + 1)).copied().unwrap_or(0), dims.get(&m).copied().unwrap_or(0));
            (r > 0 && c > 0).then(|| (m, Matrix::from_triplets(r, c, t)))
        })
        .collect();
    let complex = RationalComplex::new_unchecked(dims, d_maps);
    Holim { complex, chains: flat, offsets, objects: d.objects.clone() }
}

/// For `D` over a poset with an initial element: whether `D(init) → holim` of the rest is a quasi-iso.
pub fn is_limit_cone(d: &Diagram) -> Result<bool> {
    let init = d
        .index
        .initial()
        .ok_or_else(|| Error::Invariant("is_limit_cone: index has no initial element".into()))?;
    let rest: Vec<usize> = (0..d.index.len()).filter(|&a| a != init).collect();
    Ok(limit_comparison(d, init, &rest)?.is_quasi_iso())
}

/// The comparison `D(x) → holim(D|rest)` for `x` below every element of `rest`.
pub fn limit_comparison(d: &Diagram, x: usize, rest: &[usize]) -> Result<ChainMap> {
    if let Some(&bad) = rest.iter().find(|&&r| !d.index.leq(x, r)) {
        return invariant(format!("{} is not below {}", d.index.label(x), d.index.label(bad)));
    }
    let sub = d.restrict(rest);
    let h = holim(&sub);
    let legs: Vec<ChainMap> = rest.iter().map(|&r| d.arrow(x, r)).collect();
    h.cone_map(&d.objects[x], &legs)
}

/// Strict limit with its legs: the kernel of `∏ D(u) → ∏_{u⋖v} D(v)`, `(x_u) ↦ D(u→v) x_u - x_v`.
#[derive(Clone, Debug)]
pub struct StrictLimit {
    pub complex: RationalComplex,
    pub legs: Vec<ChainMap>,
    /// Per degree, the columns spanning the limit inside `⊕_u D(u)^m`.
    embedding: BTreeMap<i32, Matrix>,
    objects: Vec<RationalComplex>,
}

impl StrictLimit {
    /// The unique map `x → lim` through which compatible legs factor.
    pub fn factor(&self, x: &RationalComplex, legs: &[ChainMap]) -> Result<ChainMap> {
        let mut maps = BTreeMap::new();
        for &m in x.dims().keys() {
            let Some(e) = self.embedding.get(&m) else {
                continue;
            };
            let parts: Vec<Matrix> = legs.iter().map(|l| l.component(m)).collect();
            let refs: Vec<&Matrix> = parts.iter().collect();
            let stacked = Matrix::vstack(&refs);
            let y = e
                .solve(&stacked)
                .ok_or_else(|| Error::Invariant(format!("legs are not compatible in degree {m}")))?;
            maps.insert(m, y);
        }
        ChainMap::new(x.clone(), self.complex.clone(), maps)
    }

    pub fn objects(&self) -> &[RationalComplex] {
        &self.objects
    }
}

pub fn strict_limit(d: &Diagram) -> StrictLimit {
    let n = d.index.len();
    let covers = d.index.covers();
    let mut degs: Vec<i32> = d.objects.iter().flat_map(|o| o.dims().keys().copied()).collect();
    degs.sort_unstable();
    degs.dedup();
    let mut embedding = BTreeMap::new();
    let mut dims = BTreeMap::new();
    for &m in &degs {
        let sizes: Vec<usize> = d.objects.iter().map(|o| o.dim(m)).collect();
        let offs: Vec<usize> = sizes.iter().scan(0, |s, &x| {
            let o = *s;
            *s += x;
            Some(o)
        }).collect();
        let total: usize = sizes.iter().sum();
        let mut trip = Vec::new();
        let mut row = 0;
        for &(u, v) in &covers {
            let f = d.arrow(u, v).component(m);
            for (i, j, x) in f.triplets() {
                trip.push((row + i, offs[u] + j, x.clone()));
            }
            for i in 0..sizes[v] {
                trip.push((row + i, offs[v] + i, q(-1)));
            }
            row += sizes[v];
        }
        let e = Matrix::from_triplets(row, total, trip).kernel();
        if e.ncols() > 0 {
            dims.insert(m, e.ncols());
            embedding.insert(m, e);
        }
    }
    let mut dmaps = BTreeMap::new();
    for (&m, e) in &embedding {
        let Some(e1) = embedding.get(&(m + 1)) else {
            continue;
        };
        let blocks: Vec<Matrix> = d.objects.iter().map(|o| o.diff(m)).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let big = Matrix::block_diag(&refs);
        let image = big.mul(e);
        let dm = e1.solve(&image).expect("limit is a subcomplex");
        dmaps.insert(m, dm);
    }
    let complex = RationalComplex::new_unchecked(dims, dmaps);
    let legs = (0..n)
        .map(|u| {
            let target = &d.objects[u];
            let maps = embedding
                .iter()
                .map(|(&m, e)| {
                    let off: usize = d.objects[..u].iter().map(|o| o.dim(m)).sum();
                    (m, e.slice(off, target.dim(m), 0, e.ncols()))
                })
                .collect();
            ChainMap::new_unchecked(complex.clone(), target.clone(), maps)
        })
        .collect();
    StrictLimit { complex, legs, embedding, objects: d.objects.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homlin::ops::hpb;
    use crate::shape::shapes::{sigma, sp_uple_circ};

    fn cospan() -> Poset {
        Poset::new(vec!["a".into(), "c".into(), "b".into()], &[(0, 1), (2, 1)]).unwrap()
    }

    fn two_term() -> RationalComplex {
        RationalComplex::from_parts(&[(0, 2), (1, 1)], vec![(0, Matrix::from_i64(1, 2, &[&[1, 1]]))]).unwrap()
    }

    #[test]
    fn holim_over_point_is_identity() {
        let a = two_term();
        let d = Diagram::constant(&Poset::point(), &a);
        let h = holim(&d);
        assert_eq!(h.complex, a);
    }

    #[test]
    fn constant_over_circle() {
        let a = RationalComplex::concentrated(0, 1);
        let d = Diagram::constant(&sp_uple_circ(2), &a);
        assert_eq!(holim(&d).complex.homology(), [(0, 1), (1, 1)].into());
    }

    #[test]
    fn holim_of_cospan_matches_hpb() {
        let a = two_term();
        let c = RationalComplex::concentrated(0, 1);
        let f = ChainMap::new(a.clone(), c.clone(), [(0, Matrix::from_i64(1, 2, &[&[1, 0]]))].into()).unwrap();
        let g = ChainMap::identity(&c);
        let p = cospan();
        let d = Diagram::new(p, vec![a.clone(), c.clone(), c.clone()], [((0, 1), f.clone()), ((2, 1), g.clone())].into())
            .unwrap();
        let h = holim(&d).complex;
        let pb = hpb(&f, &g).unwrap().complex;
        assert_eq!(h.homology(), pb.homology());
    }

    #[test]
    fn non_commuting_rejected() {
        let c = RationalComplex::concentrated(0, 1);
        let sq = crate::shape::shapes::sigma_product(&[0, 0]);
        assert_eq!(sq.len(), 1);
        let s1 = sigma(1);
        let p = Poset::product(&[&s1, &Poset::new(vec!["x".into(), "y".into()], &[(0, 1)]).unwrap()]);
        let two = ChainMap::identity(&c).scale(&q(2));
        let id = ChainMap::identity(&c);
        let r = Diagram::from_fn(p.clone(), vec![c.clone(); p.len()], |a, b| {
            if p.label(a) == "((0,1),x)" && p.label(b) == "((0,0),x)" {
                two.clone()
            } else {
                id.clone()
            }
        });
        assert!(r.is_err());
    }

    #[test]
    fn limit_cone_examples() {
        let a = two_term();
        let p = sigma(1).cone_left("-inf").unwrap();
        let d = Diagram::constant(&p, &a);
        assert!(is_limit_cone(&d).unwrap());
        let chain = Poset::new(vec!["0".into(), "1".into()], &[(0, 1)]).unwrap();
        assert!(is_limit_cone(&Diagram::constant(&chain, &a)).unwrap());
    }

    #[test]
    fn strict_limit_of_cospan() {
        let c = RationalComplex::concentrated(0, 1);
        let a = RationalComplex::concentrated(0, 2);
        let f = ChainMap::new(a.clone(), c.clone(), [(0, Matrix::from_i64(1, 2, &[&[1, 0]]))].into()).unwrap();
        let d = Diagram::new(cospan(), vec![a.clone(), c.clone(), a.clone()], [((0, 1), f.clone()), ((2, 1), f)].into())
            .unwrap();
        let l = strict_limit(&d);
        assert_eq!(l.complex.dims(), &[(0, 3)].into());
        let legs: Vec<ChainMap> = l.legs.clone();
        let back = l.factor(&l.complex, &legs).unwrap();
        assert_eq!(back, ChainMap::identity(&l.complex));
    }

    #[test]
    fn json_round_trip() {
        let c = RationalComplex::concentrated(0, 1);
        let f = ChainMap::identity(&c).scale(&q(3));
        let d = Diagram::new(cospan(), vec![c.clone(); 3], [((0, 1), f.clone()), ((2, 1), f)].into()).unwrap();
        let back = Diagram::from_json(&d.to_json()).unwrap();
        assert_eq!(back.arrow(0, 1), d.arrow(0, 1));
    }
}
