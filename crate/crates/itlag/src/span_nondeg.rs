//! Non-degeneracy of iterated span diagrams.
//!
//! An uple diagram is a functor `t̃Sp^n → Ch_ℚ`; a fold diagram is a functor on
//! the collapsed `t̃sp^n`. Elements of `t̃Sp^n` are indexed as in
//! [`TwistedPoset`] over [`sp_uple`]: plain `x` at `uple_index(x)`, dual `x^v`
//! at `3^n + uple_index(x)`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{dim_err, Error, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::diagram::{holim, limit_comparison, Diagram};
use crate::homlin::map::ChainMap;
use crate::homlin::ops::hpb;
use crate::linalg::Matrix;
use crate::random::{random_complex, reedy_diagram, ComplexShape, Homology};
use crate::shape::nerve::nerve;
use crate::shape::poset::{Poset, PosetMap};
use crate::shape::shapes::{
    fold_circ_index, j_functor, projection, sp_fold, sp_uple, sp_uple_circ, uple_coords, uple_index, TOP,
};
use crate::twisted::TwistedPoset;

/// Largest `n` for which the full form (a homotopy limit over `t̃Sp^n ∖ {-inf}`) is computed.
pub const FULL_FORM_MAX_N: usize = 3;

fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

#[derive(Clone, Debug)]
pub struct UpleSpanDiagram {
    n: usize,
    tw: TwistedPoset,
    diagram: Diagram,
}

impl UpleSpanDiagram {
    pub fn new(n: usize, diagram: Diagram) -> Result<Self> {
        let tw = TwistedPoset::new(&sp_uple(n))?;
        if diagram.index() != tw.poset() {
            return dim_err(format!("diagram is not indexed by the twisted Sp^{n}"));
        }
        Ok(UpleSpanDiagram { n, tw, diagram })
    }

    /// Constant diagram with value `c`.
    pub fn constant(n: usize, c: &RationalComplex) -> Self {
        let tw = TwistedPoset::new(&sp_uple(n)).expect("Sp^n has joins");
        let diagram = Diagram::constant(tw.poset(), c);
        UpleSpanDiagram { n, tw, diagram }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn twisted(&self) -> &TwistedPoset {
        &self.tw
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn bottom_dual(&self) -> usize {
        self.tw.dual(0)
    }

    /// Restriction to `Sp^n ∪ {(-inf)^v}`, indexed by `Sp^n ▷` with the cone point last.
    pub fn half(&self) -> Diagram {
        let index = sp_uple(self.n).cone_right(TOP).expect("fresh label");
        let k = pow3(self.n);
        let mapping = (0..=k).map(|i| if i < k { i } else { self.bottom_dual() }).collect();
        let f = PosetMap::new(index, self.tw.poset().clone(), mapping).expect("monotone");
        self.diagram.pullback(&f).expect("pullback of a valid diagram")
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "diagram": self.diagram.to_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v["n"].as_u64().ok_or_else(|| Error::Parse("uple diagram: missing n".into()))? as usize;
        UpleSpanDiagram::new(n, Diagram::from_json(&v["diagram"])?)
    }
}

/// Half form: `Φ(-inf) → holim(Φ|Sp^{n,◦} ∪ {(-inf)^v})`.
pub fn nondeg_half(phi: &UpleSpanDiagram) -> Result<bool> {
    let k = pow3(phi.n);
    let mut rest: Vec<usize> = (1..k).collect();
    rest.push(phi.bottom_dual());
    Ok(limit_comparison(&phi.diagram, 0, &rest)?.is_quasi_iso())
}

/// Full form: `Φ(-inf) → holim(Φ|t̃Sp^n ∖ {-inf})`.
pub fn nondeg_full(phi: &UpleSpanDiagram) -> Result<bool> {
    let rest: Vec<usize> = (1..phi.tw.poset().len()).collect();
    Ok(limit_comparison(&phi.diagram, 0, &rest)?.is_quasi_iso())
}

/// Limit over the dual copy `Sp^{n,op}`; agrees with non-degeneracy when the boundary is non-degenerate.
pub fn nondeg_rke(phi: &UpleSpanDiagram) -> Result<bool> {
    let k = pow3(phi.n);
    let rest: Vec<usize> = (k..2 * k).collect();
    Ok(limit_comparison(&phi.diagram, 0, &rest)?.is_quasi_iso())
}

/// The half form, cross-checked against the full form for `n ≤ FULL_FORM_MAX_N`.
pub fn nondeg_uple(phi: &UpleSpanDiagram) -> Result<bool> {
    let half = nondeg_half(phi)?;
    if phi.n <= FULL_FORM_MAX_N {
        let full = nondeg_full(phi)?;
        if full != half {
            return Err(Error::Consistency(format!("full form says {full}, half form says {half}")));
        }
    }
    Ok(half)
}

/// `Sp^m → Sp^n` onto the elements above `x`, filling the `-inf` coordinates of `x` in order.
pub fn face_embedding(n: usize, x: usize) -> PosetMap {
    let cx = &uple_coords(n)[x];
    let free: Vec<usize> = (0..n).filter(|&i| cx[i] == 0).collect();
    let m = free.len();
    let mapping = uple_coords(m)
        .iter()
        .map(|y| {
            let mut c = cx.clone();
            for (k, &i) in free.iter().enumerate() {
                c[i] = y[k];
            }
            uple_index(&c)
        })
        .collect();
    PosetMap::new(sp_uple(m), sp_uple(n), mapping).expect("faces are monotone")
}

/// The face of `Φ` at `x`: its restriction along `Tw_!` of [`face_embedding`].
pub fn face(phi: &UpleSpanDiagram, x: usize) -> Result<UpleSpanDiagram> {
    let e = face_embedding(phi.n, x);
    let m = uple_coords(phi.n)[x].iter().filter(|&&c| c == 0).count();
    let tw_m = TwistedPoset::new(&sp_uple(m))?;
    let f = TwistedPoset::functor(&e, &tw_m, &phi.tw)?;
    UpleSpanDiagram::new(m, phi.diagram.pullback(&f)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceVerdict {
    pub face: String,
    pub dimension: usize,
    pub nondegenerate: bool,
}

/// Non-degeneracy of every proper face `t̃Sp^m ↪ t̃Sp^n`, one per `x ∈ Sp^{n,◦}`.
pub fn nondeg_boundary(phi: &UpleSpanDiagram) -> Result<Vec<FaceVerdict>> {
    (1..pow3(phi.n))
        .map(|x| {
            let f = face(phi, x)?;
            Ok(FaceVerdict {
                face: phi.tw.base().label(x).to_string(),
                dimension: f.n,
                nondegenerate: nondeg_half(&f)?,
            })
        })
        .collect()
}

pub fn boundary_nondegenerate(phi: &UpleSpanDiagram) -> Result<bool> {
    Ok(nondeg_boundary(phi)?.iter().all(|f| f.nondegenerate))
}

/// With a non-degenerate boundary, non-degeneracy is the limit condition over `Sp^{n,op}`.
/// Returns `None` when the boundary is degenerate.
pub fn nondeg_via_boundary(phi: &UpleSpanDiagram) -> Result<Option<bool>> {
    if !boundary_nondegenerate(phi)? {
        return Ok(None);
    }
    nondeg_rke(phi).map(Some)
}

/// One-axis form: `Φ(-inf)` against the homotopy limit over `Y ∈ Sp^{n-1,op}` of
/// `Φ((A1,Y)^v) ×^h_{Φ((-inf,Y)^v)} Φ((B1,Y)^v)`.
pub fn nondeg_one_axis(phi: &UpleSpanDiagram) -> Result<bool> {
    let n = phi.n;
    if n == 0 {
        return dim_err("one-axis form needs n ≥ 1");
    }
    let rest = pow3(n - 1);
    let dual = |c0: usize, y: usize| phi.tw.dual(c0 * rest + y);
    let d = &phi.diagram;
    let bottom = d.object(0);
    let mut pullbacks = Vec::with_capacity(rest);
    let mut legs = Vec::with_capacity(rest);
    for y in 0..rest {
        let h = hpb(&d.arrow(dual(1, y), dual(0, y)), &d.arrow(dual(2, y), dual(0, y)))?;
        legs.push(h.compare(&d.arrow(0, dual(1, y)), &d.arrow(0, dual(2, y)), &BTreeMap::new())?);
        pullbacks.push(h);
    }
    let index = sp_uple(n - 1).opposite();
    let objects: Vec<RationalComplex> = pullbacks.iter().map(|h| h.complex.clone()).collect();
    // a ≤ b in the opposite order: the dual arrows run (c, a)^v → (c, b)^v
    let arrow = |a: usize, b: usize| {
        let parts: Vec<ChainMap> = (0..3).map(|c| d.arrow(dual(c, a), dual(c, b))).collect();
        hpb_map(&pullbacks[a].complex, &pullbacks[b].complex, &parts[1], &parts[2], &parts[0])
    };
    let psi = Diagram::from_fn(index, objects, arrow)?;
    let h = holim(&psi);
    Ok(h.cone_map(bottom, &legs)?.is_quasi_iso())
}

/// Map of homotopy pullbacks induced by maps of cospans `(a, b, c)`.
fn hpb_map(src: &RationalComplex, tgt: &RationalComplex, a: &ChainMap, b: &ChainMap, c: &ChainMap) -> ChainMap {
    let maps = src
        .dims()
        .keys()
        .map(|&m| {
            let blocks = [a.component(m), b.component(m), c.component(m - 1)];
            let refs: Vec<&Matrix> = blocks.iter().collect();
            (m, Matrix::block_diag(&refs))
        })
        .collect();
    ChainMap::new_unchecked(src.clone(), tgt.clone(), maps)
}

/// `Φ ∘ Tw_!(π_j)`, an uple diagram one dimension up.
pub fn degenerate_along(phi: &UpleSpanDiagram, j: usize) -> Result<UpleSpanDiagram> {
    let n = phi.n + 1;
    let pi = projection(n, j)?;
    let tw = TwistedPoset::new(&sp_uple(n))?;
    let f = TwistedPoset::functor(&pi, &tw, &phi.tw)?;
    UpleSpanDiagram::new(n, phi.diagram.pullback(&f)?)
}

/// A functor on the collapsed twisted `sp^n`.
#[derive(Clone, Debug)]
pub struct FoldSpanDiagram {
    n: usize,
    tw: TwistedPoset,
    diagram: Diagram,
}

impl FoldSpanDiagram {
    pub fn new(n: usize, diagram: Diagram) -> Result<Self> {
        let tw = TwistedPoset::collapsed(&sp_fold(n));
        if diagram.index() != tw.poset() {
            return dim_err(format!("diagram is not indexed by the collapsed twisted sp^{n}"));
        }
        Ok(FoldSpanDiagram { n, tw, diagram })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn twisted(&self) -> &TwistedPoset {
        &self.tw
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    /// Restriction to `sp^n ∪ {(-inf)^v}`, indexed by [`fold_cone_index`].
    pub fn half(&self) -> Diagram {
        let k = 2 * self.n + 1;
        let mapping = (0..=k).map(|i| if i < k { i } else { self.tw.dual(0) }).collect();
        let f = PosetMap::new(fold_cone_index(self.n), self.tw.poset().clone(), mapping).expect("monotone");
        self.diagram.pullback(&f).expect("pullback of a valid diagram")
    }

    /// Precomposition with `Tw_!(j_n)`.
    pub fn to_uple(&self) -> Result<UpleSpanDiagram> {
        let tw = TwistedPoset::new(&sp_uple(self.n))?;
        let f = TwistedPoset::functor(&j_functor(self.n), &tw, &self.tw)?;
        UpleSpanDiagram::new(self.n, self.diagram.pullback(&f)?)
    }
}

pub fn nondeg_fold(f: &FoldSpanDiagram) -> Result<bool> {
    fold_holim_criterion(&f.half())
}

/// `sp^n ▷`: `-inf`, then `A1, B1, …`, then the cone point `inf`.
pub fn fold_cone_index(n: usize) -> Poset {
    sp_fold(n).cone_right(TOP).expect("fresh label")
}

/// `Sp^n ▷`, the cone point last.
pub fn uple_cone_index(n: usize) -> Poset {
    sp_uple(n).cone_right(TOP).expect("fresh label")
}

fn check_fold_cone(f: &Diagram) -> Result<usize> {
    let len = f.index().len();
    if len < 3 || !len.is_multiple_of(2) {
        return dim_err("not indexed by sp^n ▷");
    }
    let n = (len - 2) / 2;
    if f.index() != &fold_cone_index(n) {
        return dim_err("not indexed by sp^n ▷");
    }
    Ok(n)
}

/// (a) `F(-inf) → holim(F|sp^{n,◦,▷})`.
pub fn fold_holim_criterion(f: &Diagram) -> Result<bool> {
    let n = check_fold_cone(f)?;
    let rest: Vec<usize> = (1..=2 * n + 1).collect();
    Ok(limit_comparison(f, 0, &rest)?.is_quasi_iso())
}

/// (b) `F(-inf) → M_n` with `M_0 = F(inf)` and `M_i = F(A_i) ×^h_{M_{i-1}} F(B_i)`.
pub fn fold_iterated_criterion(f: &Diagram) -> Result<bool> {
    let n = check_fold_cone(f)?;
    let top = 2 * n + 1;
    let a = |k: usize| 1 + fold_circ_index(true, k);
    let b = |k: usize| 1 + fold_circ_index(false, k);
    // maps into M_i from -inf and from A_m, B_m with m > i
    let mut into: BTreeMap<usize, ChainMap> = BTreeMap::new();
    into.insert(0, f.arrow(0, top));
    for m in 1..=n {
        into.insert(a(m), f.arrow(a(m), top));
        into.insert(b(m), f.arrow(b(m), top));
    }
    for i in 1..=n {
        let h = hpb(&into[&a(i)], &into[&b(i)])?;
        let sources: Vec<usize> = std::iter::once(0).chain((i + 1..=n).flat_map(|m| [a(m), b(m)])).collect();
        let mut next = BTreeMap::new();
        for e in sources {
            next.insert(e, h.compare(&f.arrow(e, a(i)), &f.arrow(e, b(i)), &BTreeMap::new())?);
        }
        into = next;
    }
    Ok(into[&0].is_quasi_iso())
}

/// (c) The stable square for `F ∘ j_n`, see [`stable_square_criterion`].
pub fn fold_stable_square_criterion(f: &Diagram) -> Result<bool> {
    let n = check_fold_cone(f)?;
    let j = j_functor(n);
    let k = pow3(n);
    let mapping = (0..=k).map(|i| if i < k { j.apply(i) } else { 2 * n + 1 }).collect();
    let jj = PosetMap::new(uple_cone_index(n), fold_cone_index(n), mapping)?;
    stable_square_criterion(&f.pullback(&jj)?)
}

/// For `G` on `Sp^n ▷` with `A = G(inf)`: the square
/// `G(-inf) → holim(G|Sp^{n,◦}) → A[1-n]` is a fiber sequence.
///
/// The second map is `holim G → holim(const A) → A[1-n]`, the last arrow evaluating
/// on a reduced `(n-1)`-cycle of the nerve of `Sp^{n,◦}` (a rational sphere).
pub fn stable_square_criterion(g: &Diagram) -> Result<bool> {
    let k = g.index().len() - 1;
    let n = (0..6).find(|&n| pow3(n) == k).ok_or_else(|| Error::Dimension("not indexed by Sp^n ▷".into()))?;
    if g.index() != &uple_cone_index(n) || n == 0 {
        return dim_err("not indexed by Sp^n ▷ with n ≥ 1");
    }
    let rest: Vec<usize> = (1..k).collect();
    let a = g.object(k).clone();
    let sub = g.restrict(&rest);
    let y = holim(&sub);
    let w = holim(&Diagram::constant(sub.index(), &a));
    let eta: Vec<ChainMap> = rest.iter().map(|&p| g.arrow(p, k)).collect();
    let to_w = y.map_to(&w, &eta)?;

    let sphere = nerve(&sp_uple_circ(n));
    let cycles = sphere.reduced_cycles(n - 1);
    if cycles.ncols() != 1 {
        return Err(Error::Consistency(format!("Sp^{n},◦ has {} reduced (n-1)-cycles", cycles.ncols())));
    }
    let z: Vec<(usize, crate::rational::Q)> = cycles
        .triplets()
        .map(|(row, _, c)| {
            let cell = &sphere.cells(n - 1)[row];
            let idx = w.chain_index(cell).expect("nerve cells are chains");
            (idx, c.clone())
        })
        .collect();
    let ev = w.evaluate_on_chain(n - 1, &z)?;
    let to_sphere = ev.compose(&to_w)?;

    let x = g.object(0);
    let legs: Vec<ChainMap> = rest.iter().map(|&p| g.arrow(0, p)).collect();
    let cone = y.cone_map(x, &legs)?;
    if !to_sphere.compose(&cone)?.is_zero() {
        return Err(Error::Consistency("G(-inf) → A[1-n] is not strictly zero".into()));
    }
    let zero = RationalComplex::zero();
    let h = hpb(&to_sphere, &ChainMap::zero(&zero, to_sphere.target()))?;
    let cmp = h.compare(&cone, &ChainMap::zero(x, &zero), &BTreeMap::new())?;
    Ok(cmp.is_quasi_iso())
}

/// Verdicts of the three fold criteria on one diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FoldCriteria {
    pub holim: bool,
    pub iterated: bool,
    pub stable_square: bool,
}

impl FoldCriteria {
    pub fn agree(&self) -> bool {
        self.holim == self.iterated && self.iterated == self.stable_square
    }
}

pub fn fold_criteria(f: &Diagram) -> Result<FoldCriteria> {
    Ok(FoldCriteria {
        holim: fold_holim_criterion(f)?,
        iterated: fold_iterated_criterion(f)?,
        stable_square: fold_stable_square_criterion(f)?,
    })
}

/// What sits at the initial element of a generated diagram, on top of the strict limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BottomKind {
    /// Exactly the strict limit.
    Strict,
    /// The strict limit plus an acyclic summand.
    Acyclic,
    /// The strict limit plus a summand with homology.
    Degenerate,
}

impl BottomKind {
    pub fn is_degenerate(self) -> bool {
        self == BottomKind::Degenerate
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        match rng.gen_range(0..3) {
            0 => BottomKind::Strict,
            1 => BottomKind::Acyclic,
            _ => BottomKind::Degenerate,
        }
    }
}

fn bottom_summand(rng: &mut impl Rng, kind: BottomKind, shape: &ComplexShape) -> RationalComplex {
    match kind {
        BottomKind::Strict => RationalComplex::zero(),
        BottomKind::Acyclic => random_complex(rng, &ComplexShape { max_dim: shape.max_dim.max(2), ..shape.with(Homology::Acyclic) }),
        BottomKind::Degenerate => random_complex(rng, &ComplexShape { max_dim: shape.max_dim.max(1), ..shape.with(Homology::NonZero) }),
    }
}

/// Random diagram on `sp^n ▷` with free summands of the given shape everywhere but `-inf`.
pub fn random_fold_cone(rng: &mut impl Rng, n: usize, shape: &ComplexShape, bottom: BottomKind) -> Result<Diagram> {
    let index = fold_cone_index(n);
    let mut free: Vec<RationalComplex> = (0..index.len()).map(|_| random_complex(rng, shape)).collect();
    free[0] = bottom_summand(rng, bottom, shape);
    reedy_diagram(rng, &index, &free, true)
}

/// Random uple diagram: free summands on the dual copy, strict limits on `Sp^{n,◦}`,
/// and `bottom` at `-inf`. The boundary is non-degenerate.
pub fn random_uple(rng: &mut impl Rng, n: usize, shape: &ComplexShape, bottom: BottomKind) -> Result<UpleSpanDiagram> {
    let tw = TwistedPoset::new(&sp_uple(n))?;
    let free = twisted_free(rng, &tw, shape, bottom);
    UpleSpanDiagram::new(n, reedy_diagram(rng, tw.poset(), &free, true)?)
}

/// Random fold diagram on the collapsed twisted `sp^n`, built like [`random_uple`].
pub fn random_fold(rng: &mut impl Rng, n: usize, shape: &ComplexShape, bottom: BottomKind) -> Result<FoldSpanDiagram> {
    let tw = TwistedPoset::collapsed(&sp_fold(n));
    let free = twisted_free(rng, &tw, shape, bottom);
    FoldSpanDiagram::new(n, reedy_diagram(rng, tw.poset(), &free, true)?)
}

fn twisted_free(rng: &mut impl Rng, tw: &TwistedPoset, shape: &ComplexShape, bottom: BottomKind) -> Vec<RationalComplex> {
    let len = tw.poset().len();
    (0..len)
        .map(|i| {
            if tw.is_dual(i) {
                random_complex(rng, shape)
            } else if i == 0 {
                bottom_summand(rng, bottom, shape)
            } else {
                RationalComplex::zero()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{normal_form, seeded};

    #[test]
    fn zero_and_constant_diagrams_are_nondegenerate() {
        let z = UpleSpanDiagram::constant(1, &RationalComplex::zero());
        assert!(nondeg_uple(&z).unwrap());
        let c = UpleSpanDiagram::constant(2, &normal_form(&[0, 1], &[]));
        assert!(nondeg_uple(&c).unwrap());
        assert!(boundary_nondegenerate(&c).unwrap());
    }

    #[test]
    fn killing_the_dual_bottom_breaks_nondegeneracy() {
        let a = normal_form(&[0], &[]);
        let c = UpleSpanDiagram::constant(1, &a);
        // Φ with Φ((-inf)^v) = 0 and A elsewhere
        let tw = c.twisted().clone();
        let zero = RationalComplex::zero();
        let objects: Vec<RationalComplex> =
            (0..tw.poset().len()).map(|i| if i == tw.dual(0) { zero.clone() } else { a.clone() }).collect();
        let diag = Diagram::from_fn(tw.poset().clone(), objects.clone(), |x, y| {
            ChainMap::new_unchecked(objects[x].clone(), objects[y].clone(), {
                if objects[x].is_zero() || objects[y].is_zero() {
                    BTreeMap::new()
                } else {
                    [(0, Matrix::identity(1))].into_iter().collect()
                }
            })
        })
        .unwrap();
        let phi = UpleSpanDiagram::new(1, diag).unwrap();
        assert!(!nondeg_uple(&phi).unwrap());
    }

    #[test]
    fn generated_uple_diagrams_match_their_bottom_kind() {
        let mut rng = seeded(11);
        let shape = ComplexShape::small(2);
        for n in 1..=2 {
            for kind in [BottomKind::Strict, BottomKind::Acyclic, BottomKind::Degenerate] {
                let phi = random_uple(&mut rng, n, &shape, kind).unwrap();
                let v = nondeg_uple(&phi).unwrap();
                assert_eq!(v, !kind.is_degenerate(), "n={n} {kind:?}");
                assert!(boundary_nondegenerate(&phi).unwrap());
                assert_eq!(nondeg_rke(&phi).unwrap(), v);
                assert_eq!(nondeg_one_axis(&phi).unwrap(), v);
            }
        }
    }

    #[test]
    fn fold_criteria_agree_on_small_cases() {
        let mut rng = seeded(5);
        let shape = ComplexShape::small(2);
        for n in 1..=2 {
            for kind in [BottomKind::Strict, BottomKind::Acyclic, BottomKind::Degenerate] {
                let f = random_fold_cone(&mut rng, n, &shape, kind).unwrap();
                let c = fold_criteria(&f).unwrap();
                assert!(c.agree(), "{c:?}");
                assert_eq!(c.holim, !kind.is_degenerate());
            }
        }
    }

    #[test]
    fn degenerate_pullbacks_stay_nondegenerate() {
        let mut rng = seeded(9);
        let phi = random_uple(&mut rng, 1, &ComplexShape::small(2), BottomKind::Strict).unwrap();
        for j in 1..=2 {
            let up = degenerate_along(&phi, j).unwrap();
            assert!(nondeg_uple(&up).unwrap());
        }
    }

    #[test]
    fn fold_and_uple_verdicts_agree() {
        let mut rng = seeded(13);
        for kind in [BottomKind::Strict, BottomKind::Degenerate] {
            let f = random_fold(&mut rng, 2, &ComplexShape::small(2), kind).unwrap();
            let u = f.to_uple().unwrap();
            assert_eq!(nondeg_fold(&f).unwrap(), nondeg_uple(&u).unwrap());
        }
    }

    #[test]
    fn faces_of_sp2() {
        let e = face_embedding(2, uple_index(&[1, 0]));
        assert_eq!(e.source.len(), 3);
        assert_eq!(e.apply(0), uple_index(&[1, 0]));
        assert_eq!(e.apply(2), uple_index(&[1, 2]));
    }
}
