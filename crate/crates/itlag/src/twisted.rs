//! Twisted arrow posets `Tw^r(P)`, the doubled posets `Tw_!(P)` with elements
//! `x` and `x^v`, hom-nerves of the non-poset cases, and coinitiality reports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{dim_err, Error, Result};
use crate::shape::nerve::{nerve, SemiSimplicialSet};
use crate::shape::poset::{Poset, PosetMap};

/// Suffix marking the dual copy of an element.
pub const DUAL_SUFFIX: &str = "^v";

pub fn dual_label(l: &str) -> String {
    format!("{l}{DUAL_SUFFIX}")
}

/// Pairs `p ≤ q` with `(p,q) ≤ (p',q')` iff `p ≤ p'` and `q' ≤ q`.
pub fn tw_r(p: &Poset) -> Poset {
    let pairs: Vec<(usize, usize)> = p.relations();
    let labels = pairs.iter().map(|&(a, b)| format!("({},{})", p.label(a), p.label(b))).collect();
    Poset::from_fn(labels, |i, j| {
        let ((a, b), (c, d)) = (pairs[i], pairs[j]);
        p.leq(a, c) && p.leq(d, b)
    })
    .expect("twisted arrow order is a partial order")
}

/// Finds a pair with an upper bound but no least upper bound.
pub fn bounded_pair_violation(p: &Poset) -> Option<(usize, usize)> {
    let n = p.len();
    for a in 0..n {
        for b in a + 1..n {
            let has_ub = (0..n).any(|c| p.leq(a, c) && p.leq(b, c));
            if has_ub && p.join(a, b).is_none() {
                return Some((a, b));
            }
        }
    }
    None
}

/// `Tw_!(P)` as a poset: `x` has index `i`, `x^v` has index `|P| + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPoset {
    base: Poset,
    poset: Poset,
}

fn doubled(base: &Poset) -> Poset {
    let n = base.len();
    let mut labels: Vec<String> = base.labels().to_vec();
    labels.extend(base.labels().iter().map(|l| dual_label(l)));
    Poset::from_fn(labels, |i, j| match (i < n, j < n) {
        (true, true) => base.leq(i, j),
        (false, false) => base.leq(j - n, i - n),
        (true, false) => (0..n).any(|z| base.leq(i, z) && base.leq(j - n, z)),
        (false, true) => false,
    })
    .expect("doubled order is a partial order")
}

impl TwistedPoset {
    /// Fails with a witness pair unless every upper-bounded pair has a join.
    pub fn new(base: &Poset) -> Result<Self> {
        if let Some((a, b)) = bounded_pair_violation(base) {
            return Err(Error::NoJoin(base.label(a).to_string(), base.label(b).to_string()));
        }
        Ok(TwistedPoset { base: base.clone(), poset: doubled(base) })
    }

    /// The same order without the criterion: when joins are missing this is the
    /// category with parallel morphisms `x → y^v` identified.
    pub fn collapsed(base: &Poset) -> Self {
        TwistedPoset { base: base.clone(), poset: doubled(base) }
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn plain(&self, i: usize) -> usize {
        i
    }

    pub fn dual(&self, i: usize) -> usize {
        self.base.len() + i
    }

    pub fn is_dual(&self, idx: usize) -> bool {
        idx >= self.base.len()
    }

    pub fn base_index(&self, idx: usize) -> usize {
        idx % self.base.len()
    }

    /// `x ↦ x`.
    pub fn plain_embedding(&self) -> PosetMap {
        PosetMap::new(self.base.clone(), self.poset.clone(), (0..self.base.len()).collect()).expect("monotone")
    }

    /// `x ↦ x^v` from the opposite poset.
    pub fn dual_embedding(&self) -> PosetMap {
        let n = self.base.len();
        PosetMap::new(self.base.opposite(), self.poset.clone(), (n..2 * n).collect()).expect("monotone")
    }

    /// `Tw_!(f)`: `x ↦ f(x)`, `x^v ↦ f(x)^v`.
    pub fn functor(f: &PosetMap, source: &TwistedPoset, target: &TwistedPoset) -> Result<PosetMap> {
        if f.source != source.base || f.target != target.base {
            return dim_err("Tw_!(f): bases do not match");
        }
        let n = source.base.len();
        let mapping = (0..2 * n)
            .map(|i| if i < n { target.plain(f.apply(i)) } else { target.dual(f.apply(i - n)) })
            .collect();
        PosetMap::new(source.poset.clone(), target.poset.clone(), mapping)
    }
}

pub fn tw_shriek_poset(p: &Poset) -> Result<TwistedPoset> {
    TwistedPoset::new(p)
}

/// Nerve of the double coslice `{z : x ≤ z, y ≤ z}`, modelling `Map(x, y^v)`.
pub fn tw_shriek_homs(p: &Poset, x: usize, y: usize) -> SemiSimplicialSet {
    let elems: Vec<usize> = (0..p.len()).filter(|&z| p.leq(x, z) && p.leq(y, z)).collect();
    nerve(&p.subposet(&elems))
}

/// Summary of one hom-nerve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomType {
    pub components: usize,
    pub reduced_homology: BTreeMap<usize, usize>,
    pub has_initial: bool,
}

/// `Tw_!(P)` presented by its hom-nerves `Map(x, y^v)`.
#[derive(Clone, Debug)]
pub struct TwistedCategory {
    base: Poset,
    homs: BTreeMap<(usize, usize), SemiSimplicialSet>,
}

impl TwistedCategory {
    pub fn new(base: &Poset) -> Self {
        let n = base.len();
        let homs = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| ((x, y), tw_shriek_homs(base, x, y))).collect();
        TwistedCategory { base: base.clone(), homs }
    }

    pub fn base(&self) -> &Poset {
        &self.base
    }

    pub fn hom_nerve(&self, x: usize, y: usize) -> &SemiSimplicialSet {
        &self.homs[&(x, y)]
    }

    pub fn hom_type(&self, x: usize, y: usize) -> HomType {
        let s = &self.homs[&(x, y)];
        let elems: Vec<usize> = (0..self.base.len()).filter(|&z| self.base.leq(x, z) && self.base.leq(y, z)).collect();
        let has_initial = elems.iter().any(|&a| elems.iter().all(|&b| self.base.leq(a, b)));
        HomType { components: s.components(), reduced_homology: s.reduced_homology(), has_initial }
    }

    /// Whether every `Map(x, y^v)` is empty or contractible (certified by an initial element).
    pub fn is_poset_like(&self) -> bool {
        let n = self.base.len();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let t = self.hom_type(x, y);
                t.components == 0 || t.has_initial
            })
        })
    }
}

/// Whether `Tw_!(P^◁)` is isomorphic to `Tw_!(P)` with an initial and a terminal element adjoined.
pub fn cone_compatibility(p: &Poset) -> Result<bool> {
    let coned = p.cone_left("-inf")?;
    let lhs = TwistedPoset::new(&coned)?;
    let rhs = TwistedPoset::new(p)?.poset.cone_left("-inf")?.cone_right(&dual_label("-inf"))?;
    Ok(lhs.poset.isomorphism_to(&rhs).is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SliceVerdict {
    ContractibleCertified,
    QAcyclic,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub target: String,
    pub verdict: SliceVerdict,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoinitialReport {
    pub slices: Vec<SliceReport>,
}

impl CoinitialReport {
    pub fn passes(&self) -> bool {
        self.slices.iter().all(|s| s.verdict != SliceVerdict::Fails)
    }
}

fn classify(p: &Poset, elems: &[usize]) -> (SliceVerdict, Option<String>) {
    if elems.is_empty() {
        return (SliceVerdict::Fails, Some("empty slice".into()));
    }
    let s = p.subposet(elems);
    if s.initial().is_some() || s.terminal().is_some() {
        return (SliceVerdict::ContractibleCertified, None);
    }
    let h = nerve(&s).reduced_homology();
    match h.iter().next() {
        None => (SliceVerdict::QAcyclic, None),
        Some((&deg, &rank)) => (SliceVerdict::Fails, Some(format!("reduced H_{deg} has rank {rank}"))),
    }
}

/// For each `q` in the target, classifies the slice `{p : F(p) ≤ q}`.
pub fn check_coinitial(f: &PosetMap) -> CoinitialReport {
    let slices = (0..f.target.len())
        .into_par_iter()
        .map(|q| {
            let elems: Vec<usize> = (0..f.source.len()).filter(|&p| f.target.leq(f.apply(p), q)).collect();
            let (verdict, witness) = classify(&f.source, &elems);
            SliceReport { target: f.target.label(q).to_string(), verdict, witness }
        })
        .collect();
    CoinitialReport { slices }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::shapes::{j_circ_functor, sigma, sigma_pairs, sp_fold, sp_uple, sp_uple_circ};

    fn ordinal(n: usize) -> Poset {
        let labels = (0..=n).map(|i| i.to_string()).collect();
        let rel: Vec<(usize, usize)> = (1..=n).map(|i| (i - 1, i)).collect();
        Poset::new(labels, &rel).unwrap()
    }

    #[test]
    fn tw_of_ordinals_is_sigma() {
        for n in 0..=4 {
            assert!(tw_r(&ordinal(n)).isomorphism_to(&sigma(n)).is_some());
        }
        assert_eq!(tw_r(&Poset::point()).len(), 1);
        assert_eq!(tw_r(&sp_fold(1)).len(), 5);
    }

    #[test]
    fn sigma_rules() {
        for n in 0..=3 {
            let t = tw_shriek_poset(&sigma(n)).unwrap();
            let pairs = sigma_pairs(n);
            for (a, &(i, j)) in pairs.iter().enumerate() {
                for (b, &(k, l)) in pairs.iter().enumerate() {
                    assert_eq!(t.poset().leq(t.plain(a), t.dual(b)), i.max(k) <= j.min(l));
                    assert!(!t.poset().leq(t.dual(a), t.plain(b)));
                }
            }
        }
    }

    #[test]
    fn sp_one_matches_picture() {
        let t = tw_shriek_poset(&sigma(1)).unwrap();
        assert_eq!(t.poset().len(), 6);
        let u = tw_shriek_poset(&sp_uple(1)).unwrap();
        assert!(t.poset().isomorphism_to(u.poset()).is_some());
        // -inf, A1, B1, A1^v, B1^v, -inf^v: a hexagon
        assert_eq!(u.poset().covers().len(), 6);
    }

    #[test]
    fn fold_spans_violate_the_criterion() {
        assert!(matches!(tw_shriek_poset(&sp_fold(2)), Err(Error::NoJoin(_, _))));
        let p = sp_fold(2);
        let h = tw_shriek_homs(&p, p.element("A2").unwrap(), p.element("B2").unwrap());
        assert_eq!(h.counts(), vec![2]);
        let p3 = sp_fold(3);
        let h3 = tw_shriek_homs(&p3, p3.element("A3").unwrap(), p3.element("B3").unwrap());
        assert_eq!(h3.reduced_homology(), [(1, 1)].into());
        let s1 = sigma(1);
        // (0,1) is the bottom of Σ^1, so (0,0) and (1,1) have no common upper bound
        let h = tw_shriek_homs(&s1, s1.element("(0,0)").unwrap(), s1.element("(1,1)").unwrap());
        assert!(h.counts().is_empty());
        let h = tw_shriek_homs(&s1, s1.element("(0,1)").unwrap(), s1.element("(0,0)").unwrap());
        assert_eq!(h.counts(), vec![1]);
    }

    #[test]
    fn cones() {
        assert!(cone_compatibility(&sigma(1)).unwrap());
        assert!(cone_compatibility(&sigma(2)).unwrap());
        assert!(cone_compatibility(&Poset::point()).unwrap());
        assert!(cone_compatibility(&sp_uple_circ(2)).unwrap());
    }

    #[test]
    fn coinitiality() {
        for n in 1..=3 {
            assert!(check_coinitial(&j_circ_functor(n)).passes(), "j_{n}");
        }
        let s = sigma(2);
        assert!(check_coinitial(&tw_shriek_poset(&s).unwrap().plain_embedding()).passes());
        let id = check_coinitial(&PosetMap::identity(&sp_uple(2)));
        assert!(id.slices.iter().all(|r| r.verdict == SliceVerdict::ContractibleCertified));
    }

    #[test]
    fn a_non_coinitial_map_fails() {
        // two points into a point: the slice is discrete on two elements
        let two = Poset::new(vec!["a".into(), "b".into()], &[]).unwrap();
        let f = PosetMap::new(two, Poset::point(), vec![0, 0]).unwrap();
        let r = check_coinitial(&f);
        assert!(!r.passes());
        assert!(r.slices[0].witness.as_deref().unwrap().contains("H_0"));
    }

    #[test]
    fn joins_give_point_homs() {
        let s = sigma(2).cone_right("top").unwrap();
        let c = TwistedCategory::new(&s);
        assert!(c.is_poset_like());
        assert!(!TwistedCategory::new(&sp_fold(2)).is_poset_like());
    }
}
