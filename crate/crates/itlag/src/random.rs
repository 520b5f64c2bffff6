//! Seeded random instances: complexes, chain maps and Reedy-fibrant diagrams.
//!
//! Complexes are built in a normal form (homology classes plus contractible
//! pairs `ℚ → ℚ`) and conjugated degreewise by random integer matrices with unit
//! triangular factors, so `d∘d = 0` holds by construction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::homlin::complex::RationalComplex;
use crate::homlin::diagram::{strict_limit, Diagram};
use crate::homlin::map::ChainMap;
use crate::homlin::ops::map_from_sum;
use crate::linalg::Matrix;
use crate::rational::q;
use crate::shape::poset::Poset;

pub type WorkRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> WorkRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit lower times unit upper triangular, entries in `-2..=2`; returns `(P, P^{-1})`.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> (Matrix, Matrix) {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for i in 0..n {
        lower.push((i, i, q(1)));
        upper.push((i, i, q(1)));
        for j in 0..i {
            lower.push((i, j, q(rng.gen_range(-2..=2))));
            upper.push((j, i, q(rng.gen_range(-2..=2))));
        }
    }
    let p = Matrix::from_triplets(n, n, lower).mul(&Matrix::from_triplets(n, n, upper));
    let inv = p.inverse().expect("unit triangular factors are invertible");
    (p, inv)
}

/// Shape of a random complex.
#[derive(Clone, Copy, Debug)]
pub struct ComplexShape {
    pub min_degree: i32,
    pub max_degree: i32,
    /// Upper bound on the total dimension.
    pub max_dim: usize,
    pub homology: Homology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homology {
    Any,
    Acyclic,
    NonZero,
}

impl Default for ComplexShape {
    fn default() -> Self {
        ComplexShape { min_degree: -3, max_degree: 3, max_dim: 6, homology: Homology::Any }
    }
}

impl ComplexShape {
    pub fn small(max_dim: usize) -> Self {
        ComplexShape { min_degree: -1, max_degree: 1, max_dim, homology: Homology::Any }
    }

    pub fn with(self, homology: Homology) -> Self {
        ComplexShape { homology, ..self }
    }
}

/// A complex from a list of homology degrees and contractible pairs `n → n+1`.
pub fn normal_form(classes: &[i32], pairs: &[i32]) -> RationalComplex {
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    for &c in classes {
        *dims.entry(c).or_default() += 1;
    }
    let mut slots: Vec<(i32, usize, usize)> = Vec::new();
    for &p in pairs {
        let src = *dims.entry(p).or_default();
        *dims.get_mut(&p).unwrap() += 1;
        let tgt = *dims.entry(p + 1).or_default();
        *dims.get_mut(&(p + 1)).unwrap() += 1;
        slots.push((p, src, tgt));
    }
    let mut trip: BTreeMap<i32, Vec<(usize, usize, crate::rational::Q)>> = BTreeMap::new();
    for (p, s, t) in slots {
        trip.entry(p).or_default().push((t, s, q(1)));
    }
    let d = trip
        .into_iter()
        .map(|(p, t)| (p, Matrix::from_triplets(dims[&(p + 1)], dims[&p], t)))
        .collect();
    RationalComplex::new(dims, d).expect("normal form is a complex")
}

/// Conjugates each degree by a random invertible matrix.
pub fn scramble(rng: &mut impl Rng, c: &RationalComplex) -> RationalComplex {
    scramble_with_iso(rng, c).0
}

/// Like [`scramble`], also returning the isomorphisms `c → c'` and `c' → c`.
pub fn scramble_with_iso(rng: &mut impl Rng, c: &RationalComplex) -> (RationalComplex, ChainMap, ChainMap) {
    let mut ps: BTreeMap<i32, (Matrix, Matrix)> = BTreeMap::new();
    for (&n, &k) in c.dims() {
        ps.insert(n, random_invertible(rng, k));
    }
    let d = c
        .diff_iter()
        .map(|(&n, m)| (n, ps[&(n + 1)].0.mul(m).mul(&ps[&n].1)))
        .collect();
    let out = RationalComplex::new(c.dims().clone(), d).expect("conjugate of a complex");
    let to = ps.iter().map(|(&n, (p, _))| (n, p.clone())).collect();
    let from = ps.iter().map(|(&n, (_, pi))| (n, pi.clone())).collect();
    let to = ChainMap::new(c.clone(), out.clone(), to).expect("conjugation is a chain map");
    let from = ChainMap::new(out.clone(), c.clone(), from).expect("conjugation is a chain map");
    (out, to, from)
}

pub fn random_complex(rng: &mut impl Rng, shape: &ComplexShape) -> RationalComplex {
    let degs: Vec<i32> = (shape.min_degree..=shape.max_degree).collect();
    loop {
        let total = rng.gen_range(0..=shape.max_dim);
        let mut classes = Vec::new();
        let mut pairs = Vec::new();
        let mut used = 0;
        while used < total {
            let want_pair = match shape.homology {
                Homology::Acyclic => true,
                _ => rng.gen_bool(0.5),
            };
            if want_pair && used + 2 <= total && degs.len() > 1 {
                let p = degs[rng.gen_range(0..degs.len() - 1)];
                pairs.push(p);
                used += 2;
            } else if shape.homology != Homology::Acyclic {
                classes.push(*degs.choose(rng).unwrap());
                used += 1;
            } else {
                break;
            }
        }
        if shape.homology == Homology::NonZero && classes.is_empty() {
            if shape.max_dim == 0 {
                return RationalComplex::zero();
            }
            classes.push(*degs.choose(rng).unwrap());
            if pairs.len() * 2 + classes.len() > shape.max_dim {
                pairs.pop();
            }
        }
        let c = normal_form(&classes, &pairs);
        let ok = match shape.homology {
            Homology::Any => true,
            Homology::Acyclic => c.is_acyclic(),
            Homology::NonZero => !c.is_acyclic(),
        };
        if ok {
            return scramble(rng, &c);
        }
    }
}

/// A basis of the chain maps `s → t`, each as a [`ChainMap`].
pub fn chain_map_basis(s: &RationalComplex, t: &RationalComplex) -> Vec<ChainMap> {
    let degs: Vec<i32> = s.dims().keys().copied().filter(|&n| t.dim(n) > 0).collect();
    let mut offsets = BTreeMap::new();
    let mut nvars = 0;
    for &n in &degs {
        offsets.insert(n, nvars);
        nvars += t.dim(n) * s.dim(n);
    }
    if nvars == 0 {
        return Vec::new();
    }
    // d_T f^n - f^{n+1} d_S = 0 for every n
    let mut trip = Vec::new();
    let mut row = 0;
    let mut check: Vec<i32> = degs.iter().flat_map(|&n| [n, n - 1]).collect();
    check.sort_unstable();
    check.dedup();
    for n in check {
        let (rows, cols) = (t.dim(n + 1), s.dim(n));
        if rows * cols == 0 {
            continue;
        }
        let dt = t.diff(n);
        let ds = s.diff(n);
        for i in 0..rows {
            for j in 0..cols {
                let r = row + i * cols + j;
                if let Some(&o) = offsets.get(&n) {
                    for (k, v) in dt.row(i) {
                        trip.push((r, o + k * s.dim(n) + j, v.clone()));
                    }
                }
                if let Some(&o) = offsets.get(&(n + 1)) {
                    for (k, v) in ds.transpose().row(j) {
                        trip.push((r, o + i * s.dim(n + 1) + k, -v.clone()));
                    }
                }
            }
        }
        row += rows * cols;
    }
    let ker = Matrix::from_triplets(row, nvars, trip).kernel();
    (0..ker.ncols())
        .map(|c| {
            let col = ker.column(c);
            let maps = degs
                .iter()
                .map(|&n| {
                    let o = offsets[&n];
                    let (r, k) = (t.dim(n), s.dim(n));
                    let m = Matrix::from_triplets(
                        r,
                        k,
                        (0..r).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| (i, j, col[o + i * k + j].clone())),
                    );
                    (n, m)
                })
                .collect();
            ChainMap::new(s.clone(), t.clone(), maps).expect("kernel vectors are chain maps")
        })
        .collect()
}

/// A random integer combination of a chain-map basis.
pub fn random_chain_map(rng: &mut impl Rng, s: &RationalComplex, t: &RationalComplex) -> ChainMap {
    let mut f = ChainMap::zero(s, t);
    for b in chain_map_basis(s, t) {
        let c = rng.gen_range(-2..=2);
        if c != 0 {
            f = f.add(&b.scale(&q(c))).expect("same endpoints");
        }
    }
    f
}

/// Builds `D(p) = M_p ⊕ K_p` top-down, where `M_p` is the strict limit over the
/// elements strictly above `p` and `D(p) → M_p` is `(m, k) ↦ m + φ_p(k)`.
/// Every matching map is surjective, so strict limits of the result are homotopy limits.
pub fn reedy_diagram(
    rng: &mut impl Rng,
    index: &Poset,
    free: &[RationalComplex],
    twist: bool,
) -> Result<Diagram> {
    let n = index.len();
    let mut objects: Vec<RationalComplex> = vec![RationalComplex::zero(); n];
    let mut legs: Vec<BTreeMap<usize, ChainMap>> = vec![BTreeMap::new(); n];
    let mut order = index.linear_extension();
    order.reverse();
    for &p in &order {
        let above: Vec<usize> = (0..n).filter(|&x| index.lt(p, x)).collect();
        let k = &free[p];
        if above.is_empty() {
            objects[p] = k.clone();
            continue;
        }
        // strict limit over the up-set, using the arrows built so far
        let sub_index = index.subposet(&above);
        let sub_objects: Vec<RationalComplex> = above.iter().map(|&x| objects[x].clone()).collect();
        let sub = Diagram::from_fn(sub_index, sub_objects, |a, b| legs[above[a]][&above[b]].clone())?;
        let lim = strict_limit(&sub);
        let m = lim.complex.clone();
        let obj = RationalComplex::direct_sum(&[&m, k]);
        let phi = if twist { random_chain_map(rng, k, &m) } else { ChainMap::zero(k, &m) };
        let to_m = map_from_sum(&m, &[&ChainMap::identity(&m), &phi])?;
        for (i, &x) in above.iter().enumerate() {
            legs[p].insert(x, lim.legs[i].compose(&to_m)?);
        }
        objects[p] = obj;
    }
    Diagram::from_fn(index.clone(), objects, |a, b| legs[a][&b].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homlin::diagram::is_limit_cone;
    use crate::shape::shapes::sigma;

    #[test]
    fn random_complexes_have_requested_homology() {
        let mut rng = seeded(7);
        for _ in 0..20 {
            let c = random_complex(&mut rng, &ComplexShape::default().with(Homology::Acyclic));
            assert!(c.is_acyclic());
            let c = random_complex(&mut rng, &ComplexShape::default().with(Homology::NonZero));
            assert!(!c.is_acyclic());
            assert!(c.total_dim() <= 6);
        }
    }

    #[test]
    fn chain_map_basis_of_identity_space() {
        let c = normal_form(&[0], &[0]);
        let b = chain_map_basis(&c, &c);
        // End(ℚ ⊕ (ℚ → ℚ)) as chain maps
        assert!(b.iter().all(|f| f.source() == &c));
        assert!(!b.is_empty());
    }

    #[test]
    fn reedy_diagrams_are_limits_when_bottom_is_free_of_junk() {
        let mut rng = seeded(3);
        let p = sigma(1);
        let mut free: Vec<RationalComplex> =
            (0..p.len()).map(|_| random_complex(&mut rng, &ComplexShape::small(2))).collect();
        let bottom = p.initial().unwrap();
        free[bottom] = RationalComplex::zero();
        let d = reedy_diagram(&mut rng, &p, &free, true).unwrap();
        assert!(is_limit_cone(&d).unwrap());
        free[bottom] = normal_form(&[0], &[]);
        let d = reedy_diagram(&mut rng, &p, &free, true).unwrap();
        assert!(!is_limit_cone(&d).unwrap());
    }
}
