//! Isotropic and Lagrangian correspondences `X ← L → Y`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{dim_err, invariant, Error, Result};
use crate::homlin::complex::{matrix_from_json, matrix_to_json, RationalComplex};
use crate::homlin::map::{homotopy_boundary, solve_null_homotopy, ChainHomotopy, ChainMap};
use crate::homlin::ops::{hpb, map_from_sum, sum_inclusion, sum_projection};
use crate::linalg::Matrix;
use crate::random::{chain_map_basis, random_complex, ComplexShape, Homology};
use crate::rational::q;

use super::symplectic::{random_hyperbolic, SymplecticComplex};
use super::{add, after, before, cartesian_comparison, quadratic, quadratic_homotopy, scale, solution_space, Homotopy};

/// `α: L → V_left`, `β: L → V_right` and `h` with `dh + hd = Q_right(β) - Q_left(α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    left: SymplecticComplex,
    right: SymplecticComplex,
    apex: RationalComplex,
    alpha: ChainMap,
    beta: ChainMap,
    h: Homotopy,
}

impl Correspondence {
    /// Validates the isotropic structure.
    pub fn new(
        left: SymplecticComplex,
        right: SymplecticComplex,
        alpha: ChainMap,
        beta: ChainMap,
        h: Homotopy,
    ) -> Result<Self> {
        if left.shift() != right.shift() {
            return dim_err("correspondence between objects of different shifts");
        }
        if alpha.source() != beta.source() {
            return dim_err("legs have different sources");
        }
        if alpha.target() != left.complex() || beta.target() != right.complex() {
            return dim_err("legs do not land in the symplectic complexes");
        }
        let s = left.shift();
        let ql = quadratic(&left.pairing(), &alpha, s);
        let qr = quadratic(&right.pairing(), &beta, s);
        ChainHomotopy::new(ql, qr, h.clone()).map_err(|e| Error::Invariant(format!("isotropic structure: {e}")))?;
        let apex = alpha.source().clone();
        let mut h = h;
        h.retain(|_, m| !m.is_zero());
        Ok(Correspondence { left, right, apex, alpha, beta, h })
    }

    /// `X ← X → X` with identity legs.
    pub fn identity(x: &SymplecticComplex) -> Self {
        let id = ChainMap::identity(x.complex());
        Correspondence::new(x.clone(), x.clone(), id.clone(), id, Homotopy::new()).expect("the diagonal is isotropic")
    }

    /// The graph `X ← X → Y` of a map with `Q_Y(φ) = ω̃_X`.
    pub fn graph(x: &SymplecticComplex, y: &SymplecticComplex, phi: &ChainMap) -> Result<Self> {
        Correspondence::new(x.clone(), y.clone(), ChainMap::identity(x.complex()), phi.clone(), Homotopy::new())
    }

    pub fn left(&self) -> &SymplecticComplex {
        &self.left
    }

    pub fn right(&self) -> &SymplecticComplex {
        &self.right
    }

    pub fn apex(&self) -> &RationalComplex {
        &self.apex
    }

    pub fn alpha(&self) -> &ChainMap {
        &self.alpha
    }

    pub fn beta(&self) -> &ChainMap {
        &self.beta
    }

    pub fn homotopy(&self) -> &Homotopy {
        &self.h
    }

    pub fn shift(&self) -> i32 {
        self.left.shift()
    }

    /// `L → hpb(f: V_l ⊕ V_r → L^∨[s] ← 0)`, `x ↦ (αx, βx, -hx)`, where
    /// `f(v, w) = α^∨ω̃_l v - β^∨ω̃_r w`.
    pub fn comparison(&self) -> Result<ChainMap> {
        cartesian_comparison(&self.left.pairing(), &self.right.pairing(), &self.alpha, &self.beta, &self.h, self.shift())
    }

    pub fn is_lagrangian(&self) -> Result<bool> {
        Ok(self.comparison()?.is_quasi_iso())
    }

    /// Whether `φ: L → L'` is an equivalence onto `other`: a quasi-isomorphism with
    /// `α'φ = α`, `β'φ = β`, and `φ^∨h'φ - h` exact.
    pub fn is_equivalent_via(&self, other: &Correspondence, phi: &ChainMap) -> Result<bool> {
        if self.left != other.left || self.right != other.right {
            return Ok(false);
        }
        if phi.source() != &self.apex || phi.target() != &other.apex {
            return dim_err("comparison map has the wrong endpoints");
        }
        if other.alpha.compose(phi)? != self.alpha || other.beta.compose(phi)? != self.beta {
            return Ok(false);
        }
        if !phi.is_quasi_iso() {
            return Ok(false);
        }
        let s = self.shift();
        let back = phi.dual().shift(s);
        let pulled = after(&back, &before(&other.h, phi, &other.apex.dual().shift(s)), &self.apex);
        let diff = add(&pulled, &scale(&self.h, &q(-1)));
        let target = self.apex.dual().shift(s).shift(-1);
        let cycle = ChainMap::new(self.apex.clone(), target, diff)
            .map_err(|e| Error::Consistency(format!("homotopy difference is not closed: {e}")))?;
        Ok(cycle.is_zero() || solve_null_homotopy(&cycle).is_some())
    }

    pub fn to_json(&self) -> Value {
        let fam = |m: &BTreeMap<i32, Matrix>| -> Value {
            Value::Object(m.iter().map(|(n, x)| (n.to_string(), matrix_to_json(x))).collect::<Map<String, Value>>())
        };
        json!({
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "apex": self.apex.to_json(),
            "alpha": fam(self.alpha.components()),
            "beta": fam(self.beta.components()),
            "h": fam(&self.h),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let left = SymplecticComplex::from_json(&v["left"])?;
        let right = SymplecticComplex::from_json(&v["right"])?;
        let apex = RationalComplex::from_json(&v["apex"])?;
        let s = left.shift();
        let fam = |key: &str, rows: &dyn Fn(i32) -> usize| -> Result<BTreeMap<i32, Matrix>> {
            let mut out = BTreeMap::new();
            if let Some(obj) = v.get(key).and_then(Value::as_object) {
                for (k, m) in obj {
                    let n: i32 = k.parse().map_err(|_| Error::Parse(format!("{key}: bad degree {k:?}")))?;
                    out.insert(n, matrix_from_json(m, rows(n), apex.dim(n))?);
                }
            }
            Ok(out)
        };
        let lc = left.complex().clone();
        let rc = right.complex().clone();
        let alpha = ChainMap::new(apex.clone(), lc.clone(), fam("alpha", &|n| lc.dim(n))?)?;
        let beta = ChainMap::new(apex.clone(), rc.clone(), fam("beta", &|n| rc.dim(n))?)?;
        let ld = apex.dual().shift(s);
        let h = fam("h", &|n| ld.dim(n - 1))?;
        Correspondence::new(left, right, alpha, beta, h)
    }
}

/// Composite `X ← L_1 ×^h_Y L_2 → Z`. The homotopy is
/// `p_1^∨h_1p_1 + p_2^∨h_2p_2 - H`, with `H` built from the witness coordinate `k`
/// of the pullback, for which `dk + kd = β_1p_1 - α_2p_2`.
pub fn compose(c1: &Correspondence, c2: &Correspondence) -> Result<Correspondence> {
    if c1.right != c2.left {
        return invariant("middle objects differ");
    }
    let s = c1.shift();
    let y = c1.right.complex();
    let pb = hpb(&c1.beta, &c2.alpha)?;
    let l = pb.complex.clone();
    let p1 = pb.to_left.clone();
    let p2 = pb.to_right.clone();
    let k: Homotopy = l
        .dims()
        .keys()
        .filter_map(|&n| {
            let (_, _, oc) = pb.offsets(n);
            let r = y.dim(n - 1);
            if r == 0 {
                return None;
            }
            let mut m = Matrix::zeros(r, l.dim(n));
            m.add_block(0, oc, &Matrix::identity(r));
            Some((n, m))
        })
        .collect();
    let pull = |h: &Homotopy, p: &ChainMap, apex: &RationalComplex| {
        after(&p.dual().shift(s), &before(h, p, &apex.dual().shift(s)), &l)
    };
    let u = c1.beta.compose(&p1)?;
    let v = c2.alpha.compose(&p2)?;
    let hk = quadratic_homotopy(&c1.right.pairing(), &u, &v, &k, s);
    let h = add(&add(&pull(&c1.h, &p1, &c1.apex), &pull(&c2.h, &p2, &c2.apex)), &scale(&hk, &q(-1)));
    Correspondence::new(c1.left.clone(), c2.right.clone(), c1.alpha.compose(&p1)?, c2.beta.compose(&p2)?, h)
}

/// The map `L → apex(compose(id, c))`, `x ↦ (αx, x, 0)`.
pub fn unit_comparison(c: &Correspondence, composite: &Correspondence) -> Result<ChainMap> {
    let l = &c.apex;
    let target = composite.apex.clone();
    let maps = l
        .dims()
        .keys()
        .map(|&n| {
            let mut m = Matrix::zeros(target.dim(n), l.dim(n));
            m.add_block(0, 0, &c.alpha.component(n));
            m.add_block(c.left.complex().dim(n), 0, &Matrix::identity(l.dim(n)));
            (n, m)
        })
        .collect();
    ChainMap::new(l.clone(), target, maps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeloopVerdict {
    /// `0 ← V → 0` with isotropic structure `h` is Lagrangian.
    pub lagrangian: bool,
    /// `(V, s-1, h)` is symplectic.
    pub symplectic: bool,
}

impl DeloopVerdict {
    pub fn agree(&self) -> bool {
        self.lagrangian == self.symplectic
    }
}

/// Both sides of the delooping statement for `h: V → V^∨[s-1]`, computed independently.
pub fn deloop(v: &RationalComplex, s: i32, h: &ChainMap) -> Result<DeloopVerdict> {
    let inner = SymplecticComplex::from_blocks(v, s - 1, h.components().clone())?;
    let symplectic = super::check_symplectic(v, s - 1, h)?.ok();
    let zero = SymplecticComplex::zero(s);
    let z = RationalComplex::zero();
    let corr = Correspondence::new(zero.clone(), zero, ChainMap::zero(v, &z), ChainMap::zero(v, &z), inner.form().blocks().clone())?;
    Ok(DeloopVerdict { lagrangian: corr.is_lagrangian()?, symplectic })
}

/// Random hyperbolic object `W ⊕ W^∨[s]` with `W` of total dimension at most `max_dim`.
pub fn random_object(rng: &mut impl Rng, s: i32, max_dim: usize) -> (RationalComplex, SymplecticComplex) {
    let w = random_complex(rng, &ComplexShape::small(max_dim));
    let x = random_hyperbolic(rng, &w, s);
    (w, x)
}

/// A random Lagrangian correspondence between hyperbolic objects `X = W_X ⊕ W_X^∨[s]`
/// and `Y`: the graph of a shear over `W_X ⊕ W_Y` inside `X̄ × Y`, plus an acyclic
/// summand and a homotopy perturbation of the legs.
pub fn random_lagrangian(
    rng: &mut impl Rng,
    (wx, x): (&RationalComplex, &SymplecticComplex),
    (wy, y): (&RationalComplex, &SymplecticComplex),
) -> Result<Correspondence> {
    let s = x.shift();
    let u = x.negate().direct_sum(y)?;
    let (vx, vy) = (x.complex(), y.complex());
    let (wxd, wyd) = (wx.dual().shift(s), wy.dual().shift(s));
    let into_u = |part: usize, inner: usize| -> ChainMap {
        let (w, wd, v) = if part == 0 { (wx, &wxd, vx) } else { (wy, &wyd, vy) };
        let i1 = sum_inclusion(&[w, wd], inner);
        let i2 = sum_inclusion(&[vx, vy], part);
        let _ = v;
        i2.compose(&i1).expect("composable")
    };
    let l0 = RationalComplex::direct_sum(&[wx, wy]);
    let gamma0 = map_from_sum(u.complex(), &[&into_u(0, 0), &into_u(1, 0)])?;
    let dualpart = RationalComplex::direct_sum(&[&wxd, &wyd]);
    let dual_in = map_from_sum(u.complex(), &[&into_u(0, 1), &into_u(1, 1)])?;
    let shears: Vec<ChainMap> =
        chain_map_basis(&l0, &dualpart).iter().map(|b| dual_in.compose(b).expect("composable")).collect();
    let om = u.pairing();
    let linear = |sh: &ChainMap| -> Vec<crate::rational::Q> {
        let a = sh.dual().shift(s).compose(&om).unwrap().compose(&gamma0).unwrap();
        let b = gamma0.dual().shift(s).compose(&om).unwrap().compose(sh).unwrap();
        let t = a.add(&b).unwrap();
        let mut out = Vec::new();
        for &n in l0.dims().keys() {
            out.extend(t.component(n).to_dense().into_iter().flatten());
        }
        out
    };
    let sols = solution_space(shears.len(), |i| linear(&shears[i]));
    let mut gamma = gamma0.clone();
    for sol in &sols {
        let c = q(rng.gen_range(-1..=1));
        if c == q(0) {
            continue;
        }
        for (coef, sh) in sol.iter().zip(&shears) {
            if *coef != q(0) {
                gamma = gamma.add(&sh.scale(&(coef * &c)))?;
            }
        }
    }
    // acyclic summand mapped by zero, then a homotopy perturbation
    let a = random_complex(rng, &ComplexShape::small(2).with(Homology::Acyclic));
    let l = RationalComplex::direct_sum(&[&l0, &a]);
    let gamma_l = map_from_sum(u.complex(), &[&gamma, &ChainMap::zero(&a, u.complex())])?;
    let k: Homotopy = l
        .dims()
        .keys()
        .filter_map(|&n| {
            let r = u.complex().dim(n - 1);
            if r == 0 {
                return None;
            }
            let c = l.dim(n);
            let t: Vec<(usize, usize, crate::rational::Q)> = (0..r)
                .flat_map(|i| (0..c).map(move |j| (i, j)))
                .filter_map(|(i, j)| {
                    let v: i64 = rng.gen_range(-3..=3);
                    (v.abs() == 1).then(|| (i, j, q(v)))
                })
                .collect();
            Some((n, Matrix::from_triplets(r, c, t)))
        })
        .collect();
    let bump = homotopy_boundary(&l, u.complex(), &k);
    let perturbed = gamma_l.add(&ChainMap::new(l.clone(), u.complex().clone(), bump)?)?;
    let h = quadratic_homotopy(&om, &perturbed, &gamma_l, &k, s);
    let alpha = sum_projection(&[vx, vy], 0).compose(&perturbed)?;
    let beta = sum_projection(&[vx, vy], 1).compose(&perturbed)?;
    Correspondence::new(x.clone(), y.clone(), alpha, beta, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lag::symplectic::random_symplectic;
    use crate::random::{scramble_with_iso, seeded};

    #[test]
    fn identity_is_lagrangian() {
        for x in [SymplecticComplex::standard(), SymplecticComplex::hyperbolic(0, 1).unwrap(), SymplecticComplex::zero(2)] {
            assert!(Correspondence::identity(&x).is_lagrangian().unwrap());
        }
    }

    #[test]
    fn graph_of_a_symplectomorphism() {
        let mut rng = seeded(2);
        let x = random_symplectic(&mut rng, 0, 6);
        let (_, to, from) = scramble_with_iso(&mut rng, x.complex());
        let y = x.transport(&from).unwrap();
        let g = Correspondence::graph(&x, &y, &to).unwrap();
        assert!(g.is_lagrangian().unwrap());
    }

    #[test]
    fn zero_leg_is_not_lagrangian() {
        let x = SymplecticComplex::standard();
        let id = ChainMap::identity(x.complex());
        let zero = ChainMap::zero(x.complex(), x.complex());
        // L = V_left, β = 0: isotropic needs Q(id) = 0, so use the isotropic line instead
        let line = RationalComplex::concentrated(0, 1);
        let incl = ChainMap::new(line.clone(), x.complex().clone(), [(0, Matrix::from_i64(2, 1, &[&[1], &[0]]))].into()).unwrap();
        let c = Correspondence::new(x.clone(), x.clone(), incl.clone(), ChainMap::zero(&line, x.complex()), Homotopy::new()).unwrap();
        assert!(!c.is_lagrangian().unwrap());
        assert!(Correspondence::new(x.clone(), x.clone(), id, zero, Homotopy::new()).is_err());
    }

    #[test]
    fn random_lagrangians_compose() {
        let mut rng = seeded(21);
        for s in -1..=2 {
            for _ in 0..5 {
                let (wx, x) = random_object(&mut rng, s, 2);
                let (wy, y) = random_object(&mut rng, s, 2);
                let (wz, z) = random_object(&mut rng, s, 2);
                let c1 = random_lagrangian(&mut rng, (&wx, &x), (&wy, &y)).unwrap();
                let c2 = random_lagrangian(&mut rng, (&wy, &y), (&wz, &z)).unwrap();
                assert!(c1.is_lagrangian().unwrap());
                assert!(c2.is_lagrangian().unwrap());
                let c = compose(&c1, &c2).unwrap();
                assert!(c.is_lagrangian().unwrap(), "s={s}");
                let unit = compose(&Correspondence::identity(&x), &c1).unwrap();
                let phi = unit_comparison(&c1, &unit).unwrap();
                assert!(c1.is_equivalent_via(&unit, &phi).unwrap());
            }
        }
    }

    #[test]
    fn deloop_hyperbolic_and_zero() {
        for s in -1..=2 {
            let x = SymplecticComplex::hyperbolic(3, s - 1).unwrap();
            let v = deloop(x.complex(), s, &x.pairing()).unwrap();
            assert!(v.lagrangian && v.symplectic);
            let zero = ChainMap::zero(x.complex(), &x.complex().dual().shift(s - 1));
            let v = deloop(x.complex(), s, &zero).unwrap();
            assert!(!v.lagrangian && !v.symplectic);
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = seeded(5);
        let (wx, x) = random_object(&mut rng, 1, 2);
        let (wy, y) = random_object(&mut rng, 1, 2);
        let c = random_lagrangian(&mut rng, (&wx, &x), (&wy, &y)).unwrap();
        assert_eq!(Correspondence::from_json(&c.to_json()).unwrap(), c);
    }
}
