//! Shifted symplectic complexes.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{dim_err, Error, Result};
use crate::homlin::complex::{matrix_from_json, matrix_to_json, RationalComplex};
use crate::homlin::forms::BilinearForm;
use crate::homlin::map::ChainMap;
use crate::linalg::Matrix;
use crate::random::{normal_form, scramble};
use crate::rational::{q, sign, Q};

use super::solution_space;

/// A complex with a pairing of shift `s`, not necessarily non-degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticComplex {
    form: BilinearForm,
}

/// Which of the three conditions hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticCheck {
    pub closed: bool,
    pub antisymmetric: bool,
    pub nondegenerate: bool,
}

impl SymplecticCheck {
    pub fn ok(&self) -> bool {
        self.closed && self.antisymmetric && self.nondegenerate
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.closed {
            out.push("pairing is not a chain map");
        }
        if !self.antisymmetric {
            out.push("pairing is not graded antisymmetric");
        }
        if !self.nondegenerate {
            out.push("pairing is not a quasi-isomorphism");
        }
        out
    }
}

/// Checks `ω̃: V → V^∨[s]`; errors only on shape mismatch.
pub fn check_symplectic(v: &RationalComplex, s: i32, omega: &ChainMap) -> Result<SymplecticCheck> {
    if omega.source() != v || omega.target() != &v.dual().shift(s) {
        return dim_err(format!("pairing must map V to V^∨[{s}]"));
    }
    let form = BilinearForm::new(v.clone(), v.clone(), s, omega.components().clone())?;
    Ok(SymplecticComplex { form }.check())
}

impl SymplecticComplex {
    pub fn new(form: BilinearForm) -> Result<Self> {
        if form.left() != form.right() {
            return dim_err("a symplectic pairing needs equal left and right complexes");
        }
        Ok(SymplecticComplex { form })
    }

    pub fn from_blocks(v: &RationalComplex, s: i32, blocks: BTreeMap<i32, Matrix>) -> Result<Self> {
        Self::new(BilinearForm::new(v.clone(), v.clone(), s, blocks)?)
    }

    pub fn zero(s: i32) -> Self {
        let z = RationalComplex::zero();
        SymplecticComplex { form: BilinearForm::zero(&z, &z, s) }
    }

    /// `ℚ²` in degree 0 with `ω(e_0, e_1) = 1`.
    pub fn standard() -> Self {
        let v = RationalComplex::concentrated(0, 2);
        let j = Matrix::from_i64(2, 2, &[&[0, -1], &[1, 0]]);
        Self::from_blocks(&v, 0, [(0, j)].into()).expect("shapes agree")
    }

    /// `ℚ` in degrees `a` and `-a-s` (distinct), paired by `ω(e_a, e_{-a-s}) = 1`.
    pub fn hyperbolic(a: i32, s: i32) -> Result<Self> {
        let b = -a - s;
        if a == b {
            return dim_err("hyperbolic pair needs two distinct degrees");
        }
        let v = RationalComplex::from_parts(&[(a, 1), (b, 1)], vec![])?;
        let back = -sign((a as i64) * (b as i64));
        Self::from_blocks(&v, s, [(a, Matrix::identity(1)), (b, Matrix::scalar(1, &back))].into())
    }

    pub fn complex(&self) -> &RationalComplex {
        self.form.left()
    }

    pub fn shift(&self) -> i32 {
        self.form.shift()
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    /// The adjoint `ω̃: V → V^∨[s]`.
    pub fn pairing(&self) -> ChainMap {
        self.form.adjoint_unchecked()
    }

    pub fn check(&self) -> SymplecticCheck {
        SymplecticCheck {
            closed: self.form.is_closed(),
            antisymmetric: self.form.is_antisymmetric(),
            nondegenerate: self.form.is_nondegenerate(),
        }
    }

    pub fn is_symplectic(&self) -> bool {
        self.check().ok()
    }

    pub fn negate(&self) -> Self {
        SymplecticComplex { form: self.form.neg() }
    }

    /// Orthogonal sum; degree `a` is `V^a ⊕ W^a`.
    pub fn direct_sum(&self, other: &SymplecticComplex) -> Result<Self> {
        if self.shift() != other.shift() {
            return dim_err("direct sum of pairings with different shifts");
        }
        let v = RationalComplex::direct_sum(&[self.complex(), other.complex()]);
        let s = self.shift();
        let blocks = v
            .dims()
            .keys()
            .map(|&a| (a, Matrix::block_diag(&[&self.form.block(a), &other.form.block(a)])))
            .collect();
        Self::from_blocks(&v, s, blocks)
    }

    /// Transport along a chain isomorphism with inverse `inv: V' → V`.
    pub fn transport(&self, inv: &ChainMap) -> Result<Self> {
        Self::new(self.form.pullback(inv, inv)?)
    }

    pub fn to_json(&self) -> Value {
        let pairing: Map<String, Value> =
            self.form.blocks().iter().map(|(a, m)| (a.to_string(), matrix_to_json(m))).collect();
        json!({ "complex": self.complex().to_json(), "shift": self.shift(), "pairing": pairing })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let c = RationalComplex::from_json(&v["complex"])?;
        let s = v["shift"].as_i64().ok_or_else(|| Error::Parse("symplectic: missing integer \"shift\"".into()))? as i32;
        let mut blocks = BTreeMap::new();
        if let Some(p) = v.get("pairing").and_then(Value::as_object) {
            for (k, m) in p {
                let a: i32 = k.parse().map_err(|_| Error::Parse(format!("symplectic: bad degree {k:?}")))?;
                blocks.insert(a, matrix_from_json(m, c.dim(-a - s), c.dim(a))?);
            }
        }
        Self::from_blocks(&c, s, blocks)
    }
}

/// Basis of the closed, graded-antisymmetric pairings of shift `s` on `v` whose
/// nonzero entries `(a, row, col)` of block `a` satisfy `allowed`.
pub fn closed_antisymmetric_forms(
    v: &RationalComplex,
    s: i32,
    allowed: &dyn Fn(i32, usize, usize) -> bool,
) -> Vec<BilinearForm> {
    let mut vars: Vec<(i32, usize, usize)> = Vec::new();
    for &a in v.dims().keys() {
        for i in 0..v.dim(-a - s) {
            for j in 0..v.dim(a) {
                if allowed(a, i, j) {
                    vars.push((a, i, j));
                }
            }
        }
    }
    let build = |coeffs: &dyn Fn(usize) -> Q| {
        let mut trip: BTreeMap<i32, Vec<(usize, usize, Q)>> = BTreeMap::new();
        for (idx, &(a, i, j)) in vars.iter().enumerate() {
            let c = coeffs(idx);
            if c != q(0) {
                trip.entry(a).or_default().push((i, j, c));
            }
        }
        let blocks = trip
            .into_iter()
            .map(|(a, t)| (a, Matrix::from_triplets(v.dim(-a - s), v.dim(a), t)))
            .collect();
        BilinearForm::new(v.clone(), v.clone(), s, blocks).expect("shapes agree")
    };
    let target = v.dual().shift(s);
    let defect = |f: &BilinearForm| -> Vec<Q> {
        let mut out = Vec::new();
        let adj = f.adjoint_unchecked();
        for &n in v.dims().keys().chain(target.dims().keys()) {
            let m = target.diff(n).mul(&adj.component(n)).sub(&adj.component(n + 1).mul(&v.diff(n)));
            out.extend(m.to_dense().into_iter().flatten());
        }
        for &a in v.dims().keys() {
            let b = -a - s;
            let sgn = -sign((a as i64) * (b as i64));
            let m = f.block(a).sub(&f.block(b).transpose().scale(&sgn));
            out.extend(m.to_dense().into_iter().flatten());
        }
        out
    };
    let sols = solution_space(vars.len(), |i| defect(&build(&|j| if i == j { q(1) } else { q(0) })));
    sols.iter().map(|c| build(&|j| c[j].clone())).collect()
}

fn random_combination(rng: &mut impl Rng, basis: &[BilinearForm]) -> Option<BilinearForm> {
    let mut acc: Option<BilinearForm> = None;
    for b in basis {
        let c = q(rng.gen_range(-2..=2));
        let t = b.scale(&c);
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t).expect("same complexes"),
        });
    }
    acc
}

/// Tries random combinations of `basis` until one is non-degenerate.
fn nondegenerate_combination(rng: &mut impl Rng, basis: &[BilinearForm], v: &RationalComplex, s: i32) -> Option<SymplecticComplex> {
    if v.is_acyclic() {
        let z = random_combination(rng, basis).unwrap_or_else(|| BilinearForm::zero(v, v, s));
        return Some(SymplecticComplex { form: z });
    }
    for _ in 0..40 {
        if let Some(f) = random_combination(rng, basis) {
            if f.is_nondegenerate() {
                return Some(SymplecticComplex { form: f });
            }
        }
    }
    None
}

/// Random symplectic complex of shift `s` with total dimension about `max_dim`.
pub fn random_symplectic(rng: &mut impl Rng, s: i32, max_dim: usize) -> SymplecticComplex {
    loop {
        let mut classes = Vec::new();
        let budget = rng.gen_range(0..=max_dim.max(2));
        while classes.len() + 1 < budget {
            let a = rng.gen_range(-2..=2);
            let b = -a - s;
            if a == b && a.rem_euclid(2) == 0 {
                classes.extend([a, a]);
            } else if a == b {
                classes.push(a);
            } else {
                classes.extend([a, b]);
            }
        }
        let pairs: Vec<i32> = (0..rng.gen_range(0..=1)).map(|_| rng.gen_range(-2..=1)).collect();
        let v = scramble(rng, &normal_form(&classes, &pairs));
        let basis = closed_antisymmetric_forms(&v, s, &|_, _, _| true);
        if let Some(x) = nondegenerate_combination(rng, &basis, &v, s) {
            return x;
        }
    }
}

/// A non-degenerate pairing on `W ⊕ W^∨[s]` for which both summands are isotropic.
pub fn random_hyperbolic(rng: &mut impl Rng, w: &RationalComplex, s: i32) -> SymplecticComplex {
    let wd = w.dual().shift(s);
    let v = RationalComplex::direct_sum(&[w, &wd]);
    let allowed = |a: i32, i: usize, j: usize| (j < w.dim(a)) != (i < w.dim(-a - s));
    let basis = closed_antisymmetric_forms(&v, s, &allowed);
    nondegenerate_combination(rng, &basis, &v, s).expect("the canonical pairing lies in the solution space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_complex, seeded, ComplexShape};

    #[test]
    fn unit_pairing_in_degrees_zero_and_minus_one() {
        let x = SymplecticComplex::hyperbolic(0, 1).unwrap();
        assert!(x.is_symplectic(), "{:?}", x.check());
        let c = check_symplectic(x.complex(), 1, &x.pairing()).unwrap();
        assert!(c.ok());
    }

    #[test]
    fn zero_and_degenerate_cases() {
        assert!(SymplecticComplex::zero(3).is_symplectic());
        let v = RationalComplex::concentrated(0, 2);
        let zero = ChainMap::zero(&v, &v.dual());
        let c = check_symplectic(&v, 0, &zero).unwrap();
        assert!(!c.ok());
        assert_eq!(c.failures(), vec!["pairing is not a quasi-isomorphism"]);
        assert!(SymplecticComplex::standard().is_symplectic());
    }

    #[test]
    fn negate_is_an_involution() {
        let mut rng = seeded(4);
        for s in -1..=2 {
            let x = random_symplectic(&mut rng, s, 6);
            assert!(x.is_symplectic(), "s={s} {:?}", x.check());
            assert!(x.negate().is_symplectic());
            assert_eq!(x.negate().negate(), x);
        }
        assert_eq!(SymplecticComplex::zero(0).negate(), SymplecticComplex::zero(0));
    }

    #[test]
    fn hyperbolic_forms_are_symplectic() {
        let mut rng = seeded(8);
        for s in -1..=2 {
            let w = random_complex(&mut rng, &ComplexShape::small(3));
            let x = random_hyperbolic(&mut rng, &w, s);
            assert!(x.is_symplectic());
        }
    }

    #[test]
    fn json_round_trip() {
        let x = SymplecticComplex::hyperbolic(1, 0).unwrap();
        assert_eq!(SymplecticComplex::from_json(&x.to_json()).unwrap(), x);
    }
}
