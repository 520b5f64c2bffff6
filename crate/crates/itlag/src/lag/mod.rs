//! Linear model of shifted symplectic complexes, Lagrangian correspondences,
//! delooping and the AKSZ transgression.
//!
//! A pairing of shift `s` on `V` is stored as its adjoint `ω̃: V → V^∨[s]`
//! (see [`BilinearForm`]); graded antisymmetry means
//! `ω(x, y) = -(-1)^{|x||y|} ω(y, x)`. Degree `-1` families `h` have component
//! `n` mapping `S^n → T^{n-1}`.

pub mod aksz;
pub mod correspondence;
pub mod symplectic;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::ops::{hpb, map_from_sum, map_into_sum};
use crate::homlin::map::{homotopy_boundary, ChainMap};
use crate::linalg::Matrix;
use crate::rational::{sign, Q};

pub use aksz::{
    aksz_on_cospan, aksz_transgress, CochainAlgebra, CospanOfAlgebras, OrientationCheck, OrientedCochainAlgebra, Transgression,
};
pub use correspondence::{compose, deloop, Correspondence, DeloopVerdict};
pub use symplectic::{check_symplectic, SymplecticCheck, SymplecticComplex};

/// A degree `-1` family of matrices, component `n: S^n → T^{n-1}`.
pub type Homotopy = BTreeMap<i32, Matrix>;

fn component(k: &Homotopy, n: i32, source: &RationalComplex, target: &RationalComplex) -> Matrix {
    k.get(&n).cloned().unwrap_or_else(|| Matrix::zeros(target.dim(n - 1), source.dim(n)))
}

/// `φ ∘ k` for a chain map `φ: T → U`.
pub(crate) fn after(phi: &ChainMap, k: &Homotopy, source: &RationalComplex) -> Homotopy {
    source
        .dims()
        .keys()
        .map(|&n| (n, phi.component(n - 1).mul(&component(k, n, source, phi.source()))))
        .filter(|(_, m)| !m.is_zero())
        .collect()
}

/// `k ∘ ψ` for a chain map `ψ: R → S`.
pub(crate) fn before(k: &Homotopy, psi: &ChainMap, target: &RationalComplex) -> Homotopy {
    psi.source()
        .dims()
        .keys()
        .map(|&n| (n, component(k, n, psi.target(), target).mul(&psi.component(n))))
        .filter(|(_, m)| !m.is_zero())
        .collect()
}

/// `k^∨[s]: T^∨[s] → S^∨[s]`, with `(k^∨)^m = (-1)^m (k^{1-m})^T`.
pub(crate) fn dual_shifted(k: &Homotopy, source: &RationalComplex, target: &RationalComplex, s: i32) -> Homotopy {
    let dual_source = target.dual().shift(s);
    dual_source
        .dims()
        .keys()
        .map(|&n| {
            let m = n + s;
            (n, component(k, 1 - m, source, target).transpose().scale(&sign(m as i64)))
        })
        .filter(|(_, m)| !m.is_zero())
        .collect()
}

pub(crate) fn add(a: &Homotopy, b: &Homotopy) -> Homotopy {
    let mut out = a.clone();
    for (n, m) in b {
        let e = out.entry(*n).or_insert_with(|| Matrix::zeros(m.nrows(), m.ncols()));
        *e = e.add(m);
    }
    out.retain(|_, m| !m.is_zero());
    out
}

pub(crate) fn scale(a: &Homotopy, c: &Q) -> Homotopy {
    a.iter().map(|(&n, m)| (n, m.scale(c))).filter(|(_, m)| !m.is_zero()).collect()
}

/// `Q_ω(u) = u^∨[s] ∘ ω̃ ∘ u`.
pub(crate) fn quadratic(omega: &ChainMap, u: &ChainMap, s: i32) -> ChainMap {
    let back = u.dual().shift(s);
    back.compose(&omega.compose(u).expect("u lands in the paired complex"))
        .expect("dual of u starts at the pairing target")
}

/// For `u - v = dk + kd`: the family `H` with `dH + Hd = Q(u) - Q(v)`,
/// `H = u^∨[s] ω̃ k + (-1)^s k^∨[s] ω̃ v`.
pub(crate) fn quadratic_homotopy(omega: &ChainMap, u: &ChainMap, v: &ChainMap, k: &Homotopy, s: i32) -> Homotopy {
    let l = u.source();
    let vv = u.target();
    let back = u.dual().shift(s);
    let first = after(&back.compose(omega).expect("composable"), k, l);
    let kd = dual_shifted(k, l, vv, s);
    let wv = omega.compose(v).expect("composable");
    let second = before(&kd, &wv, &l.dual().shift(s));
    add(&first, &scale(&second, &sign(s as i64)))
}

/// `L → hpb(f: V_l ⊕ V_r → L^∨[s] ← 0)`, `x ↦ (αx, βx, -hx)`, where
/// `f(v, w) = α^∨ω̃_l v - β^∨ω̃_r w` and `dh + hd = Q_r(β) - Q_l(α)`.
pub(crate) fn cartesian_comparison(
    omega_l: &ChainMap,
    omega_r: &ChainMap,
    alpha: &ChainMap,
    beta: &ChainMap,
    h: &Homotopy,
    s: i32,
) -> Result<ChainMap> {
    cartesian_comparison_legs(omega_l, omega_r, (alpha, beta), (alpha, beta), h, s)
}

/// As [`cartesian_comparison`] for a pairing between two different complexes: `legs` map the
/// source `L` to the left slots of the feet pairings, `paired` map `L'` to the right slots, and
/// the target is `hpb(V_l ⊕ V_r → L'^∨[s] ← 0)`.
pub fn cartesian_comparison_legs(
    omega_l: &ChainMap,
    omega_r: &ChainMap,
    legs: (&ChainMap, &ChainMap),
    paired: (&ChainMap, &ChainMap),
    h: &Homotopy,
    s: i32,
) -> Result<ChainMap> {
    let apex = legs.0.source();
    let ld = paired.0.source().dual().shift(s);
    let fl = paired.0.dual().shift(s).compose(omega_l)?;
    let fr = paired.1.dual().shift(s).compose(omega_r)?.neg();
    let f = map_from_sum(&ld, &[&fl, &fr])?;
    let zero = RationalComplex::zero();
    let square = hpb(&f, &ChainMap::zero(&zero, &ld))?;
    let into_feet = map_into_sum(apex, &[legs.0, legs.1])?;
    square.compare(&into_feet, &ChainMap::zero(apex, &zero), &scale(h, &Q::from_integer((-1).into())))
}

/// `±h`, whichever satisfies `dh + hd = Q_r - Q_l`.
pub fn oriented_homotopy(h: &Homotopy, ql: &ChainMap, qr: &ChainMap) -> Result<Homotopy> {
    let want = qr.sub(ql)?;
    let bd = homotopy_boundary(ql.source(), ql.target(), h);
    let matches = |c: &Q| {
        bd.iter().all(|(&n, m)| m.scale(c) == want.component(n))
            && want.components().iter().all(|(n, m)| bd.get(n).map_or(m.is_zero(), |b| &b.scale(c) == m))
    };
    for c in [Q::from_integer(1.into()), Q::from_integer((-1).into())] {
        if matches(&c) {
            return Ok(scale(h, &c));
        }
    }
    Err(Error::Consistency("relative pairing does not bound the difference of the feet pairings".into()))
}

/// Kernel of the linear map whose value on the `i`-th unit vector is `eval(i)`.
pub(crate) fn solution_space(nvars: usize, eval: impl Fn(usize) -> Vec<Q>) -> Vec<Vec<Q>> {
    if nvars == 0 {
        return Vec::new();
    }
    let cols: Vec<Vec<Q>> = (0..nvars).map(eval).collect();
    let rows = cols.first().map_or(0, Vec::len);
    let m = Matrix::from_columns(rows, &cols);
    let ker = m.kernel();
    (0..ker.ncols()).map(|j| ker.column(j)).collect()
}
