//! Stokes and additivity, the integration map `ι`, Poincaré–Lefschetz duality and `orcut`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{dim_err, invariant, Error, Result};
use crate::homlin::complex::RationalComplex;
use crate::homlin::map::ChainMap;
use crate::homlin::ops::{cone, fiber, map_into_sum, tensor, TensorLayout};
use crate::lag::{cartesian_comparison_legs, oriented_homotopy, CospanOfAlgebras, Homotopy, OrientedCochainAlgebra};
use crate::linalg::Matrix;
use crate::rational::{q, sign, Q};
use crate::spine::{regrade, CheckTally, PFamily, PGenerator, PObject};

use super::presentation::{index_label, CobordismPresentation, Index};
use super::simplicial::{
    cochain_algebra, cochains, cup_pairing, fundamental_functional, restriction, trivial_cochains, FlatLocalSystem,
    OrientedSimplicialComplex,
};

/// `∂M_ξ = Σ_i (-1)^{c_1+…+c_{i-1}} (M_{ξ, b_i} - M_{ξ, a_i})` over directions with `a_i < b_i`,
/// where `c_k = 1` if direction `k` is non-degenerate and `M_{ξ, b_i}` replaces `(a_i, b_i)` by
/// `(b_i, b_i)`.
pub fn expected_boundary(p: &CobordismPresentation, xi: &[(usize, usize)]) -> Result<Vec<(i64, Index)>> {
    let mut out = Vec::new();
    let mut before = 0i64;
    for (i, &(a, b)) in xi.iter().enumerate() {
        if a == b {
            continue;
        }
        let e = if before % 2 == 0 { 1 } else { -1 };
        for (end, s) in [(b, e), (a, -e)] {
            let mut face = xi.to_vec();
            face[i] = (end, end);
            p.piece(&face)?;
            out.push((s, face));
        }
        before += 1;
    }
    Ok(out)
}

/// Which Stokes and gluing identities were tested and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StokesReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl StokesReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every piece and every basis cochain `e_τ` one degree below the top:
/// `[M_ξ](δe_τ) = Σ ±[face](e_τ|)`; and for every piece and split point, additivity
/// `[M_ξ] = [M_{ξ'}] + [M_{ξ''}]` on the top cochains.
pub fn stokes_check(p: &CobordismPresentation) -> Result<StokesReport> {
    let mut report = StokesReport::default();
    for (xi, m) in p.pieces() {
        let faces = expected_boundary(p, xi)?;
        let top = m.dim();
        if top == 0 {
            continue;
        }
        let c = trivial_cochains(m);
        let d = c.diff(top as i32 - 1);
        let t = fundamental_functional(m);
        for (j, tau) in m.simplices(top - 1).iter().enumerate() {
            let lhs: Q = d.column(j).iter().zip(&t).map(|(a, b)| a * b).sum();
            let mut rhs = 0i64;
            for (s, face) in &faces {
                rhs += s * p.piece(face)?.top_sign(tau);
            }
            report.checked += 1;
            if lhs != q(rhs) {
                report.failures.push(format!("Stokes fails on {} at {tau:?}: {lhs} vs {rhs}", index_label(xi)));
            }
        }
        for (i, &(a, b)) in xi.iter().enumerate() {
            for mid in a + 1..b {
                let (mut left, mut right) = (xi.clone(), xi.clone());
                left[i] = (a, mid);
                right[i] = (mid, b);
                let (l, r) = (p.piece(&left)?, p.piece(&right)?);
                for s in m.simplices(top) {
                    report.checked += 1;
                    if m.top_sign(s) != l.top_sign(s) + r.top_sign(s) {
                        report.failures.push(format!(
                            "additivity fails on {} = {} ∪ {} at {s:?}",
                            index_label(xi),
                            index_label(&left),
                            index_label(&right)
                        ));
                    }
                }
            }
        }
    }
    if p.j().is_empty() && !p.total().is_closed() {
        report.failures.push("closed presentation has a boundary".into());
    }
    Ok(report)
}

/// `ε(t)`: `0` for `t ≡ 0, 1` and `1` for `t ≡ 2, 3 (mod 4)`.
pub fn epsilon(t: usize) -> i64 {
    ((t % 4) / 2) as i64
}

fn object(xi: &[(usize, usize)]) -> PObject {
    PObject { intervals: xi.to_vec(), face: vec![0] }
}

fn family(p: &CobordismPresentation) -> PFamily {
    PFamily::new(p.j().to_vec(), 0)
}

/// `ι(Γ ⊗ e_σ) = (-1)^{ε(t)} [M_{ξΓ}](e_σ|)` for `Γ` of codegree `t` and `σ` a simplex of `M_ξ`.
pub fn iota_value(p: &CobordismPresentation, xi: &[(usize, usize)], g: &PGenerator, sigma: &[usize]) -> Result<i64> {
    let t = g.codegree();
    let piece = p.piece(&g.restrict(&object(xi)).intervals)?;
    if sigma.len() != p.dim() + t + 1 {
        return Ok(0);
    }
    Ok(sign_i64(epsilon(t)) * piece.top_sign(sigma))
}

fn sign_i64(k: i64) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `ι` as a row vector on `(P(ξ)^∨ ⊗ C(M_ξ))^d`, with the Koszul tensor layout.
pub fn iota_row(p: &CobordismPresentation, xi: &[(usize, usize)]) -> Result<(RationalComplex, Matrix)> {
    let fam = family(p);
    let ob = object(xi);
    let pd = fam.dual_value(&ob)?;
    let m = p.piece(xi)?;
    let c = trivial_cochains(m);
    let lay = TensorLayout::new(&pd, &c);
    let total = tensor(&pd, &c);
    let d = p.dim() as i32;
    let table = fam.generators(&ob);
    let mut trip = Vec::new();
    for (deg, off) in lay.blocks(d) {
        let t = (-deg) as usize;
        let k = (d - deg) as usize;
        let gens = table.by_codegree.get(&t).map_or(&[][..], Vec::as_slice);
        for (gi, g) in gens.iter().enumerate() {
            for (si, s) in m.simplices(k).iter().enumerate() {
                let v = iota_value(p, xi, g, s)?;
                if v != 0 {
                    trip.push((0, off + gi * c.dim(k as i32) + si, q(v)));
                }
            }
        }
    }
    let row = Matrix::from_triplets(1, total.dim(d), trip);
    Ok((total, row))
}

/// `ι ∘ d = 0` on every basis element of `(P(ξ)^∨ ⊗ C(M_ξ))^{d-1}`; the witness names the
/// first basis element where it fails.
pub fn check_iota(p: &CobordismPresentation, xi: &[(usize, usize)]) -> Result<CheckTally> {
    let (total, row) = iota_row(p, xi)?;
    let d = p.dim() as i32;
    let composite = row.mul(&total.diff(d - 1));
    let mut tally = CheckTally::default();
    for j in 0..total.dim(d - 1) {
        let v = composite.get(0, j);
        tally.record(v == q(0), || format!("ι(dζ) = {v} for basis element {j} at {}", index_label(xi)));
    }
    Ok(tally)
}

/// The unsigned adjoint `ω ↦ Σ_Γ [M_{ξΓ}](ω|) Γ^*`, a chain map `C(M_ξ) → P(ξ)` regraded by `-d`.
pub fn iota_adjoint(p: &CobordismPresentation, xi: &[(usize, usize)]) -> Result<ChainMap> {
    let fam = family(p);
    let ob = object(xi);
    let target = regrade(&fam.value(&ob)?, -(p.dim() as i32));
    let m = p.piece(xi)?;
    let table = fam.generators(&ob);
    let mut maps = BTreeMap::new();
    for k in 0..=m.dim() {
        let Some(t) = k.checked_sub(p.dim()) else { continue };
        let Some(gens) = table.by_codegree.get(&t) else { continue };
        let mut trip = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            let piece = p.piece(&g.restrict(&ob).intervals)?;
            for (si, s) in m.simplices(k).iter().enumerate() {
                let e = piece.top_sign(s);
                if e != 0 {
                    trip.push((gi, si, q(e)));
                }
            }
        }
        maps.insert(k as i32, Matrix::from_triplets(gens.len(), m.count(k), trip));
    }
    ChainMap::new(trivial_cochains(m), target, maps)
}

/// Every `ξ` of the presentation.
pub fn check_iota_all(p: &CobordismPresentation) -> Result<CheckTally> {
    let mut tally = CheckTally::default();
    for xi in p.pieces().keys() {
        tally.absorb(check_iota(p, xi)?);
        let adj = iota_adjoint(p, xi);
        tally.record(adj.is_ok(), || format!("adjoint of ι is not a chain map at {}", index_label(xi)));
    }
    Ok(tally)
}

/// The two feet and the total of a presentation cut in at most one direction: `∅ → M ← ∅` for
/// closed presentations and `M_{(a,a)} → M_{(a,b)} ← M_{(b,b)}` otherwise.
fn cospan_parts(
    p: &CobordismPresentation,
    span: Option<(usize, usize)>,
) -> Result<(OrientedSimplicialComplex, OrientedSimplicialComplex, OrientedSimplicialComplex)> {
    match (p.j().len(), span) {
        (0, _) => {
            let n = p.total().dim();
            let foot = OrientedSimplicialComplex::empty(n.saturating_sub(1));
            Ok((foot.clone(), p.total().clone(), foot))
        }
        (1, Some((a, b))) if a <= b && b <= p.j()[0] => {
            Ok((p.piece(&[(a, a)])?.clone(), p.piece(&[(a, b)])?.clone(), p.piece(&[(b, b)])?.clone()))
        }
        (1, None) => cospan_parts(p, Some((0, p.j()[0]))),
        _ => dim_err("cospans need at most one cut direction and a valid sub-interval"),
    }
}

fn oriented_algebra(m: &OrientedSimplicialComplex, dim: usize) -> Result<OrientedCochainAlgebra> {
    if m.is_empty() {
        return Ok(OrientedCochainAlgebra::empty(dim as i32));
    }
    OrientedCochainAlgebra::new(cochain_algebra(m)?, dim as i32, fundamental_functional(m))
}

/// The cospan of cochain algebras of `M_{(a,a)} → M_{(a,b)} ← M_{(b,b)}`, with fundamental
/// functionals on the feet and the relative functional on the total.
pub fn orcut_between(p: &CobordismPresentation, a: usize, b: usize) -> Result<CospanOfAlgebras> {
    orcut_span(p, Some((a, b)))
}

/// [`orcut_between`] over the whole presentation.
pub fn orcut(p: &CobordismPresentation) -> Result<CospanOfAlgebras> {
    orcut_span(p, None)
}

fn orcut_span(p: &CobordismPresentation, span: Option<(usize, usize)>) -> Result<CospanOfAlgebras> {
    let (l, m, r) = cospan_parts(p, span)?;
    let n = m.dim();
    if m.is_empty() {
        return Ok(CospanOfAlgebras::empty(n as i32));
    }
    let foot_dim = n.checked_sub(1).ok_or_else(|| Error::Dimension("a cospan needs a total of positive dimension".into()))?;
    let e = FlatLocalSystem::trivial(1);
    let total = cochain_algebra(&m)?;
    let to_left = restriction(&m, &l, &e)?;
    let to_right = restriction(&m, &r, &e)?;
    CospanOfAlgebras::new(
        oriented_algebra(&l, foot_dim)?,
        oriented_algebra(&r, foot_dim)?,
        total,
        to_left,
        to_right,
        fundamental_functional(&m),
    )
}

/// Outcome of the Poincaré–Lefschetz test. `witness` is the highest degree where the
/// comparison fails to be an isomorphism on cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzVerdict {
    pub stokes: bool,
    pub cartesian: bool,
    pub witness: Option<i32>,
}

impl LefschetzVerdict {
    pub fn ok(&self) -> bool {
        self.stokes && self.cartesian
    }
}

fn highest_mismatch(a: &BTreeMap<i32, usize>, b: &BTreeMap<i32, usize>) -> Option<i32> {
    a.keys().chain(b.keys()).copied().filter(|k| a.get(k) != b.get(k)).max()
}

/// The square `C(M; E^∨) → C(M_0; E^∨) ⊕ C(M_1; E^∨) → C(M; E)^∨[1-n] ← 0`, with feet maps from
/// the cup pairings with `[M_i]` and homotopy from `[M]`; passes iff it is cartesian.
pub fn orientation_check(p: &CobordismPresentation, e: &FlatLocalSystem) -> Result<LefschetzVerdict> {
    orientation_check_span(p, None, e)
}

pub fn orientation_check_span(
    p: &CobordismPresentation,
    span: Option<(usize, usize)>,
    e: &FlatLocalSystem,
) -> Result<LefschetzVerdict> {
    let (l, m, r) = cospan_parts(p, span)?;
    let n = m.dim();
    let ev = e.dual();
    let c_ev = cochains(&m, &ev)?;
    let c_e = cochains(&m, e)?;
    let legs = (restriction(&m, &l, &ev)?, restriction(&m, &r, &ev)?);
    let paired = (restriction(&m, &l, e)?, restriction(&m, &r, e)?);
    let expected = c_e.dual().shift(-(n as i32));
    let fallback = || -> Result<Option<i32>> {
        let fib = fiber(&map_into_sum(&c_ev, &[&legs.0, &legs.1])?);
        Ok(highest_mismatch(&fib.homology(), &expected.homology()))
    };
    if n == 0 {
        return Ok(LefschetzVerdict { stokes: true, cartesian: m.is_empty(), witness: if m.is_empty() { None } else { Some(0) } });
    }
    let s = 1 - n as i32;
    let foot = |x: &OrientedSimplicialComplex| -> Result<ChainMap> {
        Ok(cup_pairing(x, e, n - 1, &fundamental_functional(x))?.adjoint_unchecked())
    };
    let (wl, wr) = (foot(&l)?, foot(&r)?);
    let q_of = |w: &ChainMap, leg: &ChainMap, pair: &ChainMap| -> Result<ChainMap> {
        pair.dual().shift(s).compose(&w.compose(leg)?)
    };
    let ql = q_of(&wl, &legs.0, &paired.0)?;
    let qr = q_of(&wr, &legs.1, &paired.1)?;
    let h: Homotopy = cup_pairing(&m, e, n, &fundamental_functional(&m))?.blocks().clone();
    let h = match oriented_homotopy(&h, &ql, &qr) {
        Ok(h) => h,
        Err(_) => return Ok(LefschetzVerdict { stokes: false, cartesian: false, witness: fallback()? }),
    };
    let cmp = cartesian_comparison_legs(&wl, &wr, (&legs.0, &legs.1), (&paired.0, &paired.1), &h, s)?;
    if cmp.is_quasi_iso() {
        return Ok(LefschetzVerdict { stokes: true, cartesian: true, witness: None });
    }
    let witness = fallback()?.or_else(|| cone(&cmp).homology().keys().copied().max());
    Ok(LefschetzVerdict { stokes: true, cartesian: false, witness })
}

/// The presentation's restriction maps compose: `C(M) → C(M_ξ) → C(M_{ξ'})` equals the direct
/// restriction, for every morphism `ξ → ξ'`.
pub fn check_restrictions(p: &CobordismPresentation) -> Result<CheckTally> {
    let e = FlatLocalSystem::trivial(1);
    let mut tally = CheckTally::default();
    let total = p.total();
    for (xi, m) in p.pieces() {
        let first = restriction(total, m, &e)?;
        for (xi2, m2) in p.pieces() {
            let arrow = xi.iter().zip(xi2).all(|(&(a, b), &(c, d))| a <= c && d <= b);
            if !arrow {
                continue;
            }
            let direct = restriction(total, m2, &e)?;
            let via = restriction(m, m2, &e)?.compose(&first)?;
            tally.record(direct == via, || format!("restriction {} → {} does not compose", index_label(xi), index_label(xi2)));
        }
    }
    Ok(tally)
}

/// Checks that the piece sign data agrees with the fundamental classes: every piece of a
/// presentation has the orientation induced from the signs recorded on the total complex.
pub fn check_piece_orientations(p: &CobordismPresentation) -> Result<()> {
    for (xi, m) in p.pieces() {
        if m.dim() == p.total().dim() {
            for (s, e) in m.top() {
                if p.total().top_sign(&s) != e {
                    return invariant(format!("piece {} disagrees with the total orientation on {s:?}", index_label(xi)));
                }
            }
        }
    }
    Ok(())
}

/// `[M](ω)` as a plain sum, for callers holding a cochain vector of top degree.
pub fn integrate(m: &OrientedSimplicialComplex, omega: &[Q]) -> Q {
    fundamental_functional(m).iter().zip(omega).map(|(a, b)| a * b).sum()
}

/// Sign `(-1)^{ε(t)}` as a rational.
pub fn epsilon_sign(t: usize) -> Q {
    sign(epsilon(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundled(name: &str) -> CobordismPresentation {
        CobordismPresentation::bundled(name).unwrap()
    }

    #[test]
    fn epsilon_values() {
        assert_eq!((0..5).map(epsilon).collect::<Vec<_>>(), vec![0, 0, 1, 1, 0]);
    }

    #[test]
    fn stokes_on_bundled() {
        for name in ["interval", "two-interval", "square", "circle", "cylinder", "annulus-composition"] {
            let r = stokes_check(&bundled(name)).unwrap();
            assert!(r.ok(), "{name}: {:?}", r.failures);
            assert!(r.checked > 0);
        }
        assert!(!stokes_check(&bundled("moebius")).unwrap().ok());
    }

    #[test]
    fn iota_is_a_chain_map() {
        for name in ["interval", "two-interval", "square", "cylinder", "annulus-composition"] {
            let t = check_iota_all(&bundled(name)).unwrap();
            assert!(t.ok(), "{name}: {:?}", t.failures);
        }
    }

    #[test]
    fn lefschetz_verdicts() {
        let triv = FlatLocalSystem::trivial(1);
        for name in ["interval", "circle", "cylinder", "two-interval", "annulus-composition"] {
            let v = orientation_check(&bundled(name), &triv).unwrap();
            assert!(v.ok(), "{name}: {v:?}");
        }
        let twisted = FlatLocalSystem::rank_one((0, 2), q(2)).unwrap();
        assert!(orientation_check(&bundled("circle"), &twisted).unwrap().ok());
        let v = orientation_check(&bundled("moebius"), &triv).unwrap();
        assert_eq!(v, LefschetzVerdict { stokes: false, cartesian: false, witness: Some(2) });
    }

    #[test]
    fn orcut_matches_orientation_check() {
        for name in ["interval", "circle", "cylinder"] {
            let c = orcut(&bundled(name)).unwrap();
            assert!(c.is_oriented().unwrap(), "{name}");
        }
        assert!(orcut(&bundled("moebius")).is_err());
        let two = bundled("two-interval");
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            assert!(orcut_between(&two, a, b).unwrap().is_oriented().unwrap());
        }
    }

    #[test]
    fn restrictions_compose() {
        for name in ["square", "annulus-composition"] {
            assert!(check_restrictions(&bundled(name)).unwrap().ok());
            check_piece_orientations(&bundled(name)).unwrap();
        }
    }

    #[test]
    fn iota_needs_the_sign_in_codegree_two() {
        let p = bundled("square");
        let xi = vec![(0, 1), (0, 1)];
        let (total, row) = iota_row(&p, &xi).unwrap();
        assert!(row.mul(&total.diff(-1)).is_zero());
        let pd = PFamily::new(vec![1, 1], 0).dual_value(&object(&xi)).unwrap();
        let lay = TensorLayout::new(&pd, &trivial_cochains(p.piece(&xi).unwrap()));
        let off = lay.blocks(0).into_iter().find(|(deg, _)| *deg == -2).unwrap().1;
        let mut flipped = row.clone();
        for j in off..off + 2 {
            flipped.add_block(0, j, &Matrix::scalar(1, &(row.get(0, j) * q(-2))));
        }
        assert!(!flipped.mul(&total.diff(-1)).is_zero());
    }
}
