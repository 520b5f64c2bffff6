//! Monotone maps `[a] → [b]` of finite ordinals and their active–inert factorization.

use crate::error::{invariant, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaMorphism {
    target: usize,
    values: Vec<usize>,
}

impl DeltaMorphism {
    /// `values[i] = φ(i)` for `i ∈ [a]`, with `a = values.len() - 1`.
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return invariant("a map out of [a] needs a + 1 values");
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return invariant(format!("not monotone: {values:?}"));
        }
        if values.iter().any(|&v| v > target) {
            return invariant(format!("value exceeds target [{target}]: {values:?}"));
        }
        Ok(DeltaMorphism { target, values })
    }

    pub fn identity(n: usize) -> Self {
        DeltaMorphism { target: n, values: (0..=n).collect() }
    }

    /// The coface `d^i : [n-1] → [n]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        DeltaMorphism { target: n, values: (0..n).map(|k| if k < i { k } else { k + 1 }).collect() }
    }

    /// The codegeneracy `s^i : [n+1] → [n]` hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        DeltaMorphism { target: n, values: (0..=n + 1).map(|k| if k <= i { k } else { k - 1 }).collect() }
    }

    /// Inert map `[a] → [b]`, `k ↦ start + k`.
    pub fn inert(a: usize, b: usize, start: usize) -> Result<Self> {
        Self::new(b, (0..=a).map(|k| start + k).collect())
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_inert(&self) -> bool {
        self.values.iter().enumerate().all(|(i, &v)| v == self.values[0] + i)
    }

    pub fn is_active(&self) -> bool {
        self.values[0] == 0 && *self.values.last().unwrap() == self.target
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &DeltaMorphism) -> Result<DeltaMorphism> {
        if first.target != self.source() {
            return invariant("delta composition: arities do not match");
        }
        Ok(DeltaMorphism { target: self.target, values: first.values.iter().map(|&v| self.values[v]).collect() })
    }

    /// `φ = inert ∘ active`, both unique.
    pub fn factorize(&self) -> (DeltaMorphism, DeltaMorphism) {
        let lo = self.values[0];
        let hi = *self.values.last().unwrap();
        let active = DeltaMorphism { target: hi - lo, values: self.values.iter().map(|v| v - lo).collect() };
        let inert = DeltaMorphism { target: self.target, values: (lo..=hi).collect() };
        (active, inert)
    }

    /// Every monotone map `[a] → [b]`.
    pub fn all(a: usize, b: usize) -> Vec<DeltaMorphism> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(a + 1);
        fn go(a: usize, b: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<DeltaMorphism>) {
            if cur.len() == a + 1 {
                out.push(DeltaMorphism { target: b, values: cur.clone() });
                return;
            }
            for v in lo..=b {
                cur.push(v);
                go(a, b, v, cur, out);
                cur.pop();
            }
        }
        go(a, b, 0, &mut cur, &mut out);
        out
    }

    /// Every injective monotone map `[a] → [b]`.
    pub fn injections(a: usize, b: usize) -> Vec<DeltaMorphism> {
        Self::all(a, b).into_iter().filter(DeltaMorphism::is_injective).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_examples() {
        let phi = DeltaMorphism::new(2, vec![1]).unwrap();
        let (a, i) = phi.factorize();
        assert_eq!(a, DeltaMorphism::identity(0));
        assert_eq!(i, DeltaMorphism::inert(0, 2, 1).unwrap());

        let phi = DeltaMorphism::new(3, vec![1, 2]).unwrap();
        let (a, i) = phi.factorize();
        assert_eq!(a, DeltaMorphism::identity(1));
        assert!(i.is_inert());

        let phi = DeltaMorphism::new(2, vec![0, 2]).unwrap();
        let (a, i) = phi.factorize();
        assert_eq!(a, phi);
        assert_eq!(i, DeltaMorphism::identity(2));
    }

    #[test]
    fn factorization_recomposes() {
        for a in 0..=3 {
            for b in 0..=3 {
                for phi in DeltaMorphism::all(a, b) {
                    let (act, ine) = phi.factorize();
                    assert!(act.is_active() && ine.is_inert());
                    assert_eq!(ine.compose(&act).unwrap(), phi);
                }
            }
        }
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(DeltaMorphism::new(2, vec![2, 1]).is_err());
        assert!(DeltaMorphism::new(1, vec![0, 2]).is_err());
    }

    #[test]
    fn cofaces_and_codegeneracies() {
        assert_eq!(DeltaMorphism::coface(2, 1).values(), &[0, 2]);
        assert_eq!(DeltaMorphism::codegeneracy(0, 0).values(), &[0, 0]);
        assert_eq!(DeltaMorphism::all(1, 1).len(), 3);
        assert_eq!(DeltaMorphism::injections(1, 2).len(), 3);
    }
}
