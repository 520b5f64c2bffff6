//! Finite posets with the order relation stored as its transitive closure.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds from generating relations `(a, b)` meaning `a ≤ b`; closes
    /// reflexively and transitively and rejects cycles.
    pub fn new(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Invariant(format!("duplicate label {l:?}")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::Invariant(format!("relation ({a},{b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Invariant(format!(
                        "antisymmetry fails between {:?} and {:?}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(Poset { labels, index, leq })
    }

    /// Builds from a relation predicate, which must already be a partial order.
    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = labels.len();
        let mut rel = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && f(i, j) {
                    rel.push((i, j));
                }
            }
        }
        let p = Self::new(labels, &rel)?;
        for i in 0..n {
            for j in 0..n {
                if p.leq[i][j] != (i == j || f(i, j)) {
                    return Err(Error::Invariant(format!(
                        "relation is not transitive at ({:?}, {:?})",
                        p.labels[i], p.labels[j]
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn point() -> Self {
        Self::new(vec!["*".into()], &[]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn element(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::Unknown { kind: "element", name: label.to_string() })
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    /// All pairs `a ≤ b`, including identities.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).filter(move |&b| self.leq[a][b]).map(move |b| (a, b))).collect()
    }

    pub fn relation_count(&self) -> usize {
        self.leq.iter().map(|r| r.iter().filter(|&&x| x).count()).sum()
    }

    /// Covering relations `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq[a][b]).collect()
    }

    pub fn down_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq[b][a]).collect()
    }

    pub fn initial(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq[a][b]))
    }

    pub fn terminal(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq[b][a]))
    }

    /// Least upper bound of `a` and `b`, if it exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let ub: Vec<usize> = (0..self.len()).filter(|&c| self.leq[a][c] && self.leq[b][c]).collect();
        ub.iter().copied().find(|&c| ub.iter().all(|&d| self.leq[c][d]))
    }

    /// Full subposet on `elems`, in the given order.
    pub fn subposet(&self, elems: &[usize]) -> Poset {
        let labels = elems.iter().map(|&i| self.labels[i].clone()).collect();
        let leq = elems.iter().map(|&i| elems.iter().map(|&j| self.leq[i][j]).collect()).collect();
        let index = elems.iter().enumerate().map(|(k, &i)| (self.labels[i].clone(), k)).collect();
        Poset { labels, index, leq }
    }

    pub fn opposite(&self) -> Poset {
        let n = self.len();
        let leq = (0..n).map(|i| (0..n).map(|j| self.leq[j][i]).collect()).collect();
        Poset { labels: self.labels.clone(), index: self.index.clone(), leq }
    }

    /// Product order with labels `(l1,l2,…)`, elements in lexicographic order.
    pub fn product(factors: &[&Poset]) -> Poset {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for f in factors {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..f.len()).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        let labels: Vec<String> = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().zip(factors).map(|(&i, f)| f.label(i)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let n = tuples.len();
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| tuples[a].iter().zip(&tuples[b]).zip(factors).all(|((&x, &y), f)| f.leq(x, y)))
                    .collect()
            })
            .collect();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Poset { labels, index, leq }
    }

    /// Adjoins a new element below everything; it is placed first.
    pub fn cone_left(&self, label: &str) -> Result<Poset> {
        let mut labels = vec![label.to_string()];
        labels.extend(self.labels.iter().cloned());
        let n = self.len();
        let mut rel: Vec<(usize, usize)> = (1..=n).map(|b| (0, b)).collect();
        rel.extend(self.relations().into_iter().map(|(a, b)| (a + 1, b + 1)));
        Poset::new(labels, &rel)
    }

    /// Adjoins a new element above everything; it is placed last.
    pub fn cone_right(&self, label: &str) -> Result<Poset> {
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let n = self.len();
        let mut rel: Vec<(usize, usize)> = (0..n).map(|a| (a, n)).collect();
        rel.extend(self.relations());
        Poset::new(labels, &rel)
    }

    /// Relation-preserving bijection `self → other`, by backtracking.
    pub fn isomorphism_to(&self, other: &Poset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.relation_count() != other.relation_count() {
            return None;
        }
        let sig = |p: &Poset, i: usize| {
            let up = (0..p.len()).filter(|&j| p.leq[i][j]).count();
            let down = (0..p.len()).filter(|&j| p.leq[j][i]).count();
            (up, down)
        };
        let s_sig: Vec<_> = (0..n).map(|i| sig(self, i)).collect();
        let o_sig: Vec<_> = (0..n).map(|i| sig(other, i)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(s_sig[i].0 + s_sig[i].1));
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            k: usize,
            order: &[usize],
            s: &Poset,
            o: &Poset,
            s_sig: &[(usize, usize)],
            o_sig: &[(usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let a = order[k];
            for b in 0..o.len() {
                if used[b] || s_sig[a] != o_sig[b] {
                    continue;
                }
                let ok = order[..k].iter().all(|&c| {
                    let mc = map[c];
                    s.leq[a][c] == o.leq[b][mc] && s.leq[c][a] == o.leq[mc][b]
                });
                if ok {
                    map[a] = b;
                    used[b] = true;
                    if go(k + 1, order, s, o, s_sig, o_sig, map, used) {
                        return true;
                    }
                    used[b] = false;
                    map[a] = usize::MAX;
                }
            }
            false
        }
        go(0, &order, self, other, &s_sig, &o_sig, &mut map, &mut used).then_some(map)
    }

    /// Linear extension (indices sorted so that `a < b` implies `a` first).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by_key(|&i| (self.down_set(i).len(), i));
        v
    }

    pub fn to_json(&self) -> Value {
        let leq: Vec<Value> = self
            .covers()
            .into_iter()
            .map(|(a, b)| json!([self.labels[a], self.labels[b]]))
            .collect();
        json!({ "elements": self.labels, "leq": leq })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let elems = v
            .get("elements")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("poset: missing \"elements\" array".into()))?;
        let labels: Vec<String> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse(format!("poset: element {i} is not a string")))
            })
            .collect::<Result<_>>()?;
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut rel = Vec::new();
        if let Some(leq) = v.get("leq") {
            let leq = leq.as_array().ok_or_else(|| Error::Parse("poset: \"leq\" must be an array".into()))?;
            for (k, pair) in leq.iter().enumerate() {
                let pair = pair
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse(format!("poset: leq[{k}] must be a pair")))?;
                let mut ends = [0usize; 2];
                for (slot, x) in ends.iter_mut().zip(pair) {
                    let name = x.as_str().ok_or_else(|| Error::Parse(format!("poset: leq[{k}] entry not a string")))?;
                    *slot = *index
                        .get(name)
                        .ok_or_else(|| Error::Parse(format!("poset: leq[{k}] names unknown element {name:?}")))?;
                }
                rel.push((ends[0], ends[1]));
            }
        }
        Self::new(labels, &rel)
    }

    /// Hasse diagram in DOT; edges point upward in the order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", l.replace('"', "\\\""));
        }
        for (a, b) in self.covers() {
            let _ = writeln!(s, "  n{a} -> n{b};");
        }
        s.push_str("}\n");
        s
    }

    /// Minimal elements.
    pub fn minimal(&self) -> BTreeSet<usize> {
        (0..self.len()).filter(|&a| !(0..self.len()).any(|b| self.lt(b, a))).collect()
    }
}

/// A monotone map of finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    pub source: Poset,
    pub target: Poset,
    pub mapping: Vec<usize>,
}

impl PosetMap {
    pub fn new(source: Poset, target: Poset, mapping: Vec<usize>) -> Result<Self> {
        if mapping.len() != source.len() {
            return Err(Error::Dimension("poset map: mapping length differs from source size".into()));
        }
        if let Some(&bad) = mapping.iter().find(|&&m| m >= target.len()) {
            return Err(Error::Dimension(format!("poset map: image index {bad} out of range")));
        }
        for (a, b) in source.relations() {
            if !target.leq(mapping[a], mapping[b]) {
                return Err(Error::Invariant(format!(
                    "not monotone: {} ≤ {} but {} ≰ {}",
                    source.label(a),
                    source.label(b),
                    target.label(mapping[a]),
                    target.label(mapping[b])
                )));
            }
        }
        Ok(PosetMap { source, target, mapping })
    }

    /// Build by matching labels through a function on labels.
    pub fn from_labels(source: Poset, target: Poset, f: impl Fn(&str) -> String) -> Result<Self> {
        let mapping = (0..source.len())
            .map(|i| target.element(&f(source.label(i))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, mapping)
    }

    pub fn identity(p: &Poset) -> Self {
        PosetMap { source: p.clone(), target: p.clone(), mapping: (0..p.len()).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.mapping[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &m in &self.mapping {
            hit[m] = true;
        }
        hit.into_iter().all(|x| x)
    }

    pub fn compose(&self, first: &PosetMap) -> Result<PosetMap> {
        if first.target != self.source {
            return Err(Error::Dimension("poset map composition: middle posets differ".into()));
        }
        Ok(PosetMap {
            source: first.source.clone(),
            target: self.target.clone(),
            mapping: first.mapping.iter().map(|&m| self.mapping[m]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::new(labels, &rel).unwrap()
    }

    #[test]
    fn closure_and_covers() {
        let c = chain(4);
        assert!(c.leq(0, 3));
        assert_eq!(c.covers().len(), 3);
        assert_eq!(c.initial(), Some(0));
        assert_eq!(c.terminal(), Some(3));
        assert_eq!(c.relation_count(), 10);
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert!(Poset::new(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::new(vec!["a".into(), "a".into()], &[]).is_err());
    }

    #[test]
    fn product_and_iso() {
        let c = chain(2);
        let sq = Poset::product(&[&c, &c]);
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.label(1), "(0,1)");
        assert!(sq.isomorphism_to(&sq.opposite()).is_some());
        assert!(chain(3).isomorphism_to(&sq).is_none());
    }

    #[test]
    fn json_and_dot() {
        let c = chain(3);
        let back = Poset::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(c.to_dot("c").contains("n0 -> n1"));
        assert!(Poset::from_json(&json!({"elements": ["a"], "leq": [["a", "z"]]})).is_err());
    }

    #[test]
    fn monotone_maps() {
        let c = chain(2);
        assert!(PosetMap::new(c.clone(), c.clone(), vec![1, 0]).is_err());
        assert!(PosetMap::new(c.clone(), c.clone(), vec![0, 0]).is_ok());
    }
}
