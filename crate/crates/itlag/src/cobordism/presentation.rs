//! Cobordisms cut into pieces indexed by `Σ^{j_1} × … × Σ^{j_n}`, and the bundled examples.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{invariant, Error, Result};
use crate::grid::sigma_objects;

use super::simplicial::OrientedSimplicialComplex;

/// One `(a, b)` per cut direction.
pub type Index = Vec<(usize, usize)>;

const BUNDLED: [(&str, &str); 7] = [
    ("interval", include_str!("../../data/interval.json")),
    ("two-interval", include_str!("../../data/two-interval.json")),
    ("square", include_str!("../../data/square.json")),
    ("circle", include_str!("../../data/circle.json")),
    ("cylinder", include_str!("../../data/cylinder.json")),
    ("moebius", include_str!("../../data/moebius.json")),
    ("annulus-composition", include_str!("../../data/annulus-composition.json")),
];

/// A complex `M` of dimension `d + n` with a piece `M_ξ` of dimension `d + #{i : a_i < b_i}`
/// for every `ξ`. The piece at the initial object is `M` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismPresentation {
    name: String,
    dim: usize,
    j: Vec<usize>,
    total: OrientedSimplicialComplex,
    pieces: BTreeMap<Index, OrientedSimplicialComplex>,
}

pub fn index_label(xi: &[(usize, usize)]) -> String {
    xi.iter().map(|(a, b)| format!("({a},{b})")).collect()
}

pub fn parse_index(s: &str) -> Result<Index> {
    let bad = || Error::Parse(format!("piece key {s:?} is not of the form (a,b)(c,d)…"));
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = inner.find(')').ok_or_else(bad)?;
        let (a, b) = inner[..close].split_once(',').ok_or_else(bad)?;
        out.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
        rest = inner[close + 1..].trim_start();
    }
    Ok(out)
}

impl CobordismPresentation {
    /// Validates that every piece is present with the right dimension, lies in `M`, and that
    /// pieces shrink along morphisms.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        j: Vec<usize>,
        total: OrientedSimplicialComplex,
        mut pieces: BTreeMap<Index, OrientedSimplicialComplex>,
    ) -> Result<Self> {
        if total.dim() != dim + j.len() {
            return invariant(format!("total complex has dimension {}, expected {}", total.dim(), dim + j.len()));
        }
        let initial: Index = j.iter().map(|&n| (0, n)).collect();
        if let Some(p) = pieces.get(&initial) {
            if p != &total {
                return invariant("the piece at the initial object must be the whole complex");
            }
        }
        pieces.insert(initial, total.clone());
        let objects = sigma_objects(&j);
        for xi in pieces.keys() {
            if !objects.contains(xi) {
                return invariant(format!("piece {} is not indexed by an object", index_label(xi)));
            }
        }
        for xi in &objects {
            let p = pieces.get(xi).ok_or_else(|| Error::Invariant(format!("missing piece {}", index_label(xi))))?;
            let want = dim + xi.iter().filter(|(a, b)| a < b).count();
            if p.dim() != want {
                return invariant(format!("piece {} has dimension {}, expected {want}", index_label(xi), p.dim()));
            }
            if !p.is_subcomplex_of(&total) {
                return invariant(format!("piece {} is not a subcomplex", index_label(xi)));
            }
        }
        for xi in &objects {
            for xi2 in &objects {
                let arrow = xi.iter().zip(xi2).all(|(&(a, b), &(c, d))| a <= c && d <= b);
                if arrow && !pieces[xi2].is_subcomplex_of(&pieces[xi]) {
                    return invariant(format!("piece {} is not inside {}", index_label(xi2), index_label(xi)));
                }
            }
        }
        Ok(CobordismPresentation { name: name.into(), dim, j, total, pieces })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `d`, the dimension of the feet.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn total(&self) -> &OrientedSimplicialComplex {
        &self.total
    }

    pub fn piece(&self, xi: &[(usize, usize)]) -> Result<&OrientedSimplicialComplex> {
        self.pieces.get(xi).ok_or_else(|| Error::Unknown { kind: "piece", name: index_label(xi) })
    }

    pub fn pieces(&self) -> &BTreeMap<Index, OrientedSimplicialComplex> {
        &self.pieces
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("presentation: missing \"{k}\"")));
        let name = field("name")?.as_str().unwrap_or_default().to_string();
        let dim = field("dim")?.as_u64().ok_or_else(|| Error::Parse("\"dim\" must be a non-negative integer".into()))? as usize;
        let j: Vec<usize> = serde_json::from_value(field("j")?.clone()).map_err(|e| Error::Parse(format!("\"j\": {e}")))?;
        let total = OrientedSimplicialComplex::from_json(dim + j.len(), field("top")?)
            .map_err(|e| Error::Parse(format!("\"top\": {e}")))?;
        let mut pieces = BTreeMap::new();
        if let Some(obj) = v.get("pieces").and_then(Value::as_object) {
            for (k, cells) in obj {
                let xi = parse_index(k)?;
                let d = dim + xi.iter().filter(|(a, b)| a < b).count();
                let p = OrientedSimplicialComplex::from_json(d, cells).map_err(|e| Error::Parse(format!("piece {k}: {e}")))?;
                pieces.insert(xi, p);
            }
        }
        Self::new(name, dim, j, total, pieces)
    }

    pub fn to_json(&self) -> Value {
        let pieces: Map<String, Value> = self.pieces.iter().map(|(xi, p)| (index_label(xi), p.to_json())).collect();
        json!({
            "name": self.name,
            "dim": self.dim,
            "j": self.j,
            "vertices": self.total.vertices(),
            "top": self.total.to_json(),
            "pieces": pieces,
        })
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let text = BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Unknown { kind: "bundled presentation", name: name.into() })?;
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
        Self::from_json(&v)
    }

    pub fn bundled_names() -> Vec<&'static str> {
        BUNDLED.iter().map(|(n, _)| *n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_presentations_load() {
        for name in CobordismPresentation::bundled_names() {
            let p = CobordismPresentation::bundled(name).unwrap();
            let back = CobordismPresentation::from_json(&p.to_json()).unwrap();
            assert_eq!(back, p, "{name}");
        }
    }

    #[test]
    fn keys() {
        assert_eq!(parse_index("(0,1)(1,1)").unwrap(), vec![(0, 1), (1, 1)]);
        assert_eq!(parse_index("").unwrap(), vec![]);
        assert!(parse_index("(0;1)").is_err());
        assert_eq!(index_label(&[(0, 2)]), "(0,2)");
    }

    #[test]
    fn shapes() {
        let c = CobordismPresentation::bundled("cylinder").unwrap();
        assert_eq!(c.total().count(2), 18);
        assert_eq!(c.piece(&[(0, 0)]).unwrap().vertices(), vec![0, 4, 8]);
        let m = CobordismPresentation::bundled("moebius").unwrap();
        assert!(m.piece(&[(0, 0)]).unwrap().is_empty());
        assert_eq!(m.total().orientation_defects(), vec![(vec![0, 3], -2)]);
    }

    #[test]
    fn rejects_missing_piece() {
        let mut v: Value = serde_json::from_str(BUNDLED[0].1).unwrap();
        v["pieces"].as_object_mut().unwrap().remove("(1,1)");
        assert!(CobordismPresentation::from_json(&v).is_err());
    }
}
