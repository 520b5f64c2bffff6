//! The named index posets: `Σ^n`, `Λ^n`, fold and uple span shapes,
//! subdivisions of simplices, products and cones, plus `j_n` and `π_j`.

use crate::error::{Error, Result};
use crate::shape::poset::{Poset, PosetMap};

pub const BOTTOM: &str = "-inf";
pub const TOP: &str = "inf";

/// A shape expression, parsed from e.g. `sigma(2)` or `cone_left(Sp_circ(2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Sigma(usize),
    Lambda(usize),
    SpFold(usize),
    SpFoldCirc(usize),
    Sp(usize),
    SpCirc(usize),
    Sd(usize),
    /// `Σ^{j_1} × … × Σ^{j_k}`.
    SigmaProduct(Vec<usize>),
    Product(Vec<Shape>),
    ConeLeft(Box<Shape>),
    ConeRight(Box<Shape>),
}

fn nonneg(kind: &str, params: &[i64], want: usize) -> Result<Vec<usize>> {
    if params.len() != want {
        return Err(Error::Parse(format!("{kind} takes {want} parameter(s), got {}", params.len())));
    }
    params
        .iter()
        .map(|&p| usize::try_from(p).map_err(|_| Error::Parse(format!("{kind}: negative parameter {p}"))))
        .collect()
}

/// Builds a shape from a kind name and integer parameters. `product` reads its
/// parameters as a tuple `j` and yields `Σ^j`; the cone kinds cone off `Σ^j`.
pub fn build_shape(kind: &str, params: &[i64]) -> Result<Poset> {
    shape_from_kind(kind, params)?.build()
}

pub fn shape_from_kind(kind: &str, params: &[i64]) -> Result<Shape> {
    let one = |k: &str| nonneg(k, params, 1).map(|v| v[0]);
    let tuple = || -> Result<Vec<usize>> {
        params
            .iter()
            .map(|&p| usize::try_from(p).map_err(|_| Error::Parse(format!("{kind}: negative parameter {p}"))))
            .collect()
    };
    Ok(match kind {
        "sigma" => Shape::Sigma(one(kind)?),
        "lambda" => Shape::Lambda(one(kind)?),
        "sp" => Shape::SpFold(one(kind)?),
        "sp_circ" => Shape::SpFoldCirc(one(kind)?),
        "Sp" => Shape::Sp(one(kind)?),
        "Sp_circ" => Shape::SpCirc(one(kind)?),
        "sd" => Shape::Sd(one(kind)?),
        "product" => Shape::SigmaProduct(tuple()?),
        "cone_left" => Shape::ConeLeft(Box::new(Shape::SigmaProduct(tuple()?))),
        "cone_right" => Shape::ConeRight(Box::new(Shape::SigmaProduct(tuple()?))),
        other => return Err(Error::Unknown { kind: "shape kind", name: other.to_string() }),
    })
}

impl Shape {
    pub fn build(&self) -> Result<Poset> {
        match self {
            Shape::Sigma(n) => Ok(sigma(*n)),
            Shape::Lambda(n) => Ok(lambda(*n)),
            Shape::SpFold(n) => Ok(sp_fold(*n)),
            Shape::SpFoldCirc(n) => Ok(sp_fold_circ(*n)),
            Shape::Sp(n) => Ok(sp_uple(*n)),
            Shape::SpCirc(n) => Ok(sp_uple_circ(*n)),
            Shape::Sd(l) => Ok(sd(*l)),
            Shape::SigmaProduct(js) => Ok(sigma_product(js)),
            Shape::Product(parts) => {
                let ps = parts.iter().map(Shape::build).collect::<Result<Vec<_>>>()?;
                let refs: Vec<&Poset> = ps.iter().collect();
                Ok(Poset::product(&refs))
            }
            Shape::ConeLeft(s) => s.build()?.cone_left(BOTTOM),
            Shape::ConeRight(s) => s.build()?.cone_right(TOP),
        }
    }

    /// Parses `kind(args)` where args are integers or nested shapes.
    pub fn parse(text: &str) -> Result<Shape> {
        let t = text.trim();
        let (head, rest) = match t.find('(') {
            Some(i) => (&t[..i], &t[i..]),
            None => return Err(Error::Parse(format!("shape {t:?}: expected kind(args)"))),
        };
        if !rest.ends_with(')') {
            return Err(Error::Parse(format!("shape {t:?}: unbalanced parentheses")));
        }
        let inner = &rest[1..rest.len() - 1];
        let args = split_top_level(inner)?;
        let head = head.trim();
        if matches!(head, "cone_left" | "cone_right" | "product") && args.iter().any(|a| a.contains('(')) {
            let shapes = args.iter().map(|a| Shape::parse(a)).collect::<Result<Vec<_>>>()?;
            return match head {
                "product" => Ok(Shape::Product(shapes)),
                _ if shapes.len() != 1 => Err(Error::Parse(format!("{head} takes one shape"))),
                "cone_left" => Ok(Shape::ConeLeft(Box::new(shapes.into_iter().next().unwrap()))),
                _ => Ok(Shape::ConeRight(Box::new(shapes.into_iter().next().unwrap()))),
            };
        }
        let params = args
            .iter()
            .filter(|a| !a.trim().is_empty())
            .map(|a| a.trim().parse::<i64>().map_err(|_| Error::Parse(format!("shape {t:?}: bad integer {a:?}"))))
            .collect::<Result<Vec<_>>>()?;
        shape_from_kind(head, &params)
    }
}

fn split_top_level(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse("unbalanced parentheses".into()));
                }
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced parentheses".into()));
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

pub fn sigma_label(i: usize, j: usize) -> String {
    format!("({i},{j})")
}

/// Pairs `(i, j)`, `0 ≤ i ≤ j ≤ n`, with `(i,j) ≤ (i',j')` iff `i ≤ i'` and `j' ≤ j`.
pub fn sigma(n: usize) -> Poset {
    let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
    let labels = pairs.iter().map(|&(i, j)| sigma_label(i, j)).collect();
    Poset::from_fn(labels, |a, b| pairs[a].0 <= pairs[b].0 && pairs[b].1 <= pairs[a].1).unwrap()
}

/// Elements of `sigma(n)` in index order.
pub fn sigma_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
}

pub fn lambda(n: usize) -> Poset {
    let s = sigma(n);
    let keep: Vec<usize> = sigma_pairs(n)
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| j - i <= 1)
        .map(|(k, _)| k)
        .collect();
    s.subposet(&keep)
}

pub fn sigma_product(js: &[usize]) -> Poset {
    let factors: Vec<Poset> = js.iter().map(|&j| sigma(j)).collect();
    let refs: Vec<&Poset> = factors.iter().collect();
    Poset::product(&refs)
}

pub fn fold_label(is_a: bool, k: usize) -> String {
    format!("{}{k}", if is_a { "A" } else { "B" })
}

/// `sp^{n,◦}`: `A_k, B_k` with `A_m ≤ A_k, B_m ≤ B_k` iff `m ≥ k` and
/// `A_m ≤ B_k, B_m ≤ A_k` iff `m > k`. Order: `A1, B1, A2, B2, …`.
pub fn sp_fold_circ(n: usize) -> Poset {
    let elems: Vec<(bool, usize)> = (1..=n).flat_map(|k| [(true, k), (false, k)]).collect();
    let labels = elems.iter().map(|&(a, k)| fold_label(a, k)).collect();
    Poset::from_fn(labels, |x, y| {
        let (ax, m) = elems[x];
        let (ay, k) = elems[y];
        if ax == ay {
            m >= k
        } else {
            m > k
        }
    })
    .unwrap()
}

/// `sp^n = (sp^{n,◦})^◁`, with `-inf` first.
pub fn sp_fold(n: usize) -> Poset {
    sp_fold_circ(n).cone_left(BOTTOM).unwrap()
}

/// Index of `A_k` / `B_k` in `sp_fold_circ(n)`.
pub fn fold_circ_index(is_a: bool, k: usize) -> usize {
    2 * (k - 1) + usize::from(!is_a)
}

/// Coordinates of `Sp^1 = {-inf, A1, B1}` encoded as 0, 1, 2.
pub const COORD_LABELS: [&str; 3] = [BOTTOM, "A1", "B1"];

pub fn uple_label(coords: &[u8]) -> String {
    let parts: Vec<&str> = coords.iter().map(|&c| COORD_LABELS[c as usize]).collect();
    format!("({})", parts.join(","))
}

/// Elements of `Sp^n` in index order (base-3 lexicographic).
pub fn uple_coords(n: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|c| {
                (0u8..3).map(move |x| {
                    let mut c = c.clone();
                    c.push(x);
                    c
                })
            })
            .collect();
    }
    out
}

pub fn uple_index(coords: &[u8]) -> usize {
    coords.iter().fold(0, |acc, &c| acc * 3 + c as usize)
}

fn coord_leq(x: u8, y: u8) -> bool {
    x == y || x == 0
}

/// `Sp^n = (sp^1)^n`; the initial element `(-inf,…,-inf)` has index 0.
pub fn sp_uple(n: usize) -> Poset {
    let coords = uple_coords(n);
    let labels = coords.iter().map(|c| uple_label(c)).collect();
    Poset::from_fn(labels, |a, b| coords[a].iter().zip(&coords[b]).all(|(&x, &y)| coord_leq(x, y))).unwrap()
}

/// `Sp^{n,◦}`: `Sp^n` without its initial element; index `i` here is index `i+1` in `Sp^n`.
pub fn sp_uple_circ(n: usize) -> Poset {
    let full = sp_uple(n);
    let keep: Vec<usize> = (1..full.len()).collect();
    full.subposet(&keep)
}

/// Nonempty subsets of `[l]` ordered by inclusion, labelled `{0,2}`.
pub fn sd(l: usize) -> Poset {
    let faces = sd_faces(l);
    let labels = faces.iter().map(|f| face_label(f)).collect();
    Poset::from_fn(labels, |a, b| faces[a].iter().all(|v| faces[b].contains(v))).unwrap()
}

pub fn face_label(f: &[usize]) -> String {
    let parts: Vec<String> = f.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Faces of `Δ^l` as sorted vertex lists, by increasing size then lexicographically.
pub fn sd_faces(l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << (l + 1)) {
        out.push((0..=l).filter(|&v| mask & (1 << v) != 0).collect::<Vec<_>>());
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// `j_n : Sp^n → sp^n`: first non-`-inf` coordinate at index `k` gives `A_k` or `B_k`.
pub fn j_functor(n: usize) -> PosetMap {
    let src = sp_uple(n);
    let tgt = sp_fold(n);
    let mapping = uple_coords(n)
        .iter()
        .map(|c| match c.iter().position(|&x| x != 0) {
            None => 0,
            Some(k) => 1 + fold_circ_index(c[k] == 1, k + 1),
        })
        .collect();
    PosetMap::new(src, tgt, mapping).expect("j_n is monotone")
}

/// `j_n^◦ : Sp^{n,◦} → sp^{n,◦}`.
pub fn j_circ_functor(n: usize) -> PosetMap {
    let j = j_functor(n);
    let mapping = (1..j.source.len()).map(|i| j.mapping[i] - 1).collect();
    PosetMap::new(sp_uple_circ(n), sp_fold_circ(n), mapping).expect("j_n restricts")
}

/// `π_j : Sp^n → Sp^{n-1}` forgetting coordinate `j` (1-based).
pub fn projection(n: usize, j: usize) -> Result<PosetMap> {
    if j == 0 || j > n {
        return Err(Error::Invariant(format!("projection index {j} outside 1..={n}")));
    }
    let mapping = uple_coords(n)
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.remove(j - 1);
            uple_index(&c)
        })
        .collect();
    PosetMap::new(sp_uple(n), sp_uple(n - 1), mapping)
}

/// The morphisms of `Sp^n` sent to identities by `j_n`, from the explicit case list.
pub fn reduced_morphisms(n: usize) -> Vec<(usize, usize)> {
    let coords = uple_coords(n);
    let p = sp_uple(n);
    let mut out = Vec::new();
    for (a, b) in p.relations() {
        let (x, y) = (&coords[a], &coords[b]);
        let in_r = (0..n).any(|k| {
            let prefix_bottom = (0..k).all(|i| x[i] == 0 && y[i] == 0);
            let fk_identity = x[k] == y[k];
            let last = k == n - 1;
            prefix_bottom && fk_identity && (last || x[k] != 0)
        });
        if in_r {
            out.push((a, b));
        }
    }
    out
}

/// `R_j` for `Σ^{j_1} × … × Σ^{j_n}` per the case list (identities included).
pub fn reduced_sigma_morphisms(js: &[usize]) -> Vec<(usize, usize)> {
    let p = sigma_product(js);
    let pairs: Vec<Vec<(usize, usize)>> = js.iter().map(|&j| sigma_pairs(j)).collect();
    let decode = |mut idx: usize| -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); js.len()];
        for k in (0..js.len()).rev() {
            let m = pairs[k].len();
            out[k] = pairs[k][idx % m];
            idx /= m;
        }
        out
    };
    let mut out = Vec::new();
    for (a, b) in p.relations() {
        let (x, y) = (decode(a), decode(b));
        if a == b {
            out.push((a, b));
            continue;
        }
        let n = js.len();
        let hit = (0..n.saturating_sub(1)).any(|k| {
            let prefix = (0..k).all(|i| x[i] == y[i] && x[i].0 != x[i].1);
            prefix && x[k] == y[k] && x[k].0 == x[k].1
        });
        if hit {
            out.push((a, b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::nerve::nerve;

    #[test]
    fn sizes() {
        assert_eq!(sigma(2).len(), 6);
        assert_eq!(lambda(2).len(), 5);
        assert_eq!(sp_fold_circ(2).len(), 4);
        assert_eq!(sp_uple(2).len(), 9);
        assert_eq!(sd(2).len(), 7);
        assert_eq!(sigma_product(&[1, 1]).len(), 9);
    }

    #[test]
    fn sp_circ_two_relations() {
        let p = sp_fold_circ(2);
        let idx = |s: &str| p.element(s).unwrap();
        for (a, b) in [("A2", "A1"), ("A2", "B1"), ("B2", "A1"), ("B2", "B1")] {
            assert!(p.lt(idx(a), idx(b)));
        }
        assert_eq!(p.relation_count(), 4 + 4);
    }

    #[test]
    fn nerve_counts() {
        assert_eq!(nerve(&sp_fold_circ(1)).counts(), vec![2]);
        assert_eq!(nerve(&sp_fold_circ(2)).counts(), vec![4, 4]);
        assert_eq!(nerve(&sigma(1)).counts(), vec![3, 2]);
    }

    #[test]
    fn j_examples() {
        let j = j_functor(2);
        let s = &j.source;
        let t = &j.target;
        let img = |l: &str| t.label(j.apply(s.element(l).unwrap())).to_string();
        assert_eq!(img("(-inf,A1)"), "A2");
        assert_eq!(img("(A1,B1)"), "A1");
        assert_eq!(img("(-inf,-inf)"), "-inf");
        for n in 1..=4 {
            assert!(j_functor(n).is_surjective());
        }
    }

    #[test]
    fn reduced_matches_j() {
        for n in 1..=3 {
            let j = j_functor(n);
            let mut from_j: Vec<(usize, usize)> = j
                .source
                .relations()
                .into_iter()
                .filter(|&(a, b)| j.apply(a) == j.apply(b))
                .collect();
            from_j.sort_unstable();
            let mut listed = reduced_morphisms(n);
            listed.sort_unstable();
            assert_eq!(from_j, listed, "n = {n}");
        }
        let r1 = reduced_morphisms(1);
        assert!(r1.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn parse_shapes() {
        assert_eq!(Shape::parse("sigma(2)").unwrap(), Shape::Sigma(2));
        let c = Shape::parse("cone_left(Sp_circ(2))").unwrap().build().unwrap();
        assert_eq!(c.len(), 9);
        assert!(Shape::parse("bogus(1)").is_err());
        assert!(build_shape("sigma", &[-1]).is_err());
        assert_eq!(build_shape("product", &[1, 2]).unwrap().len(), 18);
        assert_eq!(build_shape("cone_right", &[]).unwrap().len(), 2);
    }

    #[test]
    fn sd_is_face_poset() {
        let p = sd(2);
        assert_eq!(p.label(0), "{0}");
        assert_eq!(p.terminal(), Some(6));
        assert!(nerve(&p).reduced_homology().is_empty());
    }
}
