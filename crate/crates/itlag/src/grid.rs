//! Interval sequences, the boxes `B`, `B'`, `B''` and the grid assignment for constant families.

use serde_json::{json, Value};

use crate::error::{dim_err, invariant, Error, Result};
use crate::rational::{fmt_q, parse_q, q, Q};
use crate::shape::delta::DeltaMorphism;
use crate::spine::CheckTally;

/// A closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closed {
    pub lo: Q,
    pub hi: Q,
}

impl Closed {
    pub fn contains(&self, other: &Closed) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Containment with both endpoints strictly inside.
    pub fn contains_strictly(&self, other: &Closed) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn to_json(&self) -> Value {
        json!([fmt_q(&self.lo), fmt_q(&self.hi)])
    }
}

impl std::fmt::Display for Closed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `I_0 ≤ … ≤ I_k` with `I_m = (a_m, b_m)`, `a_m < b_m`, both endpoint sequences non-decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSeq {
    intervals: Vec<(Q, Q)>,
}

impl IntervalSeq {
    pub fn new(intervals: Vec<(Q, Q)>) -> Result<Self> {
        if intervals.is_empty() {
            return dim_err("an interval sequence needs at least one interval");
        }
        if let Some((a, b)) = intervals.iter().find(|(a, b)| a >= b) {
            return invariant(format!("({a}, {b}) is not an open interval"));
        }
        if intervals.windows(2).any(|w| w[0].0 > w[1].0 || w[0].1 > w[1].1) {
            return invariant("interval endpoints must be non-decreasing");
        }
        Ok(IntervalSeq { intervals })
    }

    pub fn from_i64(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(a, b)| (q(a), q(b))).collect())
    }

    /// `k` for `I_0 ≤ … ≤ I_k`.
    pub fn len(&self) -> usize {
        self.intervals.len() - 1
    }

    pub fn intervals(&self) -> &[(Q, Q)] {
        &self.intervals
    }

    /// `φ^*I = I_{φ(0)} ≤ … ≤ I_{φ(m)}`, forgetting or repeating intervals.
    pub fn restrict(&self, phi: &DeltaMorphism) -> Result<Self> {
        if phi.target() != self.len() {
            return dim_err(format!("restriction along a map into [{}] of a length-{} sequence", phi.target(), self.len()));
        }
        Ok(IntervalSeq { intervals: phi.values().iter().map(|&i| self.intervals[i].clone()).collect() })
    }

    /// The inert restriction to `I_a ≤ … ≤ I_b`.
    pub fn window(&self, a: usize, b: usize) -> Result<Self> {
        if a > b || b > self.len() {
            return dim_err(format!("({a},{b}) is not a subinterval of [{}]", self.len()));
        }
        Ok(IntervalSeq { intervals: self.intervals[a..=b].to_vec() })
    }

    /// `B(I) = (a_0, b_k)`, returned by its endpoints.
    pub fn b(&self) -> (Q, Q) {
        (self.intervals[0].0.clone(), self.intervals[self.len()].1.clone())
    }

    /// `B'(I) = [(a_0+b_0)/2, (a_k+b_k)/2]`.
    pub fn b_prime(&self) -> Closed {
        let (a0, b0) = &self.intervals[0];
        let (ak, bk) = &self.intervals[self.len()];
        Closed { lo: (a0 + b0) / q(2), hi: (ak + bk) / q(2) }
    }

    /// `B''(I) = [(2a_0+b_0)/3, (a_k+2b_k)/3]`.
    pub fn b_double_prime(&self) -> Closed {
        let (a0, b0) = &self.intervals[0];
        let (ak, bk) = &self.intervals[self.len()];
        Closed { lo: (q(2) * a0 + b0) / q(3), hi: (ak + q(2) * bk) / q(3) }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.intervals.iter().map(|(a, b)| json!([fmt_q(a), fmt_q(b)])).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse(format!("expected an array of [a, b] pairs, got {v}"));
        let items = v.as_array().ok_or_else(bad)?;
        let mut intervals = Vec::new();
        for item in items {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let end = |x: &Value| match x {
                Value::String(s) => parse_q(s),
                Value::Number(n) => n.as_i64().map(q).ok_or_else(bad),
                _ => Err(bad()),
            };
            intervals.push((end(&pair[0])?, end(&pair[1])?));
        }
        Self::new(intervals)
    }
}

/// `(B, B', B'')` of one sequence.
pub fn b_variants(seq: &IntervalSeq) -> ((Q, Q), Closed, Closed) {
    (seq.b(), seq.b_prime(), seq.b_double_prime())
}

/// One interval sequence per direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalTuple {
    pub directions: Vec<IntervalSeq>,
}

impl IntervalTuple {
    pub fn new(directions: Vec<IntervalSeq>) -> Self {
        IntervalTuple { directions }
    }

    /// The multi-index `j`.
    pub fn shape(&self) -> Vec<usize> {
        self.directions.iter().map(IntervalSeq::len).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.directions.iter().map(IntervalSeq::to_json).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dirs = v.as_array().ok_or_else(|| Error::Parse("expected one array per direction".into()))?;
        Ok(IntervalTuple { directions: dirs.iter().map(IntervalSeq::from_json).collect::<Result<_>>()? })
    }

    fn boxes(&self, xi: &[(usize, usize)], f: impl Fn(&IntervalSeq) -> Closed) -> Result<Vec<Closed>> {
        if xi.len() != self.directions.len() {
            return dim_err(format!("{} coordinates for {} directions", xi.len(), self.directions.len()));
        }
        self.directions.iter().zip(xi).map(|(s, &(a, b))| Ok(f(&s.window(a, b)?))).collect()
    }

    /// `grid(Ī, ξ) = B'(ξ^*Ī)` for `ξ` an object of `Σ^{j}` given as `(a, b)` per direction.
    pub fn grid(&self, xi: &[(usize, usize)]) -> Result<Vec<Closed>> {
        self.boxes(xi, IntervalSeq::b_prime)
    }

    /// The `B''` variant of [`IntervalTuple::grid`].
    pub fn grid_tilde(&self, xi: &[(usize, usize)]) -> Result<Vec<Closed>> {
        self.boxes(xi, IntervalSeq::b_double_prime)
    }

    /// For `ξ → ξ'` in `Σ^{j,op}` (each interval of `ξ` inside that of `ξ'`), confirms
    /// `grid(ξ) ⊆ grid(ξ')` and `grid(ξ) ⊆ grid~(ξ)`.
    pub fn grid_monotone(&self, xi: &[(usize, usize)], xi2: &[(usize, usize)]) -> Result<()> {
        if xi.len() != xi2.len() || xi.iter().zip(xi2).any(|(&(a, b), &(c, d))| c > a || b > d) {
            return invariant(format!("{xi:?} → {xi2:?} is not a morphism"));
        }
        let (g, g2, gt) = (self.grid(xi)?, self.grid(xi2)?, self.grid_tilde(xi)?);
        for (i, ((x, y), z)) in g.iter().zip(&g2).zip(&gt).enumerate() {
            if !y.contains(x) {
                return Err(Error::Consistency(format!("direction {i}: {x} ⊄ {y} for {xi:?} → {xi2:?}")));
            }
            if !z.contains(x) {
                return Err(Error::Consistency(format!("direction {i}: γ fails, {x} ⊄ {z}")));
            }
        }
        Ok(())
    }
}

/// All objects of `Σ^{j}` as one `(a, b)` per direction.
pub fn sigma_objects(j: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut acc: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for &n in j {
        acc = acc
            .into_iter()
            .flat_map(|p| {
                (0..=n).flat_map(move |a| (a..=n).map(move |b| (a, b))).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    acc
}

/// Exhaustive checks on one tuple: monotonicity over every morphism, `γ`, invariance under
/// active injections and `B' ⊆ B'' ⊆ B`, strictly when all widths are positive.
pub fn check_grid(tuple: &IntervalTuple) -> CheckTally {
    let mut tally = CheckTally::default();
    let objects = sigma_objects(&tuple.shape());
    for xi in &objects {
        for xi2 in &objects {
            if xi.iter().zip(xi2).all(|(&(a, b), &(c, d))| c <= a && b <= d) {
                let r = tuple.grid_monotone(xi, xi2);
                tally.record(r.is_ok(), || r.unwrap_err().to_string());
            }
        }
    }
    for (i, seq) in tuple.directions.iter().enumerate() {
        let k = seq.len();
        for m in 1..=k {
            for alpha in DeltaMorphism::injections(m, k).into_iter().filter(DeltaMorphism::is_active) {
                let r = seq.restrict(&alpha).map(|s| s.b_prime() == seq.b_prime());
                tally.record(r == Ok(true), || format!("direction {i}: B' changes along active {alpha:?}"));
            }
        }
        let (b, bp, bpp) = b_variants(seq);
        let open = Closed { lo: b.0, hi: b.1 };
        tally.record(bpp.contains(&bp) && open.contains(&bpp), || format!("direction {i}: B' ⊆ B'' ⊆ B fails"));
        let positive = seq.intervals().iter().all(|(a, b)| a < b);
        tally.record(!positive || (bpp.lo < bp.lo && bp.hi < bpp.hi), || format!("direction {i}: B' not interior to B''"));
    }
    tally
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn closed(lo: Q, hi: Q) -> Closed {
        Closed { lo, hi }
    }

    #[test]
    fn variants() {
        let s = IntervalSeq::from_i64(&[(0, 2), (4, 6)]).unwrap();
        let (b, bp, bpp) = b_variants(&s);
        assert_eq!(b, (q(0), q(6)));
        assert_eq!(bp, closed(q(1), q(5)));
        assert_eq!(bpp, closed(frac(2, 3), frac(16, 3)));
        let one = IntervalSeq::from_i64(&[(0, 1)]).unwrap();
        assert_eq!(one.b_prime(), closed(frac(1, 2), frac(1, 2)));
        let rep = IntervalSeq::from_i64(&[(0, 1), (0, 1)]).unwrap();
        assert_eq!(rep.b_prime(), closed(frac(1, 2), frac(1, 2)));
    }

    #[test]
    fn grid_examples() {
        let t = IntervalTuple::new(vec![IntervalSeq::from_i64(&[(0, 2), (4, 6), (8, 10)]).unwrap()]);
        assert_eq!(t.grid(&[(0, 1)]).unwrap(), vec![closed(q(1), q(5))]);
        assert_eq!(t.grid(&[(0, 2)]).unwrap(), vec![closed(q(1), q(9))]);
        assert_eq!(t.grid(&[(1, 1)]).unwrap(), vec![closed(q(5), q(5))]);
        t.grid_monotone(&[(0, 1)], &[(0, 2)]).unwrap();
        t.grid_monotone(&[(0, 1)], &[(0, 1)]).unwrap();
        assert!(t.grid_monotone(&[(0, 2)], &[(0, 1)]).is_err());
        let two = IntervalTuple::new(vec![IntervalSeq::from_i64(&[(0, 2), (4, 6)]).unwrap()]);
        assert!(two.grid_tilde(&[(0, 1)]).unwrap()[0].contains(&closed(q(1), q(5))));
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(IntervalSeq::from_i64(&[(1, 1)]).is_err());
        assert!(IntervalSeq::from_i64(&[(2, 4), (1, 5)]).is_err());
        assert!(IntervalSeq::from_i64(&[]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = IntervalTuple::new(vec![
            IntervalSeq::new(vec![(frac(1, 2), q(1)), (q(1), frac(7, 3))]).unwrap(),
            IntervalSeq::from_i64(&[(0, 1)]).unwrap(),
        ]);
        assert_eq!(IntervalTuple::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn exhaustive_small() {
        let t = IntervalTuple::new(vec![
            IntervalSeq::from_i64(&[(0, 2), (1, 3), (4, 6), (5, 9)]).unwrap(),
            IntervalSeq::from_i64(&[(0, 1), (0, 1)]).unwrap(),
        ]);
        let tally = check_grid(&t);
        assert!(tally.ok(), "{:?}", tally.failures);
    }
}
