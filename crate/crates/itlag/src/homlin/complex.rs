//! Bounded cochain complexes of finite-dimensional ℚ-vector spaces.
//!
//! Grading is cohomological: `d^n` goes from degree `n` to degree `n + 1` and
//! is stored as a `dim(n+1) x dim(n)` matrix acting on column vectors.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{dim_err, invariant, Error, Result};
use crate::linalg::Matrix;
use crate::rational::{fmt_q, parse_q, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalComplex {
    dims: BTreeMap<i32, usize>,
    d: BTreeMap<i32, Matrix>,
}

impl RationalComplex {
    /// Validates shapes and `d∘d = 0`. Zero entries are dropped.
    pub fn new(dims: BTreeMap<i32, usize>, d: BTreeMap<i32, Matrix>) -> Result<Self> {
        let c = Self::new_unchecked(dims, d);
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(mut dims: BTreeMap<i32, usize>, mut d: BTreeMap<i32, Matrix>) -> Self {
        dims.retain(|_, v| *v > 0);
        d.retain(|_, m| !m.is_zero());
        RationalComplex { dims, d }
    }

    fn validate(&self) -> Result<()> {
        for (&n, m) in &self.d {
            if m.shape() != (self.dim(n + 1), self.dim(n)) {
                return dim_err(format!(
                    "d^{n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (self.dim(n + 1), self.dim(n))
                ));
            }
        }
        for (&n, m) in &self.d {
            if let Some(next) = self.d.get(&(n + 1)) {
                if !next.mul(m).is_zero() {
                    return invariant(format!("d^{} d^{} != 0", n + 1, n));
                }
            }
        }
        Ok(())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `ℚ^dim` placed in a single degree.
    pub fn concentrated(degree: i32, dim: usize) -> Self {
        Self::new_unchecked([(degree, dim)].into(), BTreeMap::new())
    }

    /// Builds from a list of `(degree, dim)` and `(degree, d)` pairs.
    pub fn from_parts(dims: &[(i32, usize)], d: Vec<(i32, Matrix)>) -> Result<Self> {
        Self::new(dims.iter().copied().collect(), d.into_iter().collect())
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i32, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// `d^n`, materialized as a zero matrix when absent.
    pub fn diff(&self, n: i32) -> Matrix {
        self.d
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(n + 1), self.dim(n)))
    }

    pub fn diff_ref(&self, n: i32) -> Option<&Matrix> {
        self.d.get(&n)
    }

    /// Nonzero differentials by source degree.
    pub fn diff_iter(&self) -> impl Iterator<Item = (&i32, &Matrix)> {
        self.d.iter()
    }

    /// Smallest and largest degree with nonzero dimension.
    pub fn range(&self) -> Option<(i32, i32)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.dims.keys().copied().collect()
    }

    pub fn homology(&self) -> BTreeMap<i32, usize> {
        let ranks: BTreeMap<i32, usize> = self.d.iter().map(|(&n, m)| (n, m.rank())).collect();
        let mut out = BTreeMap::new();
        for (&n, &dim) in &self.dims {
            let r_out = ranks.get(&n).copied().unwrap_or(0);
            let r_in = ranks.get(&(n - 1)).copied().unwrap_or(0);
            let h = dim - r_out - r_in;
            if h > 0 {
                out.insert(n, h);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology().is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&n, &k)| if n.rem_euclid(2) == 0 { k as i64 } else { -(k as i64) })
            .sum()
    }

    /// Columns of the result span the cocycles in degree `n`.
    pub fn cocycles(&self, n: i32) -> Matrix {
        self.diff(n).kernel()
    }

    /// Cocycles in degree `n` whose classes form a basis of `H^n`.
    pub fn homology_basis(&self, n: i32) -> Matrix {
        let z = self.cocycles(n);
        let b = self.diff(n - 1);
        let span_b = b.column_basis();
        // extend a basis of the boundaries by cocycles
        let mut chosen = Matrix::hstack(&[&span_b, &Matrix::zeros(self.dim(n), 0)]);
        let mut picked = Vec::new();
        for j in 0..z.ncols() {
            let col = z.select_columns(&[j]);
            let trial = Matrix::hstack(&[&chosen, &col]);
            if trial.rank() > chosen.ncols() {
                chosen = trial;
                picked.push(j);
            }
        }
        z.select_columns(&picked)
    }

    /// `C[k]^n = C^{n+k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i32) -> Self {
        let s = if k.rem_euclid(2) == 0 { q(1) } else { q(-1) };
        Self::new_unchecked(
            self.dims.iter().map(|(&n, &v)| (n - k, v)).collect(),
            self.d.iter().map(|(&n, m)| (n - k, m.scale(&s))).collect(),
        )
    }

    /// `(C^∨)^k = (C^{-k})^*` with `d^k = -(-1)^k (d^{-k-1})^T`.
    pub fn dual(&self) -> Self {
        Self::new_unchecked(
            self.dims.iter().map(|(&n, &v)| (-n, v)).collect(),
            self.d
                .iter()
                .map(|(&n, m)| {
                    let k = -n - 1;
                    let s = if k.rem_euclid(2) == 0 { q(-1) } else { q(1) };
                    (k, m.transpose().scale(&s))
                })
                .collect(),
        )
    }

    pub fn direct_sum(parts: &[&RationalComplex]) -> Self {
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        for p in parts {
            for (&n, &v) in &p.dims {
                *dims.entry(n).or_default() += v;
            }
        }
        let mut d = BTreeMap::new();
        let lo = dims.keys().next().copied().unwrap_or(0);
        let hi = dims.keys().next_back().copied().unwrap_or(0);
        for n in lo..hi {
            let blocks: Vec<Matrix> = parts.iter().map(|p| p.diff(n)).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            d.insert(n, Matrix::block_diag(&refs));
        }
        Self::new_unchecked(dims, d)
    }

    /// Offsets of each summand's degree-`n` block inside `direct_sum(parts)`.
    pub fn sum_offsets(parts: &[&RationalComplex], n: i32) -> Vec<usize> {
        let mut acc = 0;
        parts
            .iter()
            .map(|p| {
                let o = acc;
                acc += p.dim(n);
                o
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let degrees: Map<String, Value> = self.dims.iter().map(|(n, v)| (n.to_string(), json!(v))).collect();
        let d: Map<String, Value> = self
            .d
            .iter()
            .map(|(n, m)| (n.to_string(), matrix_to_json(m)))
            .collect();
        json!({ "degrees": degrees, "d": d })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let degrees = v
            .get("degrees")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("complex: missing \"degrees\" object".into()))?;
        let mut dims = BTreeMap::new();
        for (k, val) in degrees {
            let n: i32 = k.parse().map_err(|_| Error::Parse(format!("complex: bad degree {k:?}")))?;
            let dim = val
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("complex: degree {k} dimension not a natural number")))?;
            dims.insert(n, dim as usize);
        }
        let mut d = BTreeMap::new();
        if let Some(ds) = v.get("d") {
            let ds = ds.as_object().ok_or_else(|| Error::Parse("complex: \"d\" must be an object".into()))?;
            for (k, val) in ds {
                let n: i32 = k.parse().map_err(|_| Error::Parse(format!("complex: bad degree {k:?} in d")))?;
                let rows = dims.get(&(n + 1)).copied().unwrap_or(0);
                let cols = dims.get(&n).copied().unwrap_or(0);
                let m = matrix_from_json(val, rows, cols).map_err(|e| Error::Parse(format!("complex: d^{n}: {e}")))?;
                d.insert(n, m);
            }
        }
        Self::new(dims, d)
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        m.to_dense()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_q(x))).collect()))
            .collect(),
    )
}

/// Accepts strings `"p/q"` or JSON integers as entries.
pub fn matrix_from_json(v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if arr.len() != rows {
        return Err(Error::Parse(format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut dense: Vec<Vec<Q>> = Vec::with_capacity(rows);
    for (i, r) in arr.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| Error::Parse(format!("row {i} is not an array")))?;
        if r.len() != cols {
            return Err(Error::Parse(format!("row {i}: expected {cols} entries, found {}", r.len())));
        }
        let mut row = Vec::with_capacity(cols);
        for (j, x) in r.iter().enumerate() {
            let val = match x {
                Value::String(s) => parse_q(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(q)
                    .ok_or_else(|| Error::Parse(format!("entry ({i},{j}) is not an integer"))),
                _ => Err(Error::Parse(format!("entry ({i},{j}) must be a string or integer"))),
            }?;
            row.push(val);
        }
        dense.push(row);
    }
    Ok(Matrix::from_dense(rows, cols, &dense))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(a: i64) -> RationalComplex {
        RationalComplex::from_parts(&[(0, 1), (1, 1)], vec![(0, Matrix::from_i64(1, 1, &[&[a]]))]).unwrap()
    }

    #[test]
    fn homology_of_small_complexes() {
        assert!(RationalComplex::zero().homology().is_empty());
        assert!(two_term(3).is_acyclic());
        assert_eq!(two_term(0).homology(), [(0, 1), (1, 1)].into());
    }

    #[test]
    fn rejects_non_complex() {
        let d0 = Matrix::from_i64(1, 1, &[&[1]]);
        let d1 = Matrix::from_i64(1, 1, &[&[1]]);
        assert!(RationalComplex::from_parts(&[(0, 1), (1, 1), (2, 1)], vec![(0, d0), (1, d1)]).is_err());
    }

    #[test]
    fn shift_and_dual() {
        let c = two_term(0);
        assert_eq!(c.shift(1).homology(), [(-1, 1), (0, 1)].into());
        let c = RationalComplex::from_parts(&[(0, 2), (1, 1)], vec![(0, Matrix::from_i64(1, 2, &[&[1, 1]]))]).unwrap();
        // the double dual carries -d; x ↦ (-1)^n x identifies it with c
        let dd = c.dual().dual();
        assert_eq!(dd.diff(0), c.diff(0).neg());
        assert_eq!(c.dual().homology(), [(0, 1)].into());
    }

    #[test]
    fn json_round_trip() {
        let c = two_term(2);
        let back = RationalComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(RationalComplex::from_json(&json!({"degrees": {"x": 1}})).is_err());
    }

    #[test]
    fn homology_basis_spans() {
        let c = two_term(0);
        assert_eq!(c.homology_basis(0).ncols(), 1);
        assert_eq!(two_term(1).homology_basis(1).ncols(), 0);
    }
}
