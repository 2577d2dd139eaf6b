use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::form::{Form, Idx};
use super::repr::{models, OperatorRepr, RegOperator, RuleVerdict};
use crate::error::{mismatch, Error, Result};
use crate::lattice::{Dual, Primal, Space, VecElem};
use crate::rational::{self, Rational};

/// All 1-based index tuples for the given dimensions, last index fastest.
pub fn index_tuples(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (1..=n).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

/// Dense rational tensor `A(x_1..x_m)_j = Σ e[i_1..i_m, j] Π x_{r,i_r}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorOp {
    dims: Vec<usize>,
    domain: Vec<Space>,
    codomain: Space,
    k: usize,
    data: Arc<Vec<Rational>>,
}

impl TensorOp {
    pub fn zeros(dims: Vec<usize>, codomain: Space) -> Result<TensorOp> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(mismatch("tensor dimensions must be positive"));
        }
        let k = codomain
            .fin_dim()
            .ok_or_else(|| mismatch("tensor codomain must be finite dimensional"))?;
        let size = dims.iter().product::<usize>() * k;
        Ok(TensorOp {
            domain: dims.iter().map(|&n| Space::FinDim(n)).collect(),
            dims,
            codomain,
            k,
            data: Arc::new(vec![rational::zero(); size]),
        })
    }

    pub fn from_entries(
        dims: Vec<usize>,
        codomain: Space,
        entries: impl IntoIterator<Item = (Vec<usize>, usize, Rational)>,
    ) -> Result<TensorOp> {
        let mut t = TensorOp::zeros(dims, codomain)?;
        for (idx, j, v) in entries {
            t.check_index(&idx, j)?;
            let cur = t.get(&idx, j);
            t.set(&idx, j, cur + v);
        }
        Ok(t)
    }

    /// Shorthand for integer-valued scalar forms.
    pub fn scalar_form(dims: &[usize], entries: &[(&[usize], i64)]) -> TensorOp {
        TensorOp::from_entries(
            dims.to_vec(),
            Space::FinDim(1),
            entries.iter().map(|(i, v)| (i.to_vec(), 1, rational::int(*v))),
        )
        .expect("well-formed literal tensor")
    }

    fn check_index(&self, idx: &[usize], j: usize) -> Result<()> {
        if idx.len() != self.dims.len()
            || idx.iter().zip(&self.dims).any(|(&i, &n)| i == 0 || i > n)
            || j == 0
            || j > self.k
        {
            return Err(mismatch(format!("tensor index {idx:?}, {j} out of range")));
        }
        Ok(())
    }

    fn offset(&self, idx: &[usize], j: usize) -> usize {
        let mut o = 0;
        for (&i, &n) in idx.iter().zip(&self.dims) {
            o = o * n + (i - 1);
        }
        o * self.k + (j - 1)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn codomain_dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, idx: &[usize], j: usize) -> Rational {
        self.data[self.offset(idx, j)].clone()
    }

    pub fn set(&mut self, idx: &[usize], j: usize, v: Rational) {
        let o = self.offset(idx, j);
        Arc::make_mut(&mut self.data)[o] = v;
    }

    /// Nonzero entries as `(indices, j, value)`.
    pub fn nonzeros(&self) -> Vec<(Vec<usize>, usize, Rational)> {
        let mut out = Vec::new();
        for idx in index_tuples(&self.dims) {
            for j in 1..=self.k {
                let v = self.get(&idx, j);
                if !v.is_zero() {
                    out.push((idx.clone(), j, v));
                }
            }
        }
        out
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|v| !v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> TensorOp {
        TensorOp {
            data: Arc::new(self.data.iter().map(f).collect()),
            ..self.clone()
        }
    }

    /// Each codomain slice has at most one nonzero entry, and it is positive.
    pub fn structural_multimorphism(&self) -> bool {
        (1..=self.k).all(|j| {
            let slice: Vec<Rational> = index_tuples(&self.dims)
                .into_iter()
                .map(|idx| self.get(&idx, j))
                .filter(|v| !v.is_zero())
                .collect();
            slice.len() <= 1 && slice.iter().all(|v| v.is_positive())
        })
    }

    /// Coordinates of slot `r` (0-based) that carry a nonzero entry.
    pub fn slot_support(&self, r: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.nonzeros().iter().map(|(idx, _, _)| idx[r]).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn apply_vecs(&self, xs: &[&VecElem]) -> VecElem {
        let mut out = vec![rational::zero(); self.k];
        for idx in index_tuples(&self.dims) {
            let w: Rational = idx.iter().zip(xs).map(|(&i, x)| x.get(i)).product();
            if w.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let e = &self.data[self.offset(&idx, j + 1)];
                if !e.is_zero() {
                    *o += &w * e;
                }
            }
        }
        VecElem::new(out)
    }

    pub fn from_json(v: &Value) -> Result<TensorOp> {
        let bad = |what: &str| Error::Parse(format!("tensor: {what}"));
        let dims: Vec<usize> = serde_json::from_value(v.get("dims").cloned().ok_or_else(|| bad("missing dims"))?)
            .map_err(|e| bad(&e.to_string()))?;
        let codomain = match v.get("codomain") {
            Some(Value::Number(n)) => {
                Space::FinDim(n.as_u64().filter(|&k| k >= 1).ok_or_else(|| bad("codomain must be a positive integer"))? as usize)
            }
            Some(obj @ Value::Object(_)) => {
                serde_json::from_value(obj.clone()).map_err(|e| bad(&e.to_string()))?
            }
            _ => return Err(bad("missing codomain")),
        };
        let rows: Vec<Vec<i128>> = serde_json::from_value(v.get("entries").cloned().unwrap_or(json!([])))
            .map_err(|e| bad(&e.to_string()))?;
        let m = dims.len();
        let mut entries = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != m + 3 {
                return Err(bad(&format!("entry {row:?} must have {} integers", m + 3)));
            }
            let idx: Vec<usize> = row[..m].iter().map(|&i| i.max(0) as usize).collect();
            let value = rational::from_pair(row[m + 1], row[m + 2]).map_err(|e| bad(&e))?;
            entries.push((idx, row[m].max(0) as usize, value));
        }
        TensorOp::from_entries(dims, codomain, entries).map_err(|e| bad(&e.to_string()))
    }
}

impl OperatorRepr for TensorOp {
    fn kind(&self) -> &'static str {
        "tensor"
    }

    fn domain(&self) -> &[Space] {
        &self.domain
    }

    fn codomain(&self) -> &Space {
        &self.codomain
    }

    fn threshold(&self) -> usize {
        0
    }

    fn apply(&self, args: &[Primal]) -> Result<Primal> {
        let xs = args
            .iter()
            .map(|x| match x {
                Primal::Vec(v) => Ok(v),
                _ => Err(mismatch("tensor arguments must be vectors")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Primal::Vec(self.apply_vecs(&xs)))
    }

    fn compose_dual(&self, y: &Dual) -> Result<Form> {
        let Dual::Vec(y) = y else {
            return Err(mismatch("tensor codomain dual must be a vector"));
        };
        let tuples = index_tuples(&self.dims);
        let coeffs: Vec<Rational> = tuples
            .iter()
            .map(|idx| {
                (1..=self.k)
                    .map(|j| y.get(j) * &self.data[self.offset(idx, j)])
                    .sum()
            })
            .collect();
        let dims = self.dims.clone();
        Ok(Form::new(models(&self.domain), 0, move |idx| {
            let mut o = 0;
            for (i, &n) in idx.iter().zip(&dims) {
                let Idx::At(i) = i else { return rational::zero() };
                o = o * n + (i - 1);
            }
            coeffs[o].clone()
        }))
    }

    fn modulus(&self) -> Result<RegOperator> {
        Ok(RegOperator::new(self.map(rational::abs)))
    }

    fn parts(&self) -> Option<Result<(RegOperator, RegOperator)>> {
        Some(Ok((
            RegOperator::new(self.map(rational::pos)),
            RegOperator::new(self.map(rational::neg)),
        )))
    }

    fn positive_rule(&self) -> Option<bool> {
        Some(self.is_positive())
    }

    fn multimorphism_rule(&self) -> Option<RuleVerdict> {
        None
    }

    fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .nonzeros()
            .into_iter()
            .map(|(idx, j, v)| {
                let (n, d) = rational::to_pair(&v);
                let mut row: Vec<Value> = idx.into_iter().map(|i| json!(i)).collect();
                row.extend([json!(j), json!(n), json!(d)]);
                Value::Array(row)
            })
            .collect();
        let codomain = match &self.codomain {
            Space::FinDim { n } => json!(n),
            other => serde_json::to_value(other).expect("space serializes"),
        };
        json!({"kind": "tensor", "dims": self.dims, "codomain": codomain, "entries": entries})
    }

    fn as_tensor(&self) -> Option<&TensorOp> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn evaluation() {
        let b = TensorOp::scalar_form(&[2, 2], &[(&[2, 1], 3)]);
        let x = Primal::Vec(VecElem::from_ints(&[0, 1]));
        let y = Primal::Vec(VecElem::from_ints(&[2, 0]));
        assert_eq!(b.apply(&[x, y]).unwrap(), Primal::Vec(VecElem::from_ints(&[6])));
    }

    #[test]
    fn modulus_is_entrywise() {
        let t = TensorOp::from_entries(
            vec![2, 2],
            Space::FinDim(1),
            [(vec![1, 1], 1, int(-2)), (vec![2, 2], 1, int(3))],
        )
        .unwrap();
        let m = t.modulus().unwrap();
        let m = m.as_tensor().unwrap();
        assert_eq!(m.get(&[1, 1], 1), int(2));
        assert_eq!(m.get(&[2, 2], 1), int(3));
    }

    #[test]
    fn json_round_trip() {
        let t = TensorOp::scalar_form(&[2, 3], &[(&[2, 1], 3), (&[1, 3], -1)]);
        let v = t.to_json();
        assert_eq!(v["entries"][0], json!([1, 3, 1, -1, 1]));
        assert_eq!(TensorOp::from_json(&v).unwrap(), t);
    }

    #[test]
    fn slices_follow_the_entries() {
        let t = TensorOp::scalar_form(&[2, 2], &[(&[2, 1], 3)]);
        let f = t.compose_dual(&Dual::Vec(VecElem::from_ints(&[1]))).unwrap();
        let s = f.slice(&[None, Some(Primal::Vec(VecElem::from_ints(&[1, 0])))]).unwrap();
        assert_eq!(s, Dual::Vec(VecElem::from_ints(&[0, 3])));
    }
}
