//! Based vector spaces, tensor powers and sparse multilinear elements.
//!
//! Multi-indices into a tensor power are encoded as a single machine word via
//! a mixed-radix positional code whenever the total dimension fits in a
//! `u64`; only then do the associative tables stay fast for spaces like
//! M^{⊗6} with dim M = 8. Larger products fall back to explicit index lists.
//! Tensor elements are always sparse; nothing densifies implicitly.

use crate::exactlin::{Scalar, SparseMat, SparseVec};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TenalgError {
    #[error("factor mismatch: expected {expected}, found {found} at slot {slot}")]
    FactorMismatch {
        slot: usize,
        expected: String,
        found: String,
    },
    #[error("arity mismatch: {0}")]
    Arity(String),
}

/// A finite-dimensional vector space with a fixed printable basis.
#[derive(Clone, PartialEq, Eq)]
pub enum BasedSpace {
    /// Explicitly named basis vectors (names unique).
    Named(Arc<Vec<String>>),
    /// Anonymous basis `prefix0, prefix1, ...`; used for large derived spaces.
    Anon { prefix: Arc<str>, dim: usize },
}

impl BasedSpace {
    pub fn named<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            assert!(seen.insert(l.clone()), "duplicate basis label {l}");
        }
        BasedSpace::Named(Arc::new(labels))
    }

    pub fn anon(prefix: &str, dim: usize) -> Self {
        BasedSpace::Anon {
            prefix: Arc::from(prefix),
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BasedSpace::Named(l) => l.len(),
            BasedSpace::Anon { dim, .. } => *dim,
        }
    }

    pub fn label(&self, i: usize) -> String {
        assert!(i < self.dim(), "basis index out of range");
        match self {
            BasedSpace::Named(l) => l[i].clone(),
            BasedSpace::Anon { prefix, .. } => format!("{prefix}{i}"),
        }
    }
}

impl fmt::Debug for BasedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasedSpace(dim={})", self.dim())
    }
}

/// Multi-index key; `Packed` keys order exactly like the index lists they
/// encode (row-major strides), so map iteration is lexicographic either way.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Key {
    Packed(u64),
    Wide(Box<[u32]>),
}

/// Mixed-radix codec for the multi-indices of a factor list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCodec {
    dims: Vec<usize>,
    /// Row-major strides when the product fits in u64.
    strides: Option<Vec<u64>>,
    total: Option<usize>,
}

impl IndexCodec {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut total: u128 = 1;
        for d in &dims {
            total *= *d as u128;
        }
        let strides = if total <= u64::MAX as u128 {
            let mut s = vec![1u64; dims.len()];
            for k in (0..dims.len().saturating_sub(1)).rev() {
                s[k] = s[k + 1] * dims[k + 1] as u64;
            }
            Some(s)
        } else {
            None
        };
        let total = usize::try_from(total).ok();
        IndexCodec {
            dims,
            strides,
            total,
        }
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
            .expect("tensor power dimension exceeds the addressable range")
    }

    pub fn encode(&self, idx: &[usize]) -> Key {
        debug_assert_eq!(idx.len(), self.dims.len());
        debug_assert!(idx.iter().zip(&self.dims).all(|(i, d)| i < d));
        match &self.strides {
            Some(s) => Key::Packed(idx.iter().zip(s).map(|(i, st)| *i as u64 * st).sum()),
            None => Key::Wide(idx.iter().map(|i| *i as u32).collect()),
        }
    }

    pub fn decode(&self, key: &Key) -> Vec<usize> {
        match (key, &self.strides) {
            (Key::Packed(mut w), Some(s)) => {
                let mut idx = Vec::with_capacity(self.dims.len());
                for st in s {
                    idx.push((w / st) as usize);
                    w %= st;
                }
                idx
            }
            (Key::Wide(v), _) => v.iter().map(|i| *i as usize).collect(),
            _ => panic!("key kind does not match codec"),
        }
    }

    /// Flat index in `0..total_dim()`, row-major.
    pub fn flatten(&self, key: &Key) -> usize {
        match key {
            Key::Packed(w) => *w as usize,
            Key::Wide(v) => {
                let mut acc = 0usize;
                for (i, d) in v.iter().zip(&self.dims) {
                    acc = acc * d + *i as usize;
                }
                acc
            }
        }
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            idx[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        idx
    }
}

/// The tensor product of a list of based spaces, with its index codec.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub factors: Vec<BasedSpace>,
    pub codec: IndexCodec,
}

impl TensorSpace {
    pub fn new(factors: Vec<BasedSpace>) -> Arc<Self> {
        let codec = IndexCodec::new(factors.iter().map(|f| f.dim()).collect());
        Arc::new(TensorSpace { factors, codec })
    }

    pub fn power(space: &BasedSpace, n: usize) -> Arc<Self> {
        TensorSpace::new(vec![space.clone(); n])
    }

    pub fn dim(&self) -> usize {
        self.codec.total_dim()
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }
}

/// A sparse element of a tensor product; no zero coefficient is stored.
#[derive(Clone)]
pub struct TensorElem {
    pub space: Arc<TensorSpace>,
    coeffs: std::collections::BTreeMap<Key, Scalar>,
}

impl TensorElem {
    pub fn zero(space: Arc<TensorSpace>) -> Self {
        TensorElem {
            space,
            coeffs: Default::default(),
        }
    }

    pub fn term(space: Arc<TensorSpace>, idx: &[usize], c: Scalar) -> Self {
        let mut t = TensorElem::zero(space);
        t.add_term(idx, &c);
        t
    }

    pub fn add_term(&mut self, idx: &[usize], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let key = self.space.codec.encode(idx);
        match self.coeffs.get_mut(&key) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.coeffs.remove(&key);
                }
            }
            None => {
                self.coeffs.insert(key, c.clone());
            }
        }
    }

    pub fn add_key(&mut self, key: Key, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&key) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.coeffs.remove(&key);
                }
            }
            None => {
                self.coeffs.insert(key, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.coeffs
            .iter()
            .map(|(k, c)| (self.space.codec.decode(k), c))
    }

    pub fn coeff(&self, idx: &[usize]) -> Option<&Scalar> {
        self.coeffs.get(&self.space.codec.encode(idx))
    }

    pub fn add(&self, other: &TensorElem) -> TensorElem {
        assert_eq!(self.space.codec, other.space.codec, "space mismatch");
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_key(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &TensorElem) -> TensorElem {
        assert_eq!(self.space.codec, other.space.codec, "space mismatch");
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_key(k.clone(), &(-c));
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorElem {
        let mut out = TensorElem::zero(self.space.clone());
        if c.is_zero() {
            return out;
        }
        for (k, x) in &self.coeffs {
            out.coeffs.insert(k.clone(), c * x);
        }
        out
    }

    /// Flatten to a sparse column vector over `0..space.dim()`.
    pub fn to_flat(&self) -> SparseVec {
        self.coeffs
            .iter()
            .map(|(k, c)| (self.space.codec.flatten(k), c.clone()))
            .collect()
    }

    pub fn from_flat(space: Arc<TensorSpace>, v: &SparseVec) -> Self {
        let mut t = TensorElem::zero(space);
        for (flat, c) in v {
            let idx = t.space.codec.unflatten(*flat);
            t.add_term(&idx, c);
        }
        t
    }

    /// Tensor product: concatenates the factor lists.
    pub fn tensor(&self, other: &TensorElem) -> TensorElem {
        let mut factors = self.space.factors.clone();
        factors.extend(other.space.factors.clone());
        let space = TensorSpace::new(factors);
        let mut out = TensorElem::zero(space);
        let mut idx = Vec::new();
        for (ia, ca) in self.iter() {
            for (ib, cb) in other.iter() {
                idx.clear();
                idx.extend_from_slice(&ia);
                idx.extend_from_slice(&ib);
                out.add_term(&idx, &(ca * cb));
            }
        }
        out
    }

    /// Cyclically rotate the factor slots right by one (last slot to front).
    pub fn rotate_right(&self) -> TensorElem {
        let n = self.space.arity();
        if n <= 1 {
            return self.clone();
        }
        let mut factors = self.space.factors.clone();
        let last = factors.pop().unwrap();
        factors.insert(0, last);
        let space = TensorSpace::new(factors);
        let mut out = TensorElem::zero(space);
        for (idx, c) in self.iter() {
            let mut r = Vec::with_capacity(n);
            r.push(idx[n - 1]);
            r.extend_from_slice(&idx[..n - 1]);
            out.add_term(&r, c);
        }
        out
    }

    /// Apply one linear map per slot: `(f_0 ⊗ … ⊗ f_{k-1})(self)`, with sparse
    /// accumulation slot by slot. `maps[s]` must have `factors[s].dim()`
    /// columns; the target factors are supplied by the caller.
    pub fn apply_slotwise(
        &self,
        maps: &[&SparseMat],
        targets: Vec<BasedSpace>,
    ) -> Result<TensorElem, TenalgError> {
        if maps.len() != self.space.arity() || targets.len() != maps.len() {
            return Err(TenalgError::Arity(format!(
                "expected {} maps/targets",
                self.space.arity()
            )));
        }
        for (s, m) in maps.iter().enumerate() {
            if m.cols() != self.space.factors[s].dim() {
                return Err(TenalgError::FactorMismatch {
                    slot: s,
                    expected: format!("{} columns", self.space.factors[s].dim()),
                    found: format!("{} columns", m.cols()),
                });
            }
            if m.rows() != targets[s].dim() {
                return Err(TenalgError::FactorMismatch {
                    slot: s,
                    expected: format!("{} rows", targets[s].dim()),
                    found: format!("{} rows", m.rows()),
                });
            }
        }
        let space = TensorSpace::new(targets);
        let mut out = TensorElem::zero(space);
        let k = maps.len();
        // precompute columns on demand; each input term expands to the product
        // of the images of its slots
        for (idx, c) in self.iter() {
            let cols: Vec<SparseVec> = (0..k).map(|s| maps[s].column(idx[s])).collect();
            if cols.iter().any(|col| col.is_empty()) {
                continue;
            }
            let mut acc: Vec<(Vec<usize>, Scalar)> = vec![(Vec::with_capacity(k), c.clone())];
            for col in &cols {
                let mut next = Vec::with_capacity(acc.len() * col.len());
                for (prefix, coef) in &acc {
                    for (i, v) in col {
                        let mut p = prefix.clone();
                        p.push(*i);
                        next.push((p, coef * v));
                    }
                }
                acc = next;
            }
            for (full, coef) in acc {
                out.add_term(&full, &coef);
            }
        }
        Ok(out)
    }

    /// `f^{⊗n}` applied to an element of `V^{⊗n}`.
    pub fn apply_tensor_power(
        &self,
        f: &SparseMat,
        target: &BasedSpace,
    ) -> Result<TensorElem, TenalgError> {
        let n = self.space.arity();
        let maps: Vec<&SparseMat> = vec![f; n];
        self.apply_slotwise(&maps, vec![target.clone(); n])
    }
}

impl fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElem({} terms)", self.coeffs.len())
    }
}

impl PartialEq for TensorElem {
    fn eq(&self, other: &Self) -> bool {
        self.space.codec == other.space.codec && self.coeffs == other.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;

    fn q(n: i64) -> Scalar {
        FieldSpec::Q.integer(n)
    }

    #[test]
    fn codec_roundtrip_and_order() {
        let c = IndexCodec::new(vec![3, 4, 5]);
        assert_eq!(c.total_dim(), 60);
        let k = c.encode(&[2, 1, 3]);
        assert_eq!(c.decode(&k), vec![2, 1, 3]);
        assert_eq!(c.flatten(&k), 2 * 20 + 5 + 3);
        assert_eq!(c.unflatten(c.flatten(&k)), vec![2, 1, 3]);
        // packed order is lexicographic
        assert!(c.encode(&[1, 3, 4]) < c.encode(&[2, 0, 0]));
    }

    #[test]
    fn wide_codec_when_word_overflows() {
        // a genuinely wide case: 2^70 combinations
        let dims = vec![1 << 14; 5];
        let c = IndexCodec::new(dims);
        match c.encode(&[1, 2, 3, 4, 5]) {
            Key::Wide(_) => {}
            _ => panic!("expected wide key"),
        }
        assert_eq!(c.decode(&c.encode(&[9, 8, 7, 6, 5])), vec![9, 8, 7, 6, 5]);
    }

    #[test]
    fn apply_identity_and_zero() {
        let v = BasedSpace::named(["a", "b"]);
        let sp = TensorSpace::power(&v, 2);
        let mut x = TensorElem::zero(sp);
        x.add_term(&[0, 1], &q(2));
        x.add_term(&[1, 1], &q(-1));
        let id = SparseMat::identity(2, q(1));
        assert_eq!(x.apply_tensor_power(&id, &v).unwrap(), x);
        let z = SparseMat::zero(2, 2);
        assert!(x.apply_tensor_power(&z, &v).unwrap().is_zero());
    }

    #[test]
    fn tensor_power_functorial() {
        // (g∘f)^{⊗n} = g^{⊗n} ∘ f^{⊗n} on a random-ish element
        let v = BasedSpace::named(["a", "b", "c"]);
        let mut f = SparseMat::zero(3, 3);
        f.set(0, 1, q(2));
        f.set(1, 0, q(1));
        f.set(2, 2, q(-3));
        f.set(0, 2, q(5));
        let mut g = SparseMat::zero(3, 3);
        g.set(0, 0, q(1));
        g.set(1, 2, q(7));
        g.set(2, 1, q(-2));
        let sp = TensorSpace::power(&v, 3);
        let mut x = TensorElem::zero(sp);
        x.add_term(&[0, 1, 2], &q(1));
        x.add_term(&[2, 2, 0], &q(4));
        x.add_term(&[1, 0, 1], &q(-2));
        let gf = g.mul_mat(&f);
        let lhs = x.apply_tensor_power(&gf, &v).unwrap();
        let rhs = x
            .apply_tensor_power(&f, &v)
            .unwrap()
            .apply_tensor_power(&g, &v)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn counit_tensor_power_contracts_to_scalar() {
        // ε of k^{Z/2} as a map to k, applied slotwise to δ_1⊗δ_1: ε(δ_1) = 1
        // on the identity component, so the image is the scalar 1 in k^{⊗2}
        let v = BasedSpace::named(["d0", "d1"]);
        let k = BasedSpace::named(["1"]);
        let mut eps = SparseMat::zero(1, 2);
        eps.set(0, 0, q(1));
        let sp = TensorSpace::power(&v, 2);
        let x = TensorElem::term(sp, &[0, 0], q(1));
        let img = x.apply_tensor_power(&eps, &k).unwrap();
        assert_eq!(img.coeff(&[0, 0]), Some(&q(1)));
        assert_eq!(img.num_terms(), 1);
    }

    #[test]
    fn rotate_right_moves_last_slot_first() {
        let v = BasedSpace::named(["a", "b"]);
        let sp = TensorSpace::power(&v, 3);
        let mut x = TensorElem::zero(sp);
        x.add_term(&[0, 1, 1], &q(1));
        let r = x.rotate_right();
        assert_eq!(r.coeff(&[1, 0, 1]), Some(&q(1)));
    }

    #[test]
    fn factor_mismatch_is_an_error() {
        let v = BasedSpace::named(["a", "b"]);
        let w = BasedSpace::named(["x", "y", "z"]);
        let sp = TensorSpace::power(&v, 2);
        let mut x = TensorElem::zero(sp);
        x.add_term(&[0, 0], &q(1));
        let f = SparseMat::identity(3, q(1));
        assert!(x.apply_tensor_power(&f, &w).is_err());
    }
}
