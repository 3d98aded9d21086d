//! Sparse matrices over an exact field, with deterministic elimination.
//!
//! Entries are kept in a `BTreeMap` keyed `(row, col)` so iteration order is
//! canonical. Elimination processes rows in increasing index and pivots on the
//! leading (smallest-column) entry of each reduced row; the resulting echelon
//! form, kernels and solutions are therefore identical across runs.

use super::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Sparse column vector: index → nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// Add `c * v` into `acc`, dropping entries that cancel to zero.
pub fn axpy(acc: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (i, x) in v {
        let cx = c * x;
        match acc.get_mut(i) {
            Some(e) => {
                *e += &cx;
                if e.is_zero() {
                    acc.remove(i);
                }
            }
            None => {
                if !cx.is_zero() {
                    acc.insert(*i, cx);
                }
            }
        }
    }
}

/// Scale a sparse vector by a nonzero scalar.
pub fn scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(i, x)| (*i, c * x)).collect()
}

/// A sparse matrix with exact entries; no stored entry is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, one: Scalar) -> Self {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, one.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        match self.entries.get_mut(&(i, j)) {
            Some(e) => {
                *e += v;
                if e.is_zero() {
                    self.entries.remove(&(i, j));
                }
            }
            None => {
                if !v.is_zero() {
                    self.entries.insert((i, j), v.clone());
                }
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Scalar> {
        self.entries.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|((i, j), v)| (*i, *j, v))
    }

    /// Build from columns given as sparse vectors.
    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        let ncols = cols.len();
        let mut m = SparseMat::zero(rows, ncols);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> SparseVec {
        self.entries
            .iter()
            .filter(|((_, jj), _)| *jj == j)
            .map(|((i, _), v)| (*i, v.clone()))
            .collect()
    }

    /// Rows as sparse vectors (row-major walk of the entry map).
    pub fn row_vecs(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.rows];
        for ((i, j), v) in &self.entries {
            out[*i].insert(*j, v.clone());
        }
        out
    }

    pub fn transpose(&self) -> SparseMat {
        let mut m = SparseMat::zero(self.cols, self.rows);
        for ((i, j), v) in &self.entries {
            m.entries.insert((*j, *i), v.clone());
        }
        m
    }

    /// Matrix-vector product (vector as sparse column). One pass over the
    /// stored entries, so cost is O(nnz) regardless of the vector's support.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        debug_assert!(v.keys().all(|j| *j < self.cols), "vector out of bounds");
        let mut out = SparseVec::new();
        for ((i, j), a) in &self.entries {
            if let Some(x) = v.get(j) {
                let ax = a * x;
                match out.get_mut(i) {
                    Some(e) => {
                        *e += &ax;
                        if e.is_zero() {
                            out.remove(i);
                        }
                    }
                    None => {
                        if !ax.is_zero() {
                            out.insert(*i, ax);
                        }
                    }
                }
            }
        }
        out
    }

    /// `self * rhs` (composition of linear maps: self after rhs).
    pub fn mul_mat(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        // group lhs entries by column for cache-friendly access
        let mut by_col: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((i, j), v) in &self.entries {
            by_col.entry(*j).or_default().push((*i, v));
        }
        let mut out = SparseMat::zero(self.rows, rhs.cols);
        for ((k, j), b) in &rhs.entries {
            if let Some(col) = by_col.get(k) {
                for (i, a) in col {
                    let ab = *a * b;
                    out.add_to(*i, *j, &ab);
                }
            }
        }
        out
    }

    pub fn add_mat(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for ((i, j), v) in &rhs.entries {
            out.add_to(*i, *j, v);
        }
        out
    }

    pub fn sub_mat(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for ((i, j), v) in &rhs.entries {
            out.add_to(*i, *j, &(-v));
        }
        out
    }

    pub fn neg_mat(&self) -> SparseMat {
        let mut out = SparseMat::zero(self.rows, self.cols);
        for ((i, j), v) in &self.entries {
            out.entries.insert((*i, *j), -v);
        }
        out
    }

    pub fn scale_mat(&self, c: &Scalar) -> SparseMat {
        let mut out = SparseMat::zero(self.rows, self.cols);
        if c.is_zero() {
            return out;
        }
        for ((i, j), v) in &self.entries {
            out.entries.insert((*i, *j), c * v);
        }
        out
    }

    /// Horizontal stack `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, rhs.rows);
        let mut out = SparseMat::zero(self.rows, self.cols + rhs.cols);
        for ((i, j), v) in &self.entries {
            out.entries.insert((*i, *j), v.clone());
        }
        for ((i, j), v) in &rhs.entries {
            out.entries.insert((*i, *j + self.cols), v.clone());
        }
        out
    }

    /// Copy `block` into `self` with its (0,0) at `(i0, j0)`.
    pub fn insert_block(&mut self, i0: usize, j0: usize, block: &SparseMat) {
        for ((i, j), v) in &block.entries {
            self.set(i0 + i, j0 + j, v.clone());
        }
    }

    /// Reduced row echelon form with deterministic pivoting.
    pub fn echelon(&self) -> Echelon {
        let mut ech = Echelon {
            cols: self.cols,
            rows: Vec::new(),
        };
        for row in self.row_vecs() {
            ech.insert_row(row);
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the right kernel `{v : self·v = 0}`, echelon-structured:
    /// one vector per free column, listed in increasing column order.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        self.echelon().kernel_basis()
    }

    /// Exact solution set of `self·x = rhs`, if nonempty.
    pub fn solve_affine(&self, rhs: &SparseVec) -> Option<AffineSolution> {
        for i in rhs.keys() {
            assert!(*i < self.rows, "rhs length mismatch");
        }
        // eliminate [A | rhs]; a pivot in the rhs column means inconsistency
        let mut ech = Echelon {
            cols: self.cols + 1,
            rows: Vec::new(),
        };
        let mut rows = self.row_vecs();
        for (i, v) in rhs {
            rows[*i].insert(self.cols, v.clone());
        }
        for row in rows {
            ech.insert_row(row);
        }
        if ech.rows.iter().any(|(p, _)| *p == self.cols) {
            return None;
        }
        // particular solution: free variables zero, pivots read off the rhs col
        let mut particular = SparseVec::new();
        for (p, row) in &ech.rows {
            if let Some(v) = row.get(&self.cols) {
                particular.insert(*p, v.clone());
            }
        }
        let kernel = Echelon {
            cols: self.cols,
            rows: ech
                .rows
                .iter()
                .map(|(p, r)| {
                    let mut r = r.clone();
                    r.remove(&self.cols);
                    (*p, r)
                })
                .collect(),
        }
        .kernel_basis();
        Some(AffineSolution { particular, kernel })
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self, one: &Scalar) -> Option<SparseMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&SparseMat::identity(n, one.clone()));
        let ech = aug.echelon();
        if ech.rank() != n || ech.rows.iter().any(|(p, _)| *p >= n) {
            return None;
        }
        let mut inv = SparseMat::zero(n, n);
        for (p, row) in &ech.rows {
            for (j, v) in row.range(n..2 * n) {
                inv.set(*p, j - n, v.clone());
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SparseMat({}x{}, nnz={})",
            self.rows,
            self.cols,
            self.nnz()
        )
    }
}

/// One coherent solution set of an affine system.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub particular: SparseVec,
    pub kernel: Vec<SparseVec>,
}

/// Reduced row echelon form: rows keyed by pivot column, fully reduced.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    /// (pivot column, row) sorted by pivot column; pivot entry is 1 and is the
    /// unique nonzero of its column among stored rows.
    rows: Vec<(usize, SparseVec)>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// The reduced rows (pivot column, row vector), spanning the row space.
    pub fn rows_iter(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    /// Reduce `row` against the stored rows; if a nonzero remainder survives,
    /// normalize it, install it as a new pivot row and back-eliminate.
    /// Returns the new pivot column if the row increased the rank.
    pub fn insert_row(&mut self, mut row: SparseVec) -> Option<usize> {
        self.reduce_in_place(&mut row);
        let (&p, lead) = match row.iter().next() {
            Some((p, v)) => (p, v.clone()),
            None => return None,
        };
        let inv = lead.inv();
        let row: SparseVec = row.iter().map(|(j, v)| (*j, &inv * v)).collect();
        // back-eliminate column p from existing rows
        for (_, r) in self.rows.iter_mut() {
            if let Some(c) = r.get(&p).cloned() {
                let neg = -&c;
                axpy(r, &neg, &row);
            }
        }
        let pos = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(pos, (p, row));
        Some(p)
    }

    /// Eliminate all pivot coordinates from `v` (i.e. reduce `v` mod the row
    /// space).
    pub fn reduce_in_place(&self, v: &mut SparseVec) {
        for (p, r) in &self.rows {
            if let Some(c) = v.get(p).cloned() {
                let neg = -&c;
                axpy(v, &neg, r);
            }
        }
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let pivots: std::collections::BTreeSet<usize> = self.pivot_cols().into_iter().collect();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut v = SparseVec::new();
            for (p, r) in &self.rows {
                if let Some(c) = r.get(&f) {
                    v.insert(*p, -c);
                }
            }
            v.insert(f, one_like(self, &v));
            basis.push(v);
        }
        basis
    }
}

fn one_like(ech: &Echelon, v: &SparseVec) -> Scalar {
    // field of any stored scalar, defaulting to Q for all-zero data
    v.values()
        .next()
        .map(|s| s.field())
        .or_else(|| {
            ech.rows
                .iter()
                .flat_map(|(_, r)| r.values())
                .next()
                .map(|s| s.field())
        })
        .unwrap_or(super::FieldSpec::Q)
        .one()
}

/// Row space of a set of vectors, used as a subspace with membership tests
/// and canonical (echelon-reduced) representatives for the quotient.
pub type Subspace = Echelon;

impl Subspace {
    pub fn from_vectors(dim: usize, vecs: impl IntoIterator<Item = SparseVec>) -> Subspace {
        let mut s = Echelon::new(dim);
        for v in vecs {
            s.insert_row(v);
        }
        s
    }

    /// Coordinates of `v + subspace` with respect to the free (non-pivot)
    /// coordinates, which form a basis of the quotient.
    pub fn quotient_coords(&self, v: &SparseVec) -> SparseVec {
        let r = self.reduce(v);
        let pivots: std::collections::BTreeSet<usize> = self.pivot_cols().into_iter().collect();
        let mut free_index = BTreeMap::new();
        let mut k = 0;
        for j in 0..self.cols {
            if !pivots.contains(&j) {
                free_index.insert(j, k);
                k += 1;
            }
        }
        r.into_iter().map(|(j, c)| (free_index[&j], c)).collect()
    }

    pub fn quotient_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// The canonical section of the quotient map: quotient coordinates back to
    /// the echelon representative in the ambient space.
    pub fn quotient_section(&self, q: &SparseVec) -> SparseVec {
        let pivots: std::collections::BTreeSet<usize> = self.pivot_cols().into_iter().collect();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut v = SparseVec::new();
        for (k, c) in q {
            v.insert(free[*k], c.clone());
        }
        // representative must be reduced: eliminating pivots may reintroduce
        // nothing since free coordinates never meet pivot rows' pivot cols
        self.reduce(&v)
    }
}
