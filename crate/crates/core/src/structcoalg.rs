//! Finite-dimensional coalgebras, comodules, cotrace spaces and characters.
//!
//! The cotrace space C^tr is the equalizer of Δ and flip∘Δ (the dual of the
//! universal trace); for a function algebra k^G it is the space of class
//! functions, which is what makes it the noncommutative Cartan model of the
//! Chern-Weil theory downstream.

use crate::cert::{Certificate, CertificateSet};
use crate::exactlin::{axpy, FieldSpec, Scalar, SparseMat, SparseVec};

use crate::tenalg::{BasedSpace, TensorElem, TensorSpace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoalgebraError {
    #[error("coassociativity fails on basis element {0}")]
    NotCoassociative(usize),
    #[error("counit law fails on basis element {0}")]
    BadCounit(usize),
    #[error("declared grouplike is not grouplike")]
    BadGrouplike,
    #[error("comodule axioms fail at entry ({0}, {1})")]
    BadComodule(usize, usize),
    #[error("table has wrong shape")]
    BadTable,
}

/// A finite-dimensional coalgebra by structure constants.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    space: BasedSpace,
    comult: Vec<TensorElem>,
    counit: SparseVec,
    grouplike: Option<SparseVec>,
    field: FieldSpec,
}

impl Coalgebra {
    pub fn new(
        space: BasedSpace,
        comult: Vec<TensorElem>,
        counit: SparseVec,
        grouplike: Option<SparseVec>,
        field: FieldSpec,
    ) -> Result<Self, CoalgebraError> {
        let c = Coalgebra::new_unchecked(space, comult, counit, grouplike, field);
        let report = c.check();
        if let Some(i) = report.coassoc_failures.first() {
            return Err(CoalgebraError::NotCoassociative(*i));
        }
        if let Some(i) = report.counit_failures.first() {
            return Err(CoalgebraError::BadCounit(*i));
        }
        if !report.grouplike_ok {
            return Err(CoalgebraError::BadGrouplike);
        }
        Ok(c)
    }

    /// Build without validation (for file loading; defects surface in
    /// [`Coalgebra::check`] reports).
    pub fn new_unchecked(
        space: BasedSpace,
        comult: Vec<TensorElem>,
        counit: SparseVec,
        grouplike: Option<SparseVec>,
        field: FieldSpec,
    ) -> Self {
        assert_eq!(comult.len(), space.dim(), "comult table shape");
        Coalgebra {
            space,
            comult,
            counit,
            grouplike,
            field,
        }
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn comult(&self, i: usize) -> &TensorElem {
        &self.comult[i]
    }

    pub fn grouplike(&self) -> Option<&SparseVec> {
        self.grouplike.as_ref()
    }

    /// Δ extended linearly, as an element of C⊗C.
    pub fn comult_of(&self, v: &SparseVec) -> TensorElem {
        let sp = TensorSpace::power(&self.space, 2);
        let mut out = TensorElem::zero(sp);
        for (i, c) in v {
            for (idx, x) in self.comult[*i].iter() {
                out.add_term(&idx, &(c * x));
            }
        }
        out
    }

    pub fn counit_of(&self, v: &SparseVec) -> Scalar {
        let mut s = self.field.zero();
        for (i, c) in v {
            if let Some(e) = self.counit.get(i) {
                s += &(c * e);
            }
        }
        s
    }

    /// Matrix of Δ: C → C⊗C (rows indexed by flattened pairs).
    pub fn comult_matrix(&self) -> SparseMat {
        let d = self.dim();
        let mut m = SparseMat::zero(d * d, d);
        for i in 0..d {
            for (idx, c) in self.comult[i].iter() {
                m.add_to(idx[0] * d + idx[1], i, c);
            }
        }
        m
    }

    /// Matrix of flip∘Δ.
    pub fn flipped_comult_matrix(&self) -> SparseMat {
        let d = self.dim();
        let mut m = SparseMat::zero(d * d, d);
        for i in 0..d {
            for (idx, c) in self.comult[i].iter() {
                m.add_to(idx[1] * d + idx[0], i, c);
            }
        }
        m
    }

    /// Iterated comultiplication Δ^m: C → C^{⊗(m+1)} applied to a vector.
    pub fn iterated_comult(&self, v: &SparseVec, m: usize) -> TensorElem {
        let mut cur = TensorElem::zero(TensorSpace::power(&self.space, 1));
        for (i, c) in v {
            cur.add_term(&[*i], c);
        }
        for step in 0..m {
            let sp = TensorSpace::power(&self.space, step + 2);
            let mut next = TensorElem::zero(sp);
            // expand the last slot
            for (idx, c) in cur.iter() {
                let last = idx[idx.len() - 1];
                for (pair, x) in self.comult[last].iter() {
                    let mut widened = idx.clone();
                    widened.pop();
                    widened.push(pair[0]);
                    widened.push(pair[1]);
                    next.add_term(&widened, &(c * x));
                }
            }
            cur = next;
        }
        cur
    }

    pub fn check(&self) -> CoalgebraReport {
        let d = self.dim();
        let sp3 = TensorSpace::power(&self.space, 3);
        let mut coassoc_failures = Vec::new();
        let mut counit_failures = Vec::new();
        for i in 0..d {
            // (Δ⊗id)Δ vs (id⊗Δ)Δ
            let mut lhs = TensorElem::zero(sp3.clone());
            let mut rhs = TensorElem::zero(sp3.clone());
            for (idx, c) in self.comult[i].iter() {
                for (p, x) in self.comult[idx[0]].iter() {
                    lhs.add_term(&[p[0], p[1], idx[1]], &(c * x));
                }
                for (p, x) in self.comult[idx[1]].iter() {
                    rhs.add_term(&[idx[0], p[0], p[1]], &(c * x));
                }
            }
            if lhs != rhs {
                coassoc_failures.push(i);
            }
            // (ε⊗id)Δ = id = (id⊗ε)Δ
            let mut left = SparseVec::new();
            let mut right = SparseVec::new();
            for (idx, c) in self.comult[i].iter() {
                if let Some(e) = self.counit.get(&idx[0]) {
                    let ce = c * e;
                    axpy(&mut left, &ce, &SparseVec::from([(idx[1], self.field.one())]));
                }
                if let Some(e) = self.counit.get(&idx[1]) {
                    let ce = c * e;
                    axpy(&mut right, &ce, &SparseVec::from([(idx[0], self.field.one())]));
                }
            }
            let ei = SparseVec::from([(i, self.field.one())]);
            if left != ei || right != ei {
                counit_failures.push(i);
            }
        }
        let grouplike_ok = match &self.grouplike {
            None => true,
            Some(e) => {
                let de = self.comult_of(e);
                let mut ee = TensorElem::zero(TensorSpace::power(&self.space, 2));
                for (i, a) in e {
                    for (j, b) in e {
                        ee.add_term(&[*i, *j], &(a * b));
                    }
                }
                de == ee && self.counit_of(e).is_one()
            }
        };
        CoalgebraReport {
            coassoc_failures,
            counit_failures,
            grouplike_ok,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoalgebraReport {
    pub coassoc_failures: Vec<usize>,
    pub counit_failures: Vec<usize>,
    pub grouplike_ok: bool,
}

impl CoalgebraReport {
    pub fn pass(&self) -> bool {
        self.coassoc_failures.is_empty() && self.counit_failures.is_empty() && self.grouplike_ok
    }

    pub fn certificates(&self) -> CertificateSet {
        let mut cs = CertificateSet::new();
        cs.push(Certificate::of(
            "coalgebra.coassociativity",
            self.coassoc_failures.is_empty(),
            format!("first failing basis element {:?}", self.coassoc_failures.first()),
        ));
        cs.push(Certificate::of(
            "coalgebra.counit_laws",
            self.counit_failures.is_empty(),
            format!("first failing basis element {:?}", self.counit_failures.first()),
        ));
        cs.push(Certificate::of(
            "coalgebra.grouplike",
            self.grouplike_ok,
            "Δ(e) ≠ e⊗e or ε(e) ≠ 1",
        ));
        cs
    }
}

/// Re-check a coalgebra read from a file.
pub fn check_coalgebra(c: &Coalgebra) -> CoalgebraReport {
    c.check()
}

/// An element of the cotrace space C^tr = Eq(Δ, flip∘Δ).
#[derive(Debug, Clone, PartialEq)]
pub struct Cotrace {
    pub element: SparseVec,
}

impl Cotrace {
    /// Verify Δ(element) equals its own flip.
    pub fn verify(&self, c: &Coalgebra) -> bool {
        let d = c.comult_of(&self.element);
        let mut flipped = TensorElem::zero(d.space.clone());
        for (idx, x) in d.iter() {
            flipped.add_term(&[idx[1], idx[0]], x);
        }
        d == flipped
    }
}

/// Basis of C^tr, computed as the kernel of (Δ − flip∘Δ).
pub fn cotrace_basis(c: &Coalgebra) -> Vec<Cotrace> {
    let m = c.comult_matrix().sub_mat(&c.flipped_comult_matrix());
    m.kernel_basis()
        .into_iter()
        .map(|element| Cotrace { element })
        .collect()
}

/// A finite-dimensional left C-comodule presented by its coaction matrix:
/// v_i ↦ Σ_j c_{ij} ⊗ v_j.
#[derive(Debug, Clone)]
pub struct Comodule {
    pub dim: usize,
    /// matrix[i][j] = c_{ij} ∈ C.
    pub matrix: Vec<Vec<SparseVec>>,
}

impl Comodule {
    pub fn new(dim: usize, matrix: Vec<Vec<SparseVec>>) -> Result<Self, CoalgebraError> {
        if matrix.len() != dim || matrix.iter().any(|r| r.len() != dim) {
            return Err(CoalgebraError::BadTable);
        }
        Ok(Comodule { dim, matrix })
    }

    /// Check Δ(c_{ik}) = Σ_j c_{ij}⊗c_{jk} and ε(c_{ij}) = δ_{ij}.
    pub fn check(&self, c: &Coalgebra) -> Result<(), CoalgebraError> {
        let sp2 = TensorSpace::power(c.space(), 2);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let lhs = c.comult_of(&self.matrix[i][k]);
                let mut rhs = TensorElem::zero(sp2.clone());
                for j in 0..self.dim {
                    for (a, x) in &self.matrix[i][j] {
                        for (b, y) in &self.matrix[j][k] {
                            rhs.add_term(&[*a, *b], &(x * y));
                        }
                    }
                }
                if lhs != rhs {
                    return Err(CoalgebraError::BadComodule(i, k));
                }
                let e = c.counit_of(&self.matrix[i][k]);
                let expected = if i == k {
                    c.field().one()
                } else {
                    c.field().zero()
                };
                if e != expected {
                    return Err(CoalgebraError::BadComodule(i, k));
                }
            }
        }
        Ok(())
    }

    /// Direct sum of comodules (block-diagonal coaction matrix).
    pub fn direct_sum(&self, other: &Comodule) -> Comodule {
        let dim = self.dim + other.dim;
        let mut matrix = vec![vec![SparseVec::new(); dim]; dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                matrix[i][j] = self.matrix[i][j].clone();
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                matrix[self.dim + i][self.dim + j] = other.matrix[i][j].clone();
            }
        }
        Comodule { dim, matrix }
    }

    /// The rank-one comodule attached to a grouplike element.
    pub fn from_grouplike(g: &SparseVec) -> Comodule {
        Comodule {
            dim: 1,
            matrix: vec![vec![g.clone()]],
        }
    }
}

/// χ(V) = Σ_i c_{ii}; the result is verified to lie in C^tr.
pub fn comodule_character(c: &Coalgebra, v: &Comodule) -> Result<Cotrace, CoalgebraError> {
    v.check(c)?;
    let mut chi = SparseVec::new();
    let one = c.field().one();
    for i in 0..v.dim {
        axpy(&mut chi, &one, &v.matrix[i][i]);
    }
    let t = Cotrace { element: chi };
    if !t.verify(c) {
        // cannot happen for a valid comodule; defensive double-check is the
        // stated invariant
        return Err(CoalgebraError::BadComodule(0, 0));
    }
    Ok(t)
}

/// True iff span{χ(V)} = C^tr, decided by exact rank comparison.
pub fn enough_characters(c: &Coalgebra, vs: &[Comodule]) -> Result<bool, CoalgebraError> {
    let tr = cotrace_basis(c);
    let mut ech = crate::exactlin::Echelon::new(c.dim());
    for v in vs {
        let chi = comodule_character(c, v)?;
        ech.insert_row(chi.element);
    }
    Ok(ech.rank() == tr.len())
}

/// Grouplike search over {−1, 0, 1} coefficient vectors (dim ≤ 8 only);
/// general grouplike enumeration is a variety computation and out of scope.
pub fn find_small_grouplikes(c: &Coalgebra) -> Vec<SparseVec> {
    let d = c.dim();
    assert!(d <= 8, "grouplike search limited to dim ≤ 8");
    let field = c.field();
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; d];
    loop {
        let v: SparseVec = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i, field.integer(*c)))
            .collect();
        if !v.is_empty() && c.counit_of(&v).is_one() {
            let dv = c.comult_of(&v);
            let mut vv = TensorElem::zero(dv.space.clone());
            for (i, a) in &v {
                for (j, b) in &v {
                    vv.add_term(&[*i, *j], &(a * b));
                }
            }
            if dv == vv {
                out.push(v);
            }
        }
        // next ternary vector
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            coeffs[k] += 1;
            if coeffs[k] == 2 {
                coeffs[k] = -1;
                break;
            }
            if coeffs[k] != 0 {
                break;
            }
            k += 1;
        }
        let _ = k;
    }
}
