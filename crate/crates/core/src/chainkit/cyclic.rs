//! The cyclic bicomplex machinery: faces, b, b′, t, N, total complexes of the
//! sub-bicomplexes, the bar contraction, Connes' periodicity quotient and
//! homologous-chain witness search.
//!
//! Sign conventions (pinned by the d² = 0 and column-compatibility tests):
//!
//! ```text
//!      b │        -b′ │         b │        -b′ │
//!   A⊗³ ◄── 1-t ── A⊗³ ◄── N ── A⊗³ ◄── 1-t ── A⊗³   ...
//!      b │        -b′ │         b │        -b′ │
//!   A⊗² ◄── 1-t ── A⊗² ◄── N ── A⊗² ◄── 1-t ── A⊗²   ...
//!      b │        -b′ │         b │        -b′ │
//!   A   ◄── 1-t ── A   ◄── N ── A   ◄── 1-t ── A     ...
//! ```
//!
//! t carries the sign (−1)ⁿ, N = Σ tᵏ, b includes the wrap-around face, b′
//! omits it. Columns alternate b and −b′, rows alternate 1−t and N.

use super::complex::{ChainComplex, ChainMap, Homotopy};
use crate::cert::{Certificate, CertificateSet};
use crate::exactlin::{SparseMat, SparseVec};
use crate::par;
use crate::structalg::Algebra;
use crate::tenalg::{BasedSpace, TensorElem, TensorSpace};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CyclicError {
    #[error("algebra has no left unit")]
    NoLeftUnit,
    #[error("total degree {0} is below 2, cannot apply S")]
    DegreeTooLow(usize),
    #[error("chain component in column {0} not present in this mode")]
    BadColumn(usize),
    #[error("input is not a cycle (degree {0})")]
    NotACycle(usize),
}

/// The tensor power A^{⊗arity} as a tensor space.
pub fn cyclic_word_space(a: &Algebra, arity: usize) -> Arc<TensorSpace> {
    TensorSpace::power(a.space(), arity)
}

fn word_dim(a: &Algebra, arity: usize) -> usize {
    a.dim().pow(arity as u32)
}

/// Face d_i on A^{⊗(m+1)} → A^{⊗m}. For i < m multiply slots (i, i+1); the
/// wrap-around face d_m multiplies the last slot into the first.
pub fn face_matrix(a: &Algebra, m: usize, i: usize) -> SparseMat {
    assert!(m >= 1 && i <= m);
    let src = cyclic_word_space(a, m + 1);
    let dst = cyclic_word_space(a, m);
    let cols = par::map_indexed(src.dim(), |flat| {
        let w = src.codec.unflatten(flat);
        let mut out = SparseVec::new();
        if i < m {
            let prod = a.mul_basis(w[i], w[i + 1]);
            let mut img = w.clone();
            img.remove(i + 1);
            for (r, c) in prod {
                img[i] = *r;
                let f = dst.codec.flatten(&dst.codec.encode(&img));
                merge(&mut out, f, c.clone());
            }
        } else {
            let prod = a.mul_basis(w[m], w[0]);
            let mut img: Vec<usize> = w[..m].to_vec();
            for (r, c) in prod {
                img[0] = *r;
                let f = dst.codec.flatten(&dst.codec.encode(&img));
                merge(&mut out, f, c.clone());
            }
        }
        out
    });
    SparseMat::from_columns(dst.dim(), cols)
}

fn merge(v: &mut SparseVec, k: usize, c: crate::exactlin::Scalar) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(&k) {
        Some(e) => {
            *e += &c;
            if e.is_zero() {
                v.remove(&k);
            }
        }
        None => {
            v.insert(k, c);
        }
    }
}

fn boundary(a: &Algebra, m: usize, with_wraparound: bool) -> SparseMat {
    assert!(m >= 1);
    let src = cyclic_word_space(a, m + 1);
    let dst_dim = word_dim(a, m);
    let dst_codec = cyclic_word_space(a, m);
    let cols = par::map_indexed(src.dim(), |flat| {
        let w = src.codec.unflatten(flat);
        let mut out = SparseVec::new();
        let top = if with_wraparound { m } else { m - 1 };
        for i in 0..=top {
            let neg = i % 2 == 1;
            if i < m {
                let prod = a.mul_basis(w[i], w[i + 1]);
                let mut img = w.clone();
                img.remove(i + 1);
                for (r, c) in prod {
                    img[i] = *r;
                    let f = dst_codec.codec.flatten(&dst_codec.codec.encode(&img));
                    merge(&mut out, f, if neg { -c } else { c.clone() });
                }
            } else {
                let prod = a.mul_basis(w[m], w[0]);
                let mut img: Vec<usize> = w[..m].to_vec();
                for (r, c) in prod {
                    img[0] = *r;
                    let f = dst_codec.codec.flatten(&dst_codec.codec.encode(&img));
                    merge(&mut out, f, if neg { -c } else { c.clone() });
                }
            }
        }
        out
    });
    SparseMat::from_columns(dst_dim, cols)
}

/// Hochschild boundary b = Σ (−1)^i d_i including the wrap-around face.
pub fn boundary_b(a: &Algebra, m: usize) -> SparseMat {
    boundary(a, m, true)
}

/// b applied to one basis word, as a sparse vector over flat word indices of
/// arity `word.len() − 1`. Lets certificate sweeps over huge tensor powers
/// avoid materializing the boundary matrix.
pub fn b_of_word(a: &Algebra, word: &[usize], with_wraparound: bool) -> SparseVec {
    let m = word.len() - 1;
    assert!(m >= 1);
    let dst = cyclic_word_space(a, m);
    let mut out = SparseVec::new();
    let top = if with_wraparound { m } else { m - 1 };
    for i in 0..=top {
        let neg = i % 2 == 1;
        if i < m {
            let prod = a.mul_basis(word[i], word[i + 1]);
            let mut img = word.to_vec();
            img.remove(i + 1);
            for (r, c) in prod {
                img[i] = *r;
                let f = dst.codec.flatten(&dst.codec.encode(&img));
                merge(&mut out, f, if neg { -c } else { c.clone() });
            }
        } else {
            let prod = a.mul_basis(word[m], word[0]);
            let mut img: Vec<usize> = word[..m].to_vec();
            for (r, c) in prod {
                img[0] = *r;
                let f = dst.codec.flatten(&dst.codec.encode(&img));
                merge(&mut out, f, if neg { -c } else { c.clone() });
            }
        }
    }
    out
}

/// Bar boundary b′ = Σ (−1)^i d_i omitting the wrap-around face.
pub fn boundary_bprime(a: &Algebra, m: usize) -> SparseMat {
    boundary(a, m, false)
}

/// b (or b′) applied to a sparse chain, term by term.
pub fn apply_b_chain(a: &Algebra, x: &TensorElem, with_wraparound: bool) -> TensorElem {
    let m = x.space.arity() - 1;
    assert!(m >= 1);
    let dst = cyclic_word_space(a, m);
    let mut out = TensorElem::zero(dst.clone());
    for (w, c) in x.iter() {
        for (f, v) in b_of_word(a, &w, with_wraparound) {
            let idx = dst.codec.unflatten(f);
            out.add_term(&idx, &(c * &v));
        }
    }
    out
}

/// (1 − t) applied to a sparse chain (t carries the sign (−1)^m).
pub fn apply_one_minus_t(a: &Algebra, x: &TensorElem) -> TensorElem {
    let m = x.space.arity() - 1;
    let sign = if m % 2 == 1 {
        -&a.field().one()
    } else {
        a.field().one()
    };
    x.sub(&x.rotate_right().scale(&sign))
}

/// N = Σ t^k applied to a sparse chain.
pub fn apply_norm_chain(a: &Algebra, x: &TensorElem) -> TensorElem {
    let m = x.space.arity() - 1;
    let step = if m % 2 == 1 {
        -&a.field().one()
    } else {
        a.field().one()
    };
    let mut out = TensorElem::zero(x.space.clone());
    let mut cur = x.clone();
    let mut sign = a.field().one();
    for _ in 0..=m {
        out = out.add(&cur.scale(&sign));
        cur = cur.rotate_right();
        sign = &sign * &step;
    }
    out
}

/// The total differential of the full cyclic bicomplex applied to one chain,
/// without materializing any operator matrix.
pub fn total_boundary(a: &Algebra, x: &CyclicChain) -> CyclicChain {
    let deg = x.total_degree;
    assert!(deg >= 1, "no boundary out of degree 0");
    let mut out = CyclicChain::new(deg - 1);
    let mut acc: BTreeMap<usize, TensorElem> = BTreeMap::new();
    let mut add = |m: usize, t: TensorElem| {
        if t.is_zero() {
            return;
        }
        match acc.get_mut(&m) {
            Some(e) => *e = e.add(&t),
            None => {
                acc.insert(m, t);
            }
        }
    };
    for (m, comp) in &x.components {
        let col = deg - m;
        // vertical: b on even columns, −b′ on odd
        if *m >= 1 {
            let v = if col.is_multiple_of(2) {
                apply_b_chain(a, comp, true)
            } else {
                apply_b_chain(a, comp, false).scale(&-&a.field().one())
            };
            add(m - 1, v);
        }
        // horizontal: (1−t) out of odd columns, N out of even columns ≥ 2
        if col >= 1 {
            let h = if col % 2 == 1 {
                apply_one_minus_t(a, comp)
            } else {
                apply_norm_chain(a, comp)
            };
            add(*m, h);
        }
    }
    for (m, t) in acc {
        out.set_component(m, t);
    }
    out
}

/// Signed cyclic permutation t(a_0⊗…⊗a_m) = (−1)^m a_m⊗a_0⊗…⊗a_{m−1}.
pub fn cyclic_t(a: &Algebra, m: usize) -> SparseMat {
    let sp = cyclic_word_space(a, m + 1);
    let sign = if m % 2 == 1 {
        -&a.field().one()
    } else {
        a.field().one()
    };
    let cols = par::map_indexed(sp.dim(), |flat| {
        let w = sp.codec.unflatten(flat);
        let mut img = Vec::with_capacity(w.len());
        img.push(w[m]);
        img.extend_from_slice(&w[..m]);
        let f = sp.codec.flatten(&sp.codec.encode(&img));
        SparseVec::from([(f, sign.clone())])
    });
    SparseMat::from_columns(sp.dim(), cols)
}

/// Norm N = Σ_{k=0}^{m} t^k on A^{⊗(m+1)}.
pub fn norm_n(a: &Algebra, m: usize) -> SparseMat {
    let sp = cyclic_word_space(a, m + 1);
    let one = a.field().one();
    let cols = par::map_indexed(sp.dim(), |flat| {
        let mut out = SparseVec::new();
        let mut w = sp.codec.unflatten(flat);
        let mut sign = one.clone();
        let step = if m % 2 == 1 { -&one } else { one.clone() };
        for _ in 0..=m {
            let f = sp.codec.flatten(&sp.codec.encode(&w));
            merge(&mut out, f, sign.clone());
            w.rotate_right(1);
            sign = &sign * &step;
        }
        out
    });
    SparseMat::from_columns(sp.dim(), cols)
}

/// The four standard operators on A^{⊗(n+1)}.
#[derive(Debug, Clone)]
pub struct CyclicOps {
    /// b: A^{⊗(n+1)} → A^{⊗n} (zero with no rows when n = 0).
    pub b: SparseMat,
    /// b′: A^{⊗(n+1)} → A^{⊗n} (zero with no rows when n = 0).
    pub bprime: SparseMat,
    pub t: SparseMat,
    pub n: SparseMat,
}

pub fn cyclic_operators(a: &Algebra, n: usize) -> CyclicOps {
    let dim = word_dim(a, n + 1);
    let (b, bprime) = if n == 0 {
        (SparseMat::zero(0, dim), SparseMat::zero(0, dim))
    } else {
        (boundary_b(a, n), boundary_bprime(a, n))
    };
    CyclicOps {
        b,
        bprime,
        t: cyclic_t(a, n),
        n: norm_n(a, n),
    }
}

/// Which sub-bicomplex to totalize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcMode {
    /// The full first-quadrant bicomplex; its total complex computes HC.
    Full,
    /// First two columns; computes Hochschild homology.
    Cc2,
    /// First column only: the Hochschild complex (A^{⊗(n+1)}, b).
    Cc1,
    /// The bar complex (A^{⊗(n+1)}, b′); contractible for left-unital A.
    Bar,
}

impl CcMode {
    fn columns(&self, degree: usize) -> Vec<usize> {
        match self {
            CcMode::Full => (0..=degree).collect(),
            CcMode::Cc2 => (0..=degree.min(1)).collect(),
            CcMode::Cc1 | CcMode::Bar => vec![0],
        }
    }

    pub fn parse(s: &str) -> Option<CcMode> {
        match s {
            "full" => Some(CcMode::Full),
            "cc2" => Some(CcMode::Cc2),
            "cc1" => Some(CcMode::Cc1),
            "bar" => Some(CcMode::Bar),
            _ => None,
        }
    }
}

/// One bicomplex column's slice of a total-complex degree.
#[derive(Debug, Clone)]
pub struct TotBlock {
    /// Bicomplex column index p.
    pub col: usize,
    /// Tensor arity of the block: A^{⊗arity} (arity = degree − col + 1).
    pub arity: usize,
    /// Offset of this block inside the flat degree coordinates.
    pub offset: usize,
    pub dim: usize,
}

/// A total complex of (a sub-bicomplex of) CC(A | k), with its block layout.
#[derive(Debug, Clone)]
pub struct TotComplex {
    pub alg: Algebra,
    pub mode: CcMode,
    pub complex: ChainComplex,
    pub layout: Vec<Vec<TotBlock>>,
}

impl TotComplex {
    pub fn block(&self, degree: usize, arity: usize) -> Option<&TotBlock> {
        self.layout
            .get(degree)?
            .iter()
            .find(|b| b.arity == arity)
    }

    pub fn top_degree(&self) -> usize {
        self.complex.top_degree()
    }
}

/// Total complex of the selected sub-bicomplex truncated at total degree D.
/// d² = 0 is verified on construction (ChainComplex::new panics otherwise).
pub fn tot_cc(a: &Algebra, mode: CcMode, top: usize) -> TotComplex {
    let mut layout: Vec<Vec<TotBlock>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for col in mode.columns(n) {
            let arity = n - col + 1;
            let dim = word_dim(a, arity);
            blocks.push(TotBlock {
                col,
                arity,
                offset,
                dim,
            });
            offset += dim;
        }
        layout.push(blocks);
    }
    let spaces: Vec<BasedSpace> = layout
        .iter()
        .enumerate()
        .map(|(n, blocks)| {
            let dim = blocks.iter().map(|b| b.dim).sum();
            BasedSpace::anon(&format!("tot{n}_"), dim)
        })
        .collect();
    let mut diffs = Vec::with_capacity(top + 1);
    diffs.push(SparseMat::zero(0, spaces[0].dim()));
    for n in 1..=top {
        let mut d = SparseMat::zero(spaces[n - 1].dim(), spaces[n].dim());
        for sb in &layout[n] {
            let m = sb.arity - 1;
            // vertical: within column sb.col, row m → m−1
            if m >= 1 {
                if let Some(tb) = layout[n - 1].iter().find(|b| b.col == sb.col) {
                    let vert = match mode {
                        CcMode::Bar => boundary_bprime(a, m),
                        _ => {
                            if sb.col % 2 == 0 {
                                boundary_b(a, m)
                            } else {
                                boundary_bprime(a, m).neg_mat()
                            }
                        }
                    };
                    d.insert_block(tb.offset, sb.offset, &vert);
                }
            }
            // horizontal: column p → p−1 along the row
            if sb.col >= 1 {
                if let Some(tb) = layout[n - 1].iter().find(|b| b.col == sb.col - 1) {
                    let horiz = if sb.col % 2 == 1 {
                        let t = cyclic_t(a, m);
                        SparseMat::identity(sb.dim, a.field().one()).sub_mat(&t)
                    } else {
                        norm_n(a, m)
                    };
                    d.insert_block(tb.offset, sb.offset, &horiz);
                }
            }
        }
        diffs.push(d);
    }
    TotComplex {
        alg: a.clone(),
        mode,
        complex: ChainComplex::new(spaces, diffs, a.field()),
        layout,
    }
}

/// An element of Tot CC in a fixed total degree: one tensor component per
/// populated row m (living in bicomplex column `total_degree − m`).
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicChain {
    pub total_degree: usize,
    pub components: BTreeMap<usize, TensorElem>,
}

impl CyclicChain {
    pub fn new(total_degree: usize) -> Self {
        CyclicChain {
            total_degree,
            components: BTreeMap::new(),
        }
    }

    pub fn set_component(&mut self, m: usize, t: TensorElem) {
        assert!(m <= self.total_degree, "first-quadrant bicomplex");
        assert_eq!(t.space.arity(), m + 1);
        if !t.is_zero() {
            self.components.insert(m, t);
        }
    }

    pub fn component(&self, m: usize) -> Option<&TensorElem> {
        self.components.get(&m)
    }

    /// Flatten into the coordinates of `tot` at this chain's degree.
    pub fn flatten(&self, tot: &TotComplex) -> Result<SparseVec, CyclicError> {
        let mut out = SparseVec::new();
        for (m, comp) in &self.components {
            let block = tot
                .block(self.total_degree, m + 1)
                .ok_or(CyclicError::BadColumn(self.total_degree - m))?;
            for (flat, c) in comp.to_flat() {
                out.insert(block.offset + flat, c);
            }
        }
        Ok(out)
    }

    pub fn from_flat(
        tot: &TotComplex,
        degree: usize,
        v: &SparseVec,
    ) -> CyclicChain {
        let mut chain = CyclicChain::new(degree);
        for block in &tot.layout[degree] {
            let sp = cyclic_word_space(&tot.alg, block.arity);
            let mut comp = SparseVec::new();
            for (i, c) in v.range(block.offset..block.offset + block.dim) {
                comp.insert(i - block.offset, c.clone());
            }
            if !comp.is_empty() {
                chain.set_component(block.arity - 1, TensorElem::from_flat(sp, &comp));
            }
        }
        chain
    }

    /// Exactly zero total boundary in `tot`?
    pub fn is_cycle(&self, tot: &TotComplex) -> Result<bool, CyclicError> {
        let flat = self.flatten(tot)?;
        Ok(tot.complex.diff(self.total_degree).apply(&flat).is_empty())
    }
}

/// Connes' periodicity operator as the quotient Tot CC → Tot CC[2] killing
/// bicomplex columns 0 and 1: components in columns ≥ 2 survive, reindexed
/// down by two total degrees.
pub fn connes_s(x: &CyclicChain) -> Result<CyclicChain, CyclicError> {
    if x.total_degree < 2 {
        return Err(CyclicError::DegreeTooLow(x.total_degree));
    }
    let mut out = CyclicChain::new(x.total_degree - 2);
    for (m, comp) in &x.components {
        // column of this component is total_degree − m; survives iff ≥ 2
        if x.total_degree - m >= 2 {
            out.set_component(*m, comp.clone());
        }
    }
    Ok(out)
}

/// Search for an explicit boundary witness `z` with `x − y = d z`.
///
/// Both inputs must be cycles of the same degree in `tot`, and `tot` must be
/// built at least one degree above them. The witness is a flat coordinate
/// vector in degree `n+1`; `None` means the classes differ.
pub fn homologous(
    x: &CyclicChain,
    y: &CyclicChain,
    tot: &TotComplex,
) -> Result<Option<SparseVec>, CyclicError> {
    assert_eq!(x.total_degree, y.total_degree, "degree mismatch");
    let n = x.total_degree;
    assert!(n < tot.top_degree(), "need one extra degree for the witness search");
    if !x.is_cycle(tot)? {
        return Err(CyclicError::NotACycle(n));
    }
    if !y.is_cycle(tot)? {
        return Err(CyclicError::NotACycle(n));
    }
    let mut rhs = x.flatten(tot)?;
    for (i, c) in y.flatten(tot)? {
        merge(&mut rhs, i, -&c);
    }
    Ok(tot
        .complex
        .diff(n + 1)
        .solve_affine(&rhs)
        .map(|s| s.particular))
}

/// The bar contraction h(b⁰⊗…⊗bⁿ) = 1⊗b⁰⊗…⊗bⁿ of a left-unital algebra.
///
/// Returns the bar total complex built through `top+1`, the homotopy, and the
/// certificate b′h + hb′ = 1 for all degrees ≤ `top`.
pub fn bar_contraction(
    a: &Algebra,
    top: usize,
) -> Result<(TotComplex, Homotopy, CertificateSet), CyclicError> {
    let unit = a.left_unit().ok_or(CyclicError::NoLeftUnit)?.clone();
    let tot = tot_cc(a, CcMode::Bar, top + 1);
    let mut mats = Vec::with_capacity(top + 2);
    for n in 0..=top + 1 {
        let src = cyclic_word_space(a, n + 1);
        let dst = cyclic_word_space(a, n + 2);
        if n == top + 1 {
            mats.push(SparseMat::zero(0, src.dim()));
            break;
        }
        let cols = par::map_indexed(src.dim(), |flat| {
            let w = src.codec.unflatten(flat);
            let mut out = SparseVec::new();
            let mut img = Vec::with_capacity(w.len() + 1);
            for (j, c) in &unit {
                img.clear();
                img.push(*j);
                img.extend_from_slice(&w);
                let f = dst.codec.flatten(&dst.codec.encode(&img));
                merge(&mut out, f, c.clone());
            }
            out
        });
        mats.push(SparseMat::from_columns(dst.dim(), cols));
    }
    let h = Homotopy { mats };
    let mut certs = CertificateSet::new();
    for n in 0..=top {
        let lhs = h.dh_plus_hd(&tot.complex, n);
        let id = SparseMat::identity(tot.complex.dim(n), a.field().one());
        let delta = lhs.sub_mat(&id);
        certs.push(Certificate::of(
            format!("bar.contraction(degree {n})"),
            delta.is_zero(),
            format!(
                "b'h + hb' ≠ 1 first at column {:?}",
                delta.iter().next().map(|(_, j, _)| j)
            ),
        ));
    }
    Ok((tot, h, certs))
}

/// The chain map induced degreewise by an algebra map `f: A → B` on the
/// chosen sub-bicomplex total (slotwise tensor powers of `f`).
pub fn induced_chain_map(
    f: &SparseMat,
    src: &TotComplex,
    dst: &TotComplex,
) -> ChainMap {
    assert_eq!(src.mode, dst.mode);
    let top = src.top_degree().min(dst.top_degree());
    let mut mats = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut m = SparseMat::zero(dst.complex.dim(n), src.complex.dim(n));
        for sb in &src.layout[n] {
            let tb = dst.block(n, sb.arity).expect("same layout");
            // f^{⊗arity} block
            let src_sp = cyclic_word_space(&src.alg, sb.arity);
            let dst_sp = cyclic_word_space(&dst.alg, sb.arity);
            let cols = par::map_indexed(src_sp.dim(), |flat| {
                let w = src_sp.codec.unflatten(flat);
                let mut acc: Vec<(Vec<usize>, crate::exactlin::Scalar)> =
                    vec![(Vec::new(), src.alg.field().one())];
                for s in &w {
                    let col = f.column(*s);
                    let mut next = Vec::with_capacity(acc.len() * col.len().max(1));
                    for (prefix, coef) in &acc {
                        for (i, v) in &col {
                            let mut p = prefix.clone();
                            p.push(*i);
                            next.push((p, coef * v));
                        }
                    }
                    next.retain(|(_, c)| !c.is_zero());
                    acc = next;
                    if acc.is_empty() {
                        break;
                    }
                }
                let mut out = SparseVec::new();
                for (idx, c) in acc {
                    let fi = dst_sp.codec.flatten(&dst_sp.codec.encode(&idx));
                    merge(&mut out, fi, c);
                }
                out
            });
            let block = SparseMat::from_columns(dst_sp.dim(), cols);
            m.insert_block(tb.offset, sb.offset, &block);
        }
        mats.push(m);
    }
    ChainMap { mats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;
    use crate::structalg::{dual_numbers, ground_field_algebra, product_field_algebra};

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn degree_zero_operators_are_identities() {
        let a = ground_field_algebra(q());
        let ops = cyclic_operators(&a, 0);
        assert_eq!(ops.t, SparseMat::identity(1, q().one()));
        assert_eq!(ops.n, SparseMat::identity(1, q().one()));
        assert_eq!(ops.b.rows(), 0);
    }

    #[test]
    fn unit_algebra_degree_one_boundaries() {
        let a = ground_field_algebra(q());
        let ops = cyclic_operators(&a, 1);
        // b(1⊗1) = 1·1 − 1·1 = 0; b′(1⊗1) = 1
        assert!(ops.b.is_zero());
        assert_eq!(ops.bprime.get(0, 0), Some(&q().one()));
    }

    #[test]
    fn dual_numbers_degree_one_boundaries() {
        let a = dual_numbers(q());
        // b(x⊗x) = x² − x² = 0 and b′(x⊗x) = x² = 0
        let ops = cyclic_operators(&a, 1);
        let xx = 2 + 1; // flat index of x⊗x
        assert!(ops.b.column(xx).is_empty());
        assert!(ops.bprime.column(xx).is_empty());
        // b(1⊗x) = x − x = 0, b′(1⊗x) = x
        let ox = 1;
        assert!(ops.b.column(ox).is_empty());
        assert_eq!(ops.bprime.column(ox), SparseVec::from([(1, q().one())]));
    }

    #[test]
    fn column_compatibilities_pin_the_signs() {
        // b(1−t) = (1−t)b′ and b′N = Nb, all degrees ≤ 4
        for a in [ground_field_algebra(q()), dual_numbers(q()), product_field_algebra(2, q())] {
            for m in 1..=3 {
                let dim = a.dim().pow((m + 1) as u32);
                let id = SparseMat::identity(dim, q().one());
                let one_minus_t = id.sub_mat(&cyclic_t(&a, m));
                let id_small =
                    SparseMat::identity(a.dim().pow(m as u32), q().one());
                let one_minus_t_small = id_small.sub_mat(&cyclic_t(&a, m - 1));
                let lhs = boundary_b(&a, m).mul_mat(&one_minus_t);
                let rhs = one_minus_t_small.mul_mat(&boundary_bprime(&a, m));
                assert_eq!(lhs, rhs, "b(1−t) = (1−t)b′ fails at m={m}");
                let lhs2 = boundary_bprime(&a, m).mul_mat(&norm_n(&a, m));
                let rhs2 = norm_n(&a, m - 1).mul_mat(&boundary_b(&a, m));
                assert_eq!(lhs2, rhs2, "b′N = Nb fails at m={m}");
            }
        }
    }

    #[test]
    fn hc_of_ground_field_is_periodic() {
        let a = ground_field_algebra(q());
        let tot = tot_cc(&a, CcMode::Full, 5);
        let dims = crate::chainkit::homology_dims(&tot.complex);
        assert_eq!(&dims[..5], &[1, 0, 1, 0, 1]);
    }

    #[test]
    fn hh_of_ground_field() {
        let a = ground_field_algebra(q());
        let tot = tot_cc(&a, CcMode::Cc1, 4);
        let dims = crate::chainkit::homology_dims(&tot.complex);
        assert_eq!(&dims[..4], &[1, 0, 0, 0]);
    }

    #[test]
    fn cc2_and_cc1_homology_agree_for_unital_algebras() {
        for a in [
            ground_field_algebra(q()),
            product_field_algebra(2, q()),
            dual_numbers(q()),
        ] {
            let d1 = crate::chainkit::homology_dims(&tot_cc(&a, CcMode::Cc1, 4).complex);
            let d2 = crate::chainkit::homology_dims(&tot_cc(&a, CcMode::Cc2, 4).complex);
            assert_eq!(&d1[..4], &d2[..4]);
        }
    }

    #[test]
    fn prime_field_session_computes_the_same_oracle() {
        let f = FieldSpec::fp(7).unwrap();
        let a = ground_field_algebra(f);
        let tot = tot_cc(&a, CcMode::Full, 5);
        let dims = crate::chainkit::homology_dims(&tot.complex);
        assert_eq!(&dims[..5], &[1, 0, 1, 0, 1]);
    }

    #[test]
    fn bar_complex_of_unital_algebra_contracts() {
        for a in [ground_field_algebra(q()), product_field_algebra(2, q())] {
            let (_tot, _h, certs) = bar_contraction(&a, 3).unwrap();
            certs.assert_all();
        }
    }

    #[test]
    fn bar_contraction_needs_left_unit() {
        // square-zero one-dimensional algebra: no unit
        let a = Algebra::new(
            BasedSpace::named(["x"]),
            vec![SparseVec::new()],
            q(),
        )
        .unwrap();
        assert!(matches!(
            bar_contraction(&a, 2),
            Err(CyclicError::NoLeftUnit)
        ));
    }

    #[test]
    fn bar_contraction_of_ground_field_degree_zero() {
        let a = ground_field_algebra(q());
        let (tot, h, _) = bar_contraction(&a, 2).unwrap();
        // h(1) = 1⊗1 and b′h(1) = 1
        let h0 = h.mat(0);
        assert_eq!(h0.get(0, 0), Some(&q().one()));
        let back = tot.complex.diff(1).mul_mat(&h0);
        assert_eq!(back, SparseMat::identity(1, q().one()));
    }

    #[test]
    fn connes_s_drops_first_two_columns() {
        let a = ground_field_algebra(q());
        // chain in degree 2 supported in rows m = 0 (column 2) and m = 1, 2
        let mut x = CyclicChain::new(2);
        for m in 0..=2 {
            let sp = cyclic_word_space(&a, m + 1);
            x.set_component(m, TensorElem::term(sp, &vec![0; m + 1], q().one()));
        }
        let s = connes_s(&x).unwrap();
        assert_eq!(s.total_degree, 0);
        // only the m = 0 component (column 2) survives
        assert_eq!(s.components.len(), 1);
        assert!(s.component(0).is_some());
        // chains supported in columns {0,1} map to zero
        let mut y = CyclicChain::new(2);
        for m in 1..=2 {
            let sp = cyclic_word_space(&a, m + 1);
            y.set_component(m, TensorElem::term(sp, &vec![0; m + 1], q().one()));
        }
        assert!(connes_s(&y).unwrap().components.is_empty());
        assert!(connes_s(&CyclicChain::new(1)).is_err());
    }

    #[test]
    fn homologous_finds_witnesses() {
        let a = product_field_algebra(2, q());
        let tot = tot_cc(&a, CcMode::Cc1, 3);
        // x = y: witness 0 accepted
        let sp = cyclic_word_space(&a, 1);
        let mut x = CyclicChain::new(0);
        x.set_component(0, TensorElem::term(sp.clone(), &[0], q().one()));
        let w = homologous(&x, &x, &tot).unwrap();
        assert!(w.is_some());
        // x vs x + d(w): witness exists
        let mut wv = SparseVec::new();
        wv.insert(3, q().one()); // some degree-1 element
        let dw = tot.complex.diff(1).apply(&wv);
        let mut y_flat = x.flatten(&tot).unwrap();
        for (i, c) in dw {
            merge(&mut y_flat, i, c);
        }
        let y = CyclicChain::from_flat(&tot, 0, &y_flat);
        let w2 = homologous(&x, &y, &tot).unwrap();
        assert!(w2.is_some());
        // distinct classes: [e0] vs [e1] in HH_0(k²) = k²
        let mut z = CyclicChain::new(0);
        z.set_component(0, TensorElem::term(sp, &[1], q().one()));
        assert!(homologous(&x, &z, &tot).unwrap().is_none());
    }
}
