//! Matrix stability and conjugation triviality on Hochschild chains.
//!
//! `inc: B → M_n(B)`, `b ↦ E_00(b)` and the generalized trace
//! `tr(β⁰⊗…⊗βⁿ) = Σ β⁰_{i_0i_1}⊗β¹_{i_1i_2}⊗…⊗βⁿ_{i_ni_0}` form a homotopy
//! equivalence of Hochschild complexes, with the explicit corner-pushing
//! homotopy; conjugation by an invertible γ is homotopic to the identity.
//! Both homotopies are re-verified degreewise as exact operator identities.

use super::complex::{ChainMap, Homotopy};
use super::cyclic::{cyclic_word_space, induced_chain_map, tot_cc, CcMode, TotComplex};
use crate::cert::{Certificate, CertificateSet};
use crate::exactlin::{SparseMat, SparseVec};
use crate::par;
use crate::structalg::{matrix_algebra, Algebra, MatrixAlgebra};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StabilityError {
    #[error("base algebra must be unital")]
    NotUnital,
    #[error("γ is not invertible in M_n(B)")]
    NotInvertible,
    #[error("matrix algebra construction failed: {0}")]
    Matrix(#[from] crate::structalg::AlgebraError),
}

/// The generalized trace as a per-degree chain map C(M_n(B)) → C(B).
fn trace_chain_map(mat: &MatrixAlgebra, top: usize) -> ChainMap {
    let b = &mat.base;
    let m_alg = &mat.algebra;
    let mut mats = Vec::with_capacity(top + 1);
    for deg in 0..=top {
        let src = cyclic_word_space(m_alg, deg + 1);
        let dst = cyclic_word_space(b, deg + 1);
        let cols = par::map_indexed(src.dim(), |flat| {
            let w = src.codec.unflatten(flat);
            let slots: Vec<(usize, usize, usize)> = w.iter().map(|s| mat.split(*s)).collect();
            // cyclic chain condition: col(k) = row(k+1)
            let ok = (0..slots.len()).all(|k| slots[k].1 == slots[(k + 1) % slots.len()].0);
            let mut out = SparseVec::new();
            if ok {
                let word: Vec<usize> = slots.iter().map(|(_, _, c)| *c).collect();
                out.insert(
                    dst.codec.flatten(&dst.codec.encode(&word)),
                    b.field().one(),
                );
            }
            out
        });
        mats.push(SparseMat::from_columns(dst.dim(), cols));
    }
    ChainMap { mats }
}

/// The corner-pushing homotopy between 1 and inc∘tr on C(M_n(B)).
fn stability_homotopy(mat: &MatrixAlgebra, top: usize) -> Homotopy {
    let m_alg = &mat.algebra;
    let field = m_alg.field();
    let unit_b = mat.base.unit().expect("unital base").clone();
    let mut mats = Vec::with_capacity(top + 1);
    for deg in 0..=top {
        let src = cyclic_word_space(m_alg, deg + 1);
        let dst = cyclic_word_space(m_alg, deg + 2);
        let cols = par::map_indexed(src.dim(), |flat| {
            let w = src.codec.unflatten(flat);
            let slots: Vec<(usize, usize, usize)> = w.iter().map(|s| mat.split(*s)).collect();
            let mut out = SparseVec::new();
            for m in 0..=deg {
                // chain condition on the first m slots: col(k) = row(k+1)
                if (0..m).any(|k| slots[k].1 != slots[k + 1].0) {
                    continue;
                }
                let sign = if m % 2 == 1 {
                    -&field.one()
                } else {
                    field.one()
                };
                // E_{a_0,0}(c_0) ⊗ E_{00}(c_1) ⊗ … ⊗ E_{00}(c_m)
                //   ⊗ E_{0,b_m}(1) ⊗ slots m+1.. unchanged
                let mut img = Vec::with_capacity(deg + 2);
                img.push(mat.flat(slots[0].0, 0, slots[0].2));
                for slot in slots.iter().take(m + 1).skip(1) {
                    img.push(mat.flat(0, 0, slot.2));
                }
                img.push(0); // placeholder for E_{0, b_m}(unit component)
                for k in m + 1..=deg {
                    img.push(w[k]);
                }
                for (uc, coef) in &unit_b {
                    img[m + 1] = mat.flat(0, slots[m].1, *uc);
                    let f = dst.codec.flatten(&dst.codec.encode(&img));
                    let c = &sign * coef;
                    match out.get_mut(&f) {
                        Some(e) => {
                            *e += &c;
                            if e.is_zero() {
                                out.remove(&f);
                            }
                        }
                        None => {
                            if !c.is_zero() {
                                out.insert(f, c);
                            }
                        }
                    }
                }
            }
            out
        });
        mats.push(SparseMat::from_columns(dst.dim(), cols));
    }
    Homotopy { mats }
}

#[derive(Debug)]
pub struct StabilityOutput {
    pub matrix: MatrixAlgebra,
    pub cm: TotComplex,
    pub cb: TotComplex,
    pub inc: ChainMap,
    pub tr: ChainMap,
    pub h: Homotopy,
    pub report: CertificateSet,
}

/// Certify tr∘inc = 1 and 1 − inc∘tr = dh + hd on C(M_n(B)) through `top`.
pub fn matrix_stability(
    b: &Algebra,
    n: usize,
    top: usize,
) -> Result<StabilityOutput, StabilityError> {
    if !b.is_unital() {
        return Err(StabilityError::NotUnital);
    }
    let mat = matrix_algebra(b, n)?;
    let cm = tot_cc(&mat.algebra, CcMode::Cc1, top + 1);
    let cb = tot_cc(b, CcMode::Cc1, top + 1);
    // inc: B → M_n(B) as a linear map, then slotwise
    let mut inc_lin = SparseMat::zero(mat.algebra.dim(), b.dim());
    for k in 0..b.dim() {
        inc_lin.set(mat.flat(0, 0, k), k, b.field().one());
    }
    let inc = induced_chain_map(&inc_lin, &cb, &cm);
    let tr = trace_chain_map(&mat, top + 1);
    let h = stability_homotopy(&mat, top + 1);
    let one = b.field().one();
    let mut report = CertificateSet::new();
    for deg in 0..=top {
        let ti = tr.mat(deg).mul_mat(&inc.mat(deg));
        let delta = ti.sub_mat(&SparseMat::identity(cb.complex.dim(deg), one.clone()));
        report.push(Certificate::of(
            format!("stability.tr_inc(degree {deg})"),
            delta.is_zero(),
            format!("tr∘inc ≠ 1 first at column {:?}", delta.iter().next().map(|(_, j, _)| j)),
        ));
        let it = inc.mat(deg).mul_mat(&tr.mat(deg));
        let idm = SparseMat::identity(cm.complex.dim(deg), one.clone());
        let lhs = idm.sub_mat(&it);
        let rhs = h.dh_plus_hd(&cm.complex, deg);
        let delta = lhs.sub_mat(&rhs);
        report.push(Certificate::of(
            format!("stability.homotopy(degree {deg})"),
            delta.is_zero(),
            format!(
                "1 − inc∘tr ≠ dh + hd first at column {:?}",
                delta.iter().next().map(|(_, j, _)| j)
            ),
        ));
    }
    // tr and inc are chain maps
    match inc.chain_map_witness(&cb.complex, &cm.complex) {
        None => report.push(Certificate::pass("stability.inc_chain_map")),
        Some((d, j)) => report.push(Certificate::fail(
            "stability.inc_chain_map",
            format!("degree {d} column {j}"),
        )),
    }
    match tr.chain_map_witness(&cm.complex, &cb.complex) {
        None => report.push(Certificate::pass("stability.tr_chain_map")),
        Some((d, j)) => report.push(Certificate::fail(
            "stability.tr_chain_map",
            format!("degree {d} column {j}"),
        )),
    }
    Ok(StabilityOutput {
        matrix: mat,
        cm,
        cb,
        inc,
        tr,
        h,
        report,
    })
}

#[derive(Debug)]
pub struct ConjugationOutput {
    pub conj: ChainMap,
    pub h: Homotopy,
    pub report: CertificateSet,
}

/// Conjugation γ(−)γ⁻¹ on C(M_n(B)) is homotopic to the identity via
/// h(β⁰⊗…⊗βⁿ) = Σ_m (−1)^m β⁰γ⁻¹ ⊗ γβ¹γ⁻¹ ⊗ … ⊗ γβ^mγ⁻¹ ⊗ γβ^{m+1} ⊗ … ⊗ βⁿ.
pub fn conjugation_homotopy(
    mat: &MatrixAlgebra,
    gamma: &SparseVec,
    top: usize,
) -> Result<ConjugationOutput, StabilityError> {
    let m_alg = &mat.algebra;
    let field = m_alg.field();
    let one_m = m_alg.unit().ok_or(StabilityError::NotUnital)?.clone();
    // invert γ: solve γ·x = 1 and verify two-sidedly
    let lg = m_alg.left_mult_matrix(gamma);
    let gamma_inv = lg
        .solve_affine(&one_m)
        .map(|s| s.particular)
        .ok_or(StabilityError::NotInvertible)?;
    if m_alg.product(&gamma_inv, gamma) != one_m || m_alg.product(gamma, &gamma_inv) != one_m {
        return Err(StabilityError::NotInvertible);
    }
    let cm = tot_cc(m_alg, CcMode::Cc1, top + 1);
    // conj as a linear map on M_n(B), then slotwise
    let conj_lin = m_alg
        .left_mult_matrix(gamma)
        .mul_mat(&m_alg.right_mult_matrix(&gamma_inv));
    let conj = induced_chain_map(&conj_lin, &cm, &cm);
    let rg_inv = m_alg.right_mult_matrix(&gamma_inv);
    let mut mats = Vec::with_capacity(top + 2);
    for deg in 0..=top + 1 {
        let src = cyclic_word_space(m_alg, deg + 1);
        let dst = cyclic_word_space(m_alg, deg + 2);
        let cols = par::map_indexed(src.dim(), |flat| {
            let w = src.codec.unflatten(flat);
            let mut out = SparseVec::new();
            for m in 0..=deg {
                let sign = if m % 2 == 1 {
                    -&field.one()
                } else {
                    field.one()
                };
                // slots: β⁰γ⁻¹, then γβ^kγ⁻¹ for k ≤ m, then γ as its own
                // factor, then the remaining slots unchanged
                let mut slot_vecs: Vec<SparseVec> = Vec::with_capacity(deg + 2);
                slot_vecs.push(rg_inv.column(w[0]));
                for k in 1..=m {
                    slot_vecs.push(conj_lin.column(w[k]));
                }
                slot_vecs.push(gamma.clone());
                for k in m + 1..=deg {
                    slot_vecs.push(SparseVec::from([(w[k], field.one())]));
                }
                // expand the product of the slot expansions
                let mut acc: Vec<(Vec<usize>, crate::exactlin::Scalar)> =
                    vec![(Vec::new(), sign)];
                for sv in &slot_vecs {
                    let mut next = Vec::with_capacity(acc.len() * sv.len().max(1));
                    for (prefix, coef) in &acc {
                        for (i, v) in sv {
                            let mut p = prefix.clone();
                            p.push(*i);
                            let c = coef * v;
                            if !c.is_zero() {
                                next.push((p, c));
                            }
                        }
                    }
                    acc = next;
                    if acc.is_empty() {
                        break;
                    }
                }
                for (idx, c) in acc {
                    let f = dst.codec.flatten(&dst.codec.encode(&idx));
                    match out.get_mut(&f) {
                        Some(e) => {
                            *e += &c;
                            if e.is_zero() {
                                out.remove(&f);
                            }
                        }
                        None => {
                            out.insert(f, c);
                        }
                    }
                }
            }
            out
        });
        mats.push(SparseMat::from_columns(dst.dim(), cols));
    }
    let h = Homotopy { mats };
    let one = field.one();
    let mut report = CertificateSet::new();
    for deg in 0..=top {
        let idm = SparseMat::identity(cm.complex.dim(deg), one.clone());
        let lhs = idm.sub_mat(&conj.mat(deg));
        let rhs = h.dh_plus_hd(&cm.complex, deg);
        let delta = lhs.sub_mat(&rhs);
        report.push(Certificate::of(
            format!("conjugation.homotopy(degree {deg})"),
            delta.is_zero(),
            format!(
                "1 − conj_γ ≠ dh + hd first at column {:?}",
                delta.iter().next().map(|(_, j, _)| j)
            ),
        ));
    }
    match conj.chain_map_witness(&cm.complex, &cm.complex) {
        None => report.push(Certificate::pass("conjugation.chain_map")),
        Some((d, j)) => report.push(Certificate::fail(
            "conjugation.chain_map",
            format!("degree {d} column {j}"),
        )),
    }
    Ok(ConjugationOutput { conj, h, report })
}
