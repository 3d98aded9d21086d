//! Chern-type characters at chain level: the abstract cyclic character, the
//! idempotent Chern character with its trace push-down, the Chern-Weil chains
//! of a strong connection, the associated idempotent, and the commutative
//! factorization diagram — every identity certified in exact arithmetic.
//!
//! A K-sequence is a family x_m ∈ X^{⊗(m+1)} with t(x_m) = (−1)^m x_m and
//! d_i x_m = x_{m−1}; the weighted sum Σ (−1)^{⌊m/2⌋} m!/⌊m/2⌋! · x_m is then
//! a 2n-cycle in the cyclic total complex, and its class is stable under the
//! periodicity operator S (here: on the nose, since the weights do not depend
//! on n).

use crate::cert::{Certificate, CertificateSet};
use crate::chainkit::{
    apply_b_chain, apply_norm_chain, apply_one_minus_t, connes_s, cyclic_word_space, homologous,
    tot_cc, total_boundary, CcMode, CyclicChain, TotComplex,
};
use crate::exactlin::{axpy, Scalar, SparseMat, SparseVec};
use crate::galois::{verify_connection, CanonicalData, ComoduleAlgebra, ESCoring, Entwining, StrongConnection};
use crate::structalg::{matrix_algebra, Algebra, MatrixAlgebra};
use crate::structcoalg::{comodule_character, Comodule, Cotrace};
use crate::tenalg::TensorElem;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChernError {
    #[error("K-sequence condition {condition} fails at m = {m}{face}")]
    BadKSequence {
        condition: &'static str,
        m: usize,
        face: String,
    },
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("chain escapes M^(⊗m+1) at m = {0}: broken colinearity")]
    EscapesM(usize),
    #[error("idempotent entry ({0}, {1}) does not lie in B")]
    EntryNotInB(usize, usize),
    #[error("input is not a cotrace")]
    NotACotrace,
    #[error("comodule is invalid: {0}")]
    Comodule(#[from] crate::structcoalg::CoalgebraError),
    #[error("cyclic machinery error: {0}")]
    Cyclic(#[from] crate::chainkit::CyclicError),
    #[error("matrix algebra: {0}")]
    Alg(#[from] crate::structalg::AlgebraError),
}

/// A sequence x_m ∈ A^{⊗(m+1)}, m = 0..=2n, satisfying the two K-conditions.
#[derive(Debug, Clone)]
pub struct KSequence {
    pub ambient: Algebra,
    pub terms: Vec<TensorElem>,
}

impl KSequence {
    /// Verify t(x_m) = (−1)^m x_m and d_i x_m = x_{m−1} for every face.
    pub fn verify(&self) -> Result<(), ChernError> {
        for (m, x) in self.terms.iter().enumerate() {
            // signed t fixes x_m ⟺ the plain rotation fixes x_m
            if x.rotate_right() != *x {
                return Err(ChernError::BadKSequence {
                    condition: "t(x_m) = (−1)^m x_m",
                    m,
                    face: String::new(),
                });
            }
            if m >= 1 {
                for i in 0..=m {
                    let down = apply_face(&self.ambient, x, i);
                    if down != self.terms[m - 1] {
                        return Err(ChernError::BadKSequence {
                            condition: "d_i x_m = x_{m−1}",
                            m,
                            face: format!(", face {i}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Face d_i applied to a sparse chain in A^{⊗(m+1)}.
fn apply_face(a: &Algebra, x: &TensorElem, i: usize) -> TensorElem {
    let m = x.space.arity() - 1;
    assert!(m >= 1 && i <= m);
    let dst = cyclic_word_space(a, m);
    let mut out = TensorElem::zero(dst);
    for (w, c) in x.iter() {
        if i < m {
            let prod = a.mul_basis(w[i], w[i + 1]);
            let mut img = w.clone();
            img.remove(i + 1);
            for (r, v) in prod {
                img[i] = *r;
                out.add_term(&img, &(c * v));
            }
        } else {
            let prod = a.mul_basis(w[m], w[0]);
            let mut img: Vec<usize> = w[..m].to_vec();
            for (r, v) in prod {
                img[0] = *r;
                out.add_term(&img, &(c * v));
            }
        }
    }
    out
}

/// A certified 2n-cycle in Tot CC of its ambient algebra.
#[derive(Debug, Clone)]
pub struct CharacterClass {
    pub ambient: Algebra,
    pub n: usize,
    pub cycle: CyclicChain,
    pub report: CertificateSet,
}

impl CharacterClass {
    /// The total complex this class lives in, built through `extra` degrees
    /// above 2n (witness searches need one).
    pub fn tot(&self, extra: usize) -> TotComplex {
        tot_cc(&self.ambient, CcMode::Full, 2 * self.n + extra)
    }
}

/// The weights (−1)^{⌊m/2⌋} m!/⌊m/2⌋! via the recurrence λ_{r+1} = (r+1)λ_r
/// (r even), λ_{r+1} = −2λ_r (r odd); exact in the ground field.
pub fn character_weights(field: &crate::exactlin::FieldSpec, top: usize) -> Vec<Scalar> {
    let mut w = Vec::with_capacity(top + 1);
    w.push(field.one());
    for r in 0..top {
        let next = if r % 2 == 0 {
            &w[r] * &field.integer((r + 1) as i64)
        } else {
            &w[r] * &field.integer(-2)
        };
        w.push(next);
    }
    w
}

/// ch_n(x) = Σ_{m=0}^{2n} (−1)^{⌊m/2⌋} m!/⌊m/2⌋! x_m, certified to be a cycle
/// by the two route computations (b and b′ columns) and by the assembled
/// total differential.
pub fn abstract_character(x: &KSequence, n: usize) -> Result<CharacterClass, ChernError> {
    x.verify()?;
    assert!(x.terms.len() > 2 * n, "need terms up to m = 2n");
    let field = x.ambient.field();
    let weights = character_weights(&field, 2 * n);
    let mut cycle = CyclicChain::new(2 * n);
    for m in 0..=2 * n {
        cycle.set_component(m, x.terms[m].scale(&weights[m]));
    }
    let mut report = CertificateSet::new();
    // route certificates: at each odd row r, b(λ_{r+1}x_{r+1}) + (1−t)(λ_r x_r) = 0;
    // at each even row r ≥ 0 with r+2 ≤ 2n, −b′(λ_{r+1}x_{r+1}) + N(λ_r x_r) = 0
    for l in 1..=n {
        let b_of = apply_b_chain(&x.ambient, &x.terms[2 * l].scale(&weights[2 * l]), true);
        let rot = apply_one_minus_t(&x.ambient, &x.terms[2 * l - 1].scale(&weights[2 * l - 1]))
            .add(&b_of);
        report.push(Certificate::of(
            format!("character.route_b(l = {l})"),
            rot.is_zero(),
            "b(λ_{2l}x_{2l}) ≠ −(1−t)(λ_{2l−1}x_{2l−1})",
        ));
        let bp = apply_b_chain(
            &x.ambient,
            &x.terms[2 * l - 1].scale(&weights[2 * l - 1]),
            false,
        );
        let nn = apply_norm_chain(&x.ambient, &x.terms[2 * l - 2].scale(&weights[2 * l - 2]));
        let delta = nn.sub(&bp);
        report.push(Certificate::of(
            format!("character.route_b'(l = {l})"),
            delta.is_zero(),
            "b′(λ_{2l−1}x_{2l−1}) ≠ N(λ_{2l−2}x_{2l−2})",
        ));
    }
    // total cycle certificate (chain-level, no operator matrices)
    let is_cycle = n == 0 || total_boundary(&x.ambient, &cycle).components.is_empty();
    report.push(Certificate::of(
        "character.cycle",
        is_cycle,
        "total boundary is nonzero",
    ));
    if !report.all_pass() {
        // a failing certificate here means the K-conditions were violated in
        // a way verify() cannot see; surface it loudly
        return Err(ChernError::BadKSequence {
            condition: "cycle certificates",
            m: 2 * n,
            face: String::new(),
        });
    }
    Ok(CharacterClass {
        ambient: x.ambient.clone(),
        n,
        cycle,
        report,
    })
}

/// The idempotent Chern character: c_m(e) = e⊗…⊗e in M_N(B), pushed to B by
/// the generalized trace, both levels kept and certified.
#[derive(Debug)]
pub struct IdempotentChern {
    pub matrix_level: CharacterClass,
    pub base_level: CharacterClass,
}

pub fn idempotent_chern(
    mat: &MatrixAlgebra,
    e: &SparseVec,
    n: usize,
) -> Result<IdempotentChern, ChernError> {
    if &mat.algebra.product(e, e) != e {
        return Err(ChernError::NotIdempotent);
    }
    let mut terms = Vec::with_capacity(2 * n + 1);
    let mut cur = TensorElem::zero(cyclic_word_space(&mat.algebra, 1));
    for (i, c) in e {
        cur.add_term(&[*i], c);
    }
    terms.push(cur.clone());
    for _ in 0..2 * n {
        let mut next = TensorElem::zero(cyclic_word_space(
            &mat.algebra,
            cur.space.arity() + 1,
        ));
        for (w, c) in cur.iter() {
            for (i, v) in e {
                let mut img = w.clone();
                img.push(*i);
                next.add_term(&img, &(c * v));
            }
        }
        terms.push(next.clone());
        cur = next;
    }
    let ks = KSequence {
        ambient: mat.algebra.clone(),
        terms,
    };
    let matrix_level = abstract_character(&ks, n)?;
    // trace push-down, slot chain contraction per component
    let mut cycle = CyclicChain::new(2 * n);
    for (m, comp) in &matrix_level.cycle.components {
        cycle.set_component(*m, trace_push(mat, comp));
    }
    let mut report = CertificateSet::new();
    let is_cycle = n == 0 || total_boundary(&mat.base, &cycle).components.is_empty();
    report.push(Certificate::of(
        "idempotent_chern.base_cycle",
        is_cycle,
        "trace push-down is not a cycle",
    ));
    if !report.all_pass() {
        return Err(ChernError::BadKSequence {
            condition: "trace push-down cycle",
            m: 2 * n,
            face: String::new(),
        });
    }
    Ok(IdempotentChern {
        matrix_level,
        base_level: CharacterClass {
            ambient: mat.base.clone(),
            n,
            cycle,
            report,
        },
    })
}

/// tr(β⁰⊗…⊗βⁿ) = Σ β⁰_{i₀i₁}⊗β¹_{i₁i₂}⊗…⊗βⁿ_{iₙi₀} on a sparse chain.
pub fn trace_push(mat: &MatrixAlgebra, x: &TensorElem) -> TensorElem {
    let arity = x.space.arity();
    let dst = cyclic_word_space(&mat.base, arity);
    let mut out = TensorElem::zero(dst);
    for (w, c) in x.iter() {
        let slots: Vec<(usize, usize, usize)> = w.iter().map(|s| mat.split(*s)).collect();
        let ok = (0..arity).all(|k| slots[k].1 == slots[(k + 1) % arity].0);
        if ok {
            let word: Vec<usize> = slots.iter().map(|(_, _, k)| *k).collect();
            out.add_term(&word, c);
        }
    }
    out
}

/// c_m(ℓ)(c): apply the iterated comultiplication to a cotrace, apply ℓ
/// legwise, rotate the legs cyclically by one, and express the result in
/// M^{⊗(m+1)} coordinates (an error if it escapes: broken colinearity).
pub fn chw_chain(
    ca: &ComoduleAlgebra,
    es: &ESCoring,
    ell: &StrongConnection,
    c: &Cotrace,
    m: usize,
) -> Result<TensorElem, ChernError> {
    if !c.verify(&ca.coalg) {
        return Err(ChernError::NotACotrace);
    }
    let da = ca.alg.dim();
    let dm = es.dim_m();
    // Δ^m(c), then ℓ on every leg, accumulated over flat A^{⊗2(m+1)} indices;
    // the flat index over (m+1) pair-slots of dimension da² coincides with
    // the row-major index over 2(m+1) A-legs
    let iter = ca.coalg.iterated_comult(&c.element, m);
    let pair_dim = da * da;
    let mut acc: SparseVec = SparseVec::new();
    for (legs, coef) in iter.iter() {
        // ℓ(c_(1))⊗…⊗ℓ(c_(m+1)) expanded once per leg (each expansion is
        // shared between two adjacent slots after the rotation, so the
        // expansion cannot be done slotwise)
        let mut terms: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), coef.clone())];
        for k in 0..=m {
            let mut next = Vec::with_capacity(terms.len() * ell.ell[legs[k]].len().max(1));
            for (word, cv) in &terms {
                for (f, v) in &ell.ell[legs[k]] {
                    let mut w = word.clone();
                    w.push(f / da); // u-leg
                    w.push(f % da); // v-leg
                    next.push((w, cv * v));
                }
            }
            terms = next;
            if terms.is_empty() {
                break;
            }
        }
        for (word, cv) in terms {
            // rotate right by one A-leg: last v-leg comes first
            let len = word.len();
            let mut flat = 0usize;
            flat = flat * da + word[len - 1];
            for &l in &word[..len - 1] {
                flat = flat * da + l;
            }
            match acc.get_mut(&flat) {
                Some(e) => {
                    *e += &cv;
                    if e.is_zero() {
                        acc.remove(&flat);
                    }
                }
                None => {
                    if !cv.is_zero() {
                        acc.insert(flat, cv);
                    }
                }
            }
        }
    }
    // express slotwise in M coordinates and verify membership
    let coords = transform_slots(&acc, m + 1, pair_dim, dm, &es.m_project);
    let back = transform_slots(&coords, m + 1, dm, pair_dim, &es.m_embed);
    if back != acc {
        return Err(ChernError::EscapesM(m));
    }
    let sp = cyclic_word_space(&es.row.ring, m + 1);
    Ok(TensorElem::from_flat(sp, &coords))
}

/// Apply one linear map to every slot of a flat mixed-radix vector,
/// slot by slot with merging between steps.
fn transform_slots(
    v: &SparseVec,
    arity: usize,
    in_dim: usize,
    out_dim: usize,
    map: &SparseMat,
) -> SparseVec {
    debug_assert_eq!(map.cols(), in_dim);
    debug_assert_eq!(map.rows(), out_dim);
    let mut cur = v.clone();
    for s in 0..arity {
        // dims: slots < s already out_dim, slot s in_dim, higher slots in_dim
        let tail_in = in_dim.pow((arity - s - 1) as u32);
        let mut next = SparseVec::new();
        for (flat, c) in &cur {
            let tail = flat % tail_in;
            let rest = flat / tail_in;
            let digit = rest % in_dim;
            let head = rest / in_dim;
            for (r, w) in map.column(digit) {
                let nf = (head * out_dim + r) * tail_in + tail;
                let cw = c * &w;
                match next.get_mut(&nf) {
                    Some(e) => {
                        *e += &cw;
                        if e.is_zero() {
                            next.remove(&nf);
                        }
                    }
                    None => {
                        if !cw.is_zero() {
                            next.insert(nf, cw);
                        }
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// Both levels of the Chern-Weil character of a cotrace.
#[derive(Debug)]
pub struct ChernWeil {
    /// The 2n-cycle in Tot CC(M) (M with its ε-multiplication).
    pub m_level: CharacterClass,
    /// Its push along ε_M into Tot CC(B).
    pub b_level: CharacterClass,
}

/// The Chern-Weil homomorphism at a cotrace: build the K-sequence c_m(ℓ)(c)
/// in the row-extension ring M (Lemmas on cyclic symmetry and faces are the
/// K-sequence certificates), apply the abstract character, then push to B.
pub fn chern_weil(
    ca: &ComoduleAlgebra,
    es: &ESCoring,
    ell: &StrongConnection,
    c: &Cotrace,
    n: usize,
) -> Result<ChernWeil, ChernError> {
    let mut terms = Vec::with_capacity(2 * n + 1);
    for m in 0..=2 * n {
        terms.push(chw_chain(ca, es, ell, c, m)?);
    }
    let ks = KSequence {
        ambient: es.row.ring.clone(),
        terms,
    };
    let m_level = abstract_character(&ks, n)?;
    // ε-push: slotwise ε_M on every component
    let mut cycle = CyclicChain::new(2 * n);
    for (m, comp) in &m_level.cycle.components {
        let flat = comp.to_flat();
        let pushed = transform_slots(
            &flat,
            m + 1,
            es.dim_m(),
            es.b.algebra.dim(),
            &es.eps,
        );
        let sp = cyclic_word_space(&es.b.algebra, m + 1);
        cycle.set_component(*m, TensorElem::from_flat(sp, &pushed));
    }
    let mut report = CertificateSet::new();
    let is_cycle = n == 0 || total_boundary(&es.b.algebra, &cycle).components.is_empty();
    report.push(Certificate::of(
        "chern_weil.base_cycle",
        is_cycle,
        "ε-push is not a cycle",
    ));
    if !report.all_pass() {
        return Err(ChernError::BadKSequence {
            condition: "ε-push cycle",
            m: 2 * n,
            face: String::new(),
        });
    }
    Ok(ChernWeil {
        m_level,
        b_level: CharacterClass {
            ambient: es.b.algebra.clone(),
            n,
            cycle,
            report,
        },
    })
}

/// The associated idempotent of a comodule through a strong connection.
///
/// For ℓ(c_{ij}) = Σ_a u^{(ij)}_a ⊗ v^{(ij)}_a (minimal echelon
/// presentations), E is indexed by pairs ((i,j), a) with
/// E_{((i,j),a),((k,l),b)} = δ_{jk} · v^{(ij)}_a u^{(kl)}_b. Then E² = E
/// follows from m∘ℓ = ε(−)1, every entry lies in B (certified), and the
/// trace powers of E reproduce the Chern-Galois expression verbatim.
#[derive(Debug)]
pub struct AssociatedIdempotent {
    pub mat: MatrixAlgebra,
    /// E as an element of M_s(B).
    pub e: SparseVec,
    /// Index layout: (comodule pair (i,j), presentation index a) per slot.
    pub layout: Vec<(usize, usize, usize)>,
    pub report: CertificateSet,
}

pub fn associated_idempotent(
    ca: &ComoduleAlgebra,
    es: &ESCoring,
    ell: &StrongConnection,
    v: &Comodule,
) -> Result<AssociatedIdempotent, ChernError> {
    v.check(&ca.coalg)?;
    let da = ca.alg.dim();
    let field = ca.field();
    let nn = v.dim;
    // minimal echelon presentation of each ℓ(c_{ij}):
    // rows of the coefficient matrix W(x, y) reduced; u_a = Σ_x W[x][p_a] e_x,
    // v_a = echelon row a
    let mut pres: Vec<Vec<(SparseVec, SparseVec)>> = Vec::with_capacity(nn * nn);
    for i in 0..nn {
        for j in 0..nn {
            let mut lc = SparseVec::new();
            for (k, coe) in &v.matrix[i][j] {
                axpy(&mut lc, coe, &ell.ell[*k]);
            }
            // W as rows indexed by the first leg
            let mut rows: Vec<SparseVec> = vec![SparseVec::new(); da];
            for (f, c) in &lc {
                rows[f / da].insert(f % da, c.clone());
            }
            let mut ech = crate::exactlin::Echelon::new(da);
            for r in &rows {
                ech.insert_row(r.clone());
            }
            let pivots = ech.pivot_cols();
            let vlegs: Vec<SparseVec> = ech.rows_iter().map(|(_, r)| r.clone()).collect();
            let mut ulegs: Vec<SparseVec> = vec![SparseVec::new(); vlegs.len()];
            for (x, row) in rows.iter().enumerate() {
                for (a, p) in pivots.iter().enumerate() {
                    if let Some(cf) = row.get(p) {
                        ulegs[a].insert(x, cf.clone());
                    }
                }
            }
            pres.push(ulegs.into_iter().zip(vlegs).collect());
        }
    }
    let mut layout = Vec::new();
    for i in 0..nn {
        for j in 0..nn {
            for a in 0..pres[i * nn + j].len() {
                layout.push((i, j, a));
            }
        }
    }
    let size = layout.len();
    let mut report = CertificateSet::new();
    let b = &es.b;
    let mat = matrix_algebra(&b.algebra, size.max(1))?;
    let mut e = SparseVec::new();
    for (r, &(i, jj, a)) in layout.iter().enumerate() {
        for (cpos, &(k, l, bb)) in layout.iter().enumerate() {
            if jj != k {
                continue;
            }
            let (_, vleg) = &pres[i * nn + jj][a];
            let (uleg, _) = &pres[k * nn + l][bb];
            let prod = ca.alg.product(vleg, uleg);
            if prod.is_empty() {
                continue;
            }
            match b.coords(&prod) {
                Some(bv) => {
                    for (t, c) in bv {
                        add_to(&mut e, mat.flat(r, cpos, t), &c);
                    }
                }
                None => return Err(ChernError::EntryNotInB(r, cpos)),
            }
        }
    }
    report.push(Certificate::pass("associated.entries_in_B"));
    let ee = mat.algebra.product(&e, &e);
    report.push(Certificate::of(
        "associated.idempotent",
        ee == e,
        "E² ≠ E",
    ));
    if ee != e {
        return Err(ChernError::NotIdempotent);
    }
    let _ = field;
    Ok(AssociatedIdempotent {
        mat,
        e,
        layout,
        report,
    })
}

fn add_to(v: &mut SparseVec, k: usize, c: &Scalar) {
    match v.get_mut(&k) {
        Some(e) => {
            *e += c;
            if e.is_zero() {
                v.remove(&k);
            }
        }
        None => {
            if !c.is_zero() {
                v.insert(k, c.clone());
            }
        }
    }
}

/// The Chern-Galois expression: the ε-push of c_m(ℓ)(χ(V)) computed directly
/// from the comodule matrix, independent of the ES-coring machinery:
/// Σ c^{⟨2⟩}_{i₁i₂} c^{⟨1⟩}_{i₂i₃} ⊗ c^{⟨2⟩}_{i₂i₃} c^{⟨1⟩}_{i₃i₄} ⊗ … ,
/// expressed in B coordinates.
pub fn chern_galois_expression(
    ca: &ComoduleAlgebra,
    es: &ESCoring,
    ell: &StrongConnection,
    v: &Comodule,
    m: usize,
) -> Result<TensorElem, ChernError> {
    let da = ca.alg.dim();
    let nn = v.dim;
    let db = es.b.algebra.dim();
    let mut acc = SparseVec::new();
    let mut tuple = vec![0usize; m + 1];
    loop {
        // expand ℓ(c_{i_k i_{k+1}}) once per k, pairing v-leg of slot k with
        // u-leg of slot k+1 (cyclically): term value per A-word
        let mut ells: Vec<&SparseVec> = Vec::with_capacity(m + 1);
        let mut lcs: Vec<SparseVec> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let (i, j) = (tuple[k], tuple[(k + 1) % (m + 1)]);
            let mut lc = SparseVec::new();
            for (t, coe) in &v.matrix[i][j] {
                axpy(&mut lc, coe, &ell.ell[*t]);
            }
            lcs.push(lc);
        }
        for lc in &lcs {
            ells.push(lc);
        }
        let mut terms: Vec<(Vec<usize>, Scalar)> =
            vec![(Vec::new(), ca.field().one())];
        for lc in &lcs {
            let mut next = Vec::with_capacity(terms.len() * lc.len().max(1));
            for (word, c) in &terms {
                for (f, x) in lc.iter() {
                    let mut w = word.clone();
                    w.push(f / da);
                    w.push(f % da);
                    next.push((w, c * x));
                }
            }
            terms = next;
            if terms.is_empty() {
                break;
            }
        }
        for (word, c) in terms {
            // slot k of the product: v-leg(k) · u-leg(k+1): word layout is
            // (u_0, v_0, u_1, v_1, …); multiply v_k with u_{k+1 mod m+1}
            let mut word_products: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), c)];
            for k in 0..=m {
                let vleg = word[2 * k + 1];
                let uleg = word[2 * ((k + 1) % (m + 1))];
                let prod = ca.alg.product(
                    &SparseVec::from([(vleg, ca.field().one())]),
                    &SparseVec::from([(uleg, ca.field().one())]),
                );
                let mut next = Vec::with_capacity(word_products.len() * prod.len().max(1));
                for (wp, cc) in &word_products {
                    for (r, x) in &prod {
                        let mut w2 = wp.clone();
                        w2.push(*r);
                        next.push((w2, cc * x));
                    }
                }
                word_products = next;
                if word_products.is_empty() {
                    break;
                }
            }
            for (aw, cc) in word_products {
                let mut flat = 0usize;
                for &l in &aw {
                    flat = flat * da + l;
                }
                add_to(&mut acc, flat, &cc);
            }
        }
        // next tuple
        let mut k = 0;
        loop {
            if k > m {
                // done: express in B coordinates slotwise
                let coords = transform_slots(&acc, m + 1, da, db, &es.b.project);
                let back = transform_slots(&coords, m + 1, db, da, &es.b.embed);
                if back != acc {
                    return Err(ChernError::EscapesM(m));
                }
                let sp = cyclic_word_space(&es.b.algebra, m + 1);
                return Ok(TensorElem::from_flat(sp, &coords));
            }
            tuple[k] += 1;
            if tuple[k] < nn {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
    }
}

/// The factorization diagram: (a) the ε-pushed Chern-Weil chains of χ(V),
/// (b) the direct Chern-Galois expression, (c) the idempotent Chern
/// character of the associated idempotent. Certifies (a) = (b) exactly and
/// (a) ~ (c) with an explicit witness.
#[derive(Debug)]
pub struct Factorization {
    pub chw: ChernWeil,
    pub idempotent: AssociatedIdempotent,
    pub idempotent_chern: IdempotentChern,
    pub witness: Option<SparseVec>,
    pub report: CertificateSet,
}

pub fn verify_factorization(
    ca: &ComoduleAlgebra,
    es: &ESCoring,
    ell: &StrongConnection,
    v: &Comodule,
    n: usize,
) -> Result<Factorization, ChernError> {
    let chi = comodule_character(&ca.coalg, v)?;
    let chw = chern_weil(ca, es, ell, &chi, n)?;
    let mut report = CertificateSet::new();
    // (a) = (b) coordinatewise, per m
    let weights = character_weights(&ca.field(), 2 * n);
    for m in 0..=2 * n {
        let direct = chern_galois_expression(ca, es, ell, v, m)?.scale(&weights[m]);
        let from_chw = chw
            .b_level
            .cycle
            .component(m)
            .cloned()
            .unwrap_or_else(|| TensorElem::zero(cyclic_word_space(&es.b.algebra, m + 1)));
        report.push(Certificate::of(
            format!("factorization.eps_push_matches_direct(m = {m})"),
            direct == from_chw,
            "ε-pushed chw chain differs from the Chern-Galois expression",
        ));
    }
    // (c) associated idempotent and its Chern character
    let idem = associated_idempotent(ca, es, ell, v)?;
    let ic = idempotent_chern(&idem.mat, &idem.e, n)?;
    // homologous witness between (a) and (c) at the B level
    let tot = tot_cc(&es.b.algebra, CcMode::Full, 2 * n + 1);
    let witness = homologous(&chw.b_level.cycle, &ic.base_level.cycle, &tot)?;
    report.push(Certificate::of(
        "factorization.homologous_to_idempotent_chern",
        witness.is_some(),
        "no boundary witness found",
    ));
    Ok(Factorization {
        chw,
        idempotent: idem,
        idempotent_chern: ic,
        witness,
        report,
    })
}

/// Outcome of the connection-independence check.
#[derive(Debug, PartialEq, Eq)]
pub enum IndependenceVerdict {
    /// Classes agree, with explicit witnesses per requested degree.
    Homologous,
    /// C lacks enough characters to run the argument for this cotrace.
    NotDecidable,
}

#[derive(Debug)]
pub struct Independence {
    pub verdict: IndependenceVerdict,
    pub witnesses: Vec<Option<SparseVec>>,
    pub report: CertificateSet,
}

/// Certify that two strong connections give homologous Chern-Weil classes on
/// a cotrace. If the cotrace is not a linear combination of the supplied
/// characters, the argument of the independence proposition does not apply
/// and the verdict is `NotDecidable` (no certificate is fabricated).
pub fn connection_independence(
    ca: &ComoduleAlgebra,
    es: &ESCoring,
    can: &CanonicalData,
    ent: &Entwining,
    c: &Cotrace,
    comodules: &[Comodule],
    ell1: &StrongConnection,
    ell2: &StrongConnection,
    n: usize,
) -> Result<Independence, ChernError> {
    let mut report = CertificateSet::new();
    // both inputs must verify as connections (unitality not required here)
    report.extend(verify_connection(ca, can, ent, &ell1.ell, false));
    report.extend(verify_connection(ca, can, ent, &ell2.ell, false));
    // is c in the span of the supplied characters?
    let db = ca.coalg.dim();
    let mut span = SparseMat::zero(db, comodules.len().max(1));
    for (k, v) in comodules.iter().enumerate() {
        let chi = comodule_character(&ca.coalg, v)?;
        for (r, x) in &chi.element {
            span.set(*r, k, x.clone());
        }
    }
    if span.solve_affine(&c.element).is_none() {
        report.push(Certificate::of(
            "independence.character_span",
            false,
            "cotrace is outside the span of the supplied characters",
        ));
        return Ok(Independence {
            verdict: IndependenceVerdict::NotDecidable,
            witnesses: Vec::new(),
            report,
        });
    }
    report.push(Certificate::pass("independence.character_span"));
    let mut witnesses = Vec::new();
    let mut all = true;
    for k in 0..=n {
        let a = chern_weil(ca, es, ell1, c, k)?;
        let b = chern_weil(ca, es, ell2, c, k)?;
        let tot = tot_cc(&es.b.algebra, CcMode::Full, 2 * k + 1);
        let w = homologous(&a.b_level.cycle, &b.b_level.cycle, &tot)?;
        report.push(Certificate::of(
            format!("independence.homologous(n = {k})"),
            w.is_some(),
            "no witness found",
        ));
        all &= w.is_some();
        witnesses.push(w);
    }
    Ok(Independence {
        verdict: if all {
            IndependenceVerdict::Homologous
        } else {
            IndependenceVerdict::NotDecidable
        },
        witnesses,
        report,
    })
}

/// Chain-level Connes periodicity: S(ch_{n+1}) has the same components as
/// ch_n (the weights are n-independent), so the witness is zero. Returns the
/// witness anyway via the boundary solver as a genuine search.
pub fn periodicity_witness(
    class_hi: &CharacterClass,
    class_lo: &CharacterClass,
) -> Result<Option<SparseVec>, ChernError> {
    let s = connes_s(&class_hi.cycle)?;
    let tot = tot_cc(&class_lo.ambient, CcMode::Full, 2 * class_lo.n + 1);
    Ok(homologous(&s, &class_lo.cycle, &tot)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;
    use crate::galois::{
        canonical_map, entwining, es_coring, self_coaction_bundle, solve_strong_connection,
        cyclic_quotient_bundle,
    };
    use crate::structalg::{function_algebra_of_group, ground_field_algebra, GroupTable};

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn character_weights_match_formula() {
        let w = character_weights(&q(), 4);
        // (−1)^{⌊m/2⌋} m!/⌊m/2⌋! for m = 0..4: 1, 1, −2, −6, 12
        let expected: Vec<i64> = vec![1, 1, -2, -6, 12];
        for (m, e) in expected.iter().enumerate() {
            assert_eq!(w[m], q().integer(*e), "weight at m = {m}");
        }
    }

    #[test]
    fn unit_idempotent_character() {
        let b = ground_field_algebra(q());
        let mat = matrix_algebra(&b, 1).unwrap();
        let e = SparseVec::from([(0, q().one())]);
        let ch = idempotent_chern(&mat, &e, 1).unwrap();
        ch.matrix_level.report.assert_all();
        // ch_0 component is e itself
        let c0 = ch.base_level.cycle.component(0).unwrap();
        assert_eq!(c0.coeff(&[0]), Some(&q().one()));
    }

    #[test]
    fn rank_one_projector_same_class_as_unit() {
        let b = ground_field_algebra(q());
        let mat = matrix_algebra(&b, 2).unwrap();
        // e = diag(1, 0)
        let e = mat.elementary(0, 0, &SparseVec::from([(0, q().one())]));
        let ch = idempotent_chern(&mat, &e, 1).unwrap();
        // tr e = 1: same degree-0 component as the unit class
        let c0 = ch.base_level.cycle.component(0).unwrap();
        assert_eq!(c0.coeff(&[0]), Some(&q().one()));
        // S stability on the nose
        let ch0 = idempotent_chern(&mat, &e, 0).unwrap();
        let w = periodicity_witness(&ch.base_level, &ch0.base_level).unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn conjugated_idempotents_are_homologous() {
        let b = ground_field_algebra(q());
        let mat = matrix_algebra(&b, 2).unwrap();
        let one = SparseVec::from([(0, q().one())]);
        let e = mat.elementary(0, 0, &one);
        // γ = permutation matrix: γeγ⁻¹ = diag(0, 1)
        let mut gamma = SparseVec::new();
        for (i, j) in [(0usize, 1usize), (1, 0)] {
            for (f, c) in mat.elementary(i, j, &one) {
                gamma.insert(f, c);
            }
        }
        let gamma_inv = gamma.clone(); // involution
        let conj = mat
            .algebra
            .product(&mat.algebra.product(&gamma, &e), &gamma_inv);
        assert_ne!(conj, e);
        let ch_e = idempotent_chern(&mat, &e, 1).unwrap();
        let ch_c = idempotent_chern(&mat, &conj, 1).unwrap();
        let tot = tot_cc(&b, CcMode::Full, 3);
        let w = homologous(&ch_e.base_level.cycle, &ch_c.base_level.cycle, &tot).unwrap();
        assert!(w.is_some(), "conjugate idempotents must be homologous");
    }

    #[test]
    fn bad_ksequence_is_rejected() {
        let b = ground_field_algebra(q());
        let mat = matrix_algebra(&b, 2).unwrap();
        let one = SparseVec::from([(0, q().one())]);
        let e12 = mat.elementary(0, 1, &one);
        assert!(matches!(
            idempotent_chern(&mat, &e12, 0),
            Err(ChernError::NotIdempotent)
        ));
    }

    fn kz2_setup() -> (
        ComoduleAlgebra,
        CanonicalData,
        Entwining,
        StrongConnection,
        ESCoring,
    ) {
        let h = function_algebra_of_group(&GroupTable::cyclic(2), q()).unwrap();
        let ca = self_coaction_bundle(&h).unwrap();
        let can = canonical_map(&ca).unwrap();
        let ent = entwining(&ca, &can).unwrap();
        let (conn, _) = solve_strong_connection(&ca, &can, &ent, true).unwrap();
        let es = es_coring(&ca, &can, &ent, &conn).unwrap();
        (ca, can, ent, conn, es)
    }

    fn z4_setup() -> (
        ComoduleAlgebra,
        CanonicalData,
        Entwining,
        StrongConnection,
        ESCoring,
    ) {
        let ca = cyclic_quotient_bundle(4, 2, q()).unwrap();
        let can = canonical_map(&ca).unwrap();
        let ent = entwining(&ca, &can).unwrap();
        let (conn, _) = solve_strong_connection(&ca, &can, &ent, true).unwrap();
        let es = es_coring(&ca, &can, &ent, &conn).unwrap();
        (ca, can, ent, conn, es)
    }

    fn sign_comodule() -> Comodule {
        // δ_1 − δ_g is the nontrivial grouplike of k^{Z/2}
        let s: SparseVec = [(0, q().one()), (1, q().integer(-1))].into();
        Comodule::from_grouplike(&s)
    }

    #[test]
    fn chw_chain_at_grouplike_unit_is_one_tensor_one() {
        let (ca, _can, _ent, conn, es) = kz2_setup();
        let e = ca.coalg.grouplike().unwrap().clone();
        let c = Cotrace { element: e };
        let x0 = chw_chain(&ca, &es, &conn, &c, 0).unwrap();
        // ℓ(e) = 1⊗1 flipped is 1⊗1; in M coordinates ε_M of it is 1_B
        let flat = x0.to_flat();
        let pushed = transform_slots(&flat, 1, es.dim_m(), es.b.algebra.dim(), &es.eps);
        let one_b: SparseVec = es.b.algebra.unit().unwrap().clone();
        assert_eq!(pushed, one_b);
    }

    #[test]
    fn chw_chain_m0_is_flip_of_ell() {
        let (ca, _can, _ent, conn, es) = kz2_setup();
        let sign = sign_comodule();
        let chi = comodule_character(&ca.coalg, &sign).unwrap();
        let x0 = chw_chain(&ca, &es, &conn, &chi, 0).unwrap();
        // flip of ℓ(c) expressed in M coordinates
        let da = 2;
        let mut flipped = SparseVec::new();
        let mut lc = SparseVec::new();
        for (k, coe) in &chi.element {
            axpy(&mut lc, coe, &conn.ell[*k]);
        }
        for (f, c) in &lc {
            flipped.insert((f % da) * da + f / da, c.clone());
        }
        let expected = es.m_project.apply(&flipped);
        assert_eq!(x0.to_flat(), expected);
    }

    #[test]
    fn kz2_chern_weil_degree_zero_counts_dimension() {
        let (ca, _can, _ent, conn, es) = kz2_setup();
        let sign = sign_comodule();
        let chi = comodule_character(&ca.coalg, &sign).unwrap();
        let chw = chern_weil(&ca, &es, &conn, &chi, 0).unwrap();
        chw.m_level.report.assert_all();
        chw.b_level.report.assert_all();
        // chw_0 = dim(V)·1 ∈ HC_0(k)
        let c0 = chw.b_level.cycle.component(0).unwrap();
        assert_eq!(c0.coeff(&[0]), Some(&q().one()));
    }

    #[test]
    fn kz2_factorization_diagram() {
        let (ca, _can, _ent, conn, es) = kz2_setup();
        let sign = sign_comodule();
        for n in 0..=1 {
            let f = verify_factorization(&ca, &es, &conn, &sign, n).unwrap();
            f.report.assert_all();
            // the associated idempotent is 1×1, the unit of B
            assert_eq!(f.idempotent.layout.len(), 1);
            let entry = f.idempotent.mat.entry(&f.idempotent.e, 0, 0);
            assert_eq!(entry, *es.b.algebra.unit().unwrap());
        }
    }

    #[test]
    fn z4_chern_weil_cycles_and_symmetries() {
        let (ca, _can, _ent, conn, es) = z4_setup();
        let sign = sign_comodule();
        let chi = comodule_character(&ca.coalg, &sign).unwrap();
        // Lemma-level checks for all m ≤ 4 happen inside KSequence::verify
        // via chern_weil at n = 2
        let chw = chern_weil(&ca, &es, &conn, &chi, 2).unwrap();
        chw.m_level.report.assert_all();
        chw.b_level.report.assert_all();
        // S[chw_1] homologous to [chw_0]
        let chw1 = chern_weil(&ca, &es, &conn, &chi, 1).unwrap();
        let chw0 = chern_weil(&ca, &es, &conn, &chi, 0).unwrap();
        let w = periodicity_witness(&chw1.b_level, &chw0.b_level).unwrap();
        assert!(w.is_some());
        let wm = periodicity_witness(&chw1.m_level, &chw0.m_level).unwrap();
        assert!(wm.is_some());
    }

    #[test]
    fn z4_factorization_diagram() {
        let (ca, _can, _ent, conn, es) = z4_setup();
        let sign = sign_comodule();
        for n in 0..=1 {
            let f = verify_factorization(&ca, &es, &conn, &sign, n).unwrap();
            f.report.assert_all();
        }
        // trivial comodule: all three equal the unit class
        let e = ca.coalg.grouplike().unwrap().clone();
        let triv = Comodule::from_grouplike(&e);
        let f = verify_factorization(&ca, &es, &conn, &triv, 0).unwrap();
        f.report.assert_all();
        assert_eq!(f.idempotent.layout.len(), 1);
    }

    #[test]
    fn z4_associated_idempotent_is_rank_one_fiberwise() {
        let (ca, _can, _ent, conn, es) = z4_setup();
        let sign = sign_comodule();
        let idem = associated_idempotent(&ca, &es, &conn, &sign).unwrap();
        idem.report.assert_all();
        // size of E is the rank of the presentation of ℓ(χ), which depends on
        // the connection the solver picked; fiberwise E is a rank-one
        // projector either way: tr E = 1_B
        let size = idem.layout.len();
        assert!(size >= 1);
        let mut tr = SparseVec::new();
        for r in 0..size {
            axpy(&mut tr, &q().one(), &idem.mat.entry(&idem.e, r, r));
        }
        assert_eq!(tr, *es.b.algebra.unit().unwrap());
    }

    #[test]
    fn connection_independence_on_z4() {
        let ca = cyclic_quotient_bundle(4, 2, q()).unwrap();
        let can = canonical_map(&ca).unwrap();
        let ent = entwining(&ca, &can).unwrap();
        let (conn, system) = solve_strong_connection(&ca, &can, &ent, true).unwrap();
        let es = es_coring(&ca, &can, &ent, &conn).unwrap();
        let other = StrongConnection {
            ell: system.point(&[1, -1], &q()),
            report: CertificateSet::new(),
        };
        assert_ne!(other.ell, conn.ell);
        let sign = sign_comodule();
        let chi = comodule_character(&ca.coalg, &sign).unwrap();
        let e = ca.coalg.grouplike().unwrap().clone();
        let comods = vec![Comodule::from_grouplike(&e), sign];
        let out = connection_independence(
            &ca, &es, &can, &ent, &chi, &comods, &conn, &other, 1,
        )
        .unwrap();
        assert_eq!(out.verdict, IndependenceVerdict::Homologous);
        out.report.assert_all();
    }

    #[test]
    fn independence_not_decidable_without_enough_characters() {
        // k^{S3} coalgebra: a class function outside the span of the trivial
        // character alone
        let (ca, _can, _ent, conn, es) = kz2_setup();
        let sign = sign_comodule();
        let chi = comodule_character(&ca.coalg, &sign).unwrap();
        // supply only the trivial comodule: sign character is outside span
        let e = ca.coalg.grouplike().unwrap().clone();
        let comods = vec![Comodule::from_grouplike(&e)];
        let can = canonical_map(&ca).unwrap();
        let ent = entwining(&ca, &can).unwrap();
        let out = connection_independence(
            &ca, &es, &can, &ent, &chi, &comods, &conn, &conn, 0,
        )
        .unwrap();
        assert_eq!(out.verdict, IndependenceVerdict::NotDecidable);
    }

    #[test]
    fn trivial_connection_pair_gives_zero_witness() {
        let (ca, can, ent, conn, es) = kz2_setup();
        let sign = sign_comodule();
        let chi = comodule_character(&ca.coalg, &sign).unwrap();
        let e = ca.coalg.grouplike().unwrap().clone();
        let comods = vec![Comodule::from_grouplike(&e), sign];
        let out = connection_independence(
            &ca, &es, &can, &ent, &chi, &comods, &conn, &conn, 1,
        )
        .unwrap();
        assert_eq!(out.verdict, IndependenceVerdict::Homologous);
    }
}
