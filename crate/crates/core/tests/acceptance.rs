//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and asserting its wall-clock budget. All arithmetic checks are exact
//! (zero tolerance); class-level statements are certified by explicit
//! boundary witnesses, never by dimension counting.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use cychom_core::chainkit::{
    conjugation_homotopy, homology_dims, kill_contractible, matrix_stability, tot_cc, CcMode,
};
use cychom_core::chern::{
    chern_weil, periodicity_witness, verify_factorization, IndependenceVerdict,
};
use cychom_core::exactlin::FieldSpec;
use cychom_core::galois::{
    canonical_map, cyclic_quotient_bundle, entwining, es_coring, self_coaction_bundle,
    solve_strong_connection, verify_connection, ComoduleAlgebra, StrongConnection,
};
use cychom_core::rowext::{epsilon_chain_map, kernel_contraction};
use cychom_core::structalg::{
    function_algebra_of_group, ground_field_algebra, matrix_algebra, product_field_algebra,
    triangular_algebra, GroupTable,
};
use cychom_core::structcoalg::{comodule_character, cotrace_basis, enough_characters, Comodule};
use cychom_core::SparseVec;
use std::time::Instant;

fn q() -> FieldSpec {
    FieldSpec::Q
}

fn budget(name: &str, started: Instant, limit_s: u64) {
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < limit_s,
        "{name} exceeded its {limit_s}s budget ({elapsed:?})"
    );
}

/// Criterion 1: killing contractible complexes on 100 seeded random
/// graded-split short exact sequences; all three output certificates exact.
#[test]
fn criterion_1_kill_contractible_100_seeds() {
    let started = Instant::now();
    let mut passes = 0;
    for seed in 0..100u64 {
        let data = cychom_core::chainkit::randomized::random_split_exact(seed, 4);
        let out = kill_contractible(&data).expect("preconditions hold by construction");
        if out.report.all_pass() {
            passes += 1;
        } else {
            panic!(
                "seed {seed}: {}",
                out.report.first_failure().unwrap()
            );
        }
    }
    budget("criterion 1", started, 10);
    assert_eq!(passes, 100);
    println!(
        "criterion 1: PASS — kill-contractible certificates exact on {passes}/100 seeds ({:?})",
        started.elapsed()
    );
}

/// Criterion 2: bh + hb = Id on ker(ε^{⊗•+1}) through degree 4 for the ES
/// coring of the ℤ/4 bundle and for 20 random augmented modules; Hochschild
/// and cyclic homology dimensions transfer across ε.
#[test]
fn criterion_2_row_extension_contraction() {
    let started = Instant::now();
    // the ES coring of the Z/4-over-Z/2 bundle
    let ca = cyclic_quotient_bundle(4, 2, q()).unwrap();
    let can = canonical_map(&ca).unwrap();
    let ent = entwining(&ca, &can).unwrap();
    let (conn, _) = solve_strong_connection(&ca, &can, &ent, true).unwrap();
    let es = es_coring(&ca, &can, &ent, &conn).unwrap();
    let contraction = kernel_contraction(&es.row, 4).unwrap();
    contraction.report.assert_all();
    assert_eq!(contraction.kernel_dims[4], 8usize.pow(5) - 2usize.pow(5));
    let hm = homology_dims(&tot_cc(&es.row.ring, CcMode::Cc1, 4).complex);
    let hb = homology_dims(&tot_cc(&es.row.base, CcMode::Cc1, 4).complex);
    assert_eq!(&hm[..4], &hb[..4], "HH dims of M and B disagree");
    let cm = homology_dims(&tot_cc(&es.row.ring, CcMode::Full, 4).complex);
    let cb = homology_dims(&tot_cc(&es.row.base, CcMode::Full, 4).complex);
    assert_eq!(&cm[..4], &cb[..4], "HC dims of M and B disagree");
    // 20 random augmented modules (dim M ≤ 4)
    for seed in 0..20u64 {
        let re = cychom_core::rowext::randomized::random_row_extension(seed);
        assert!(re.ring.dim() <= 4);
        let rep = kernel_contraction(&re, 4).unwrap();
        rep.report.assert_all();
        let out = epsilon_chain_map(&re, CcMode::Cc1, 3, true).unwrap();
        out.report.assert_all();
        let hm = homology_dims(&out.tot_m.complex);
        let hb = homology_dims(&out.tot_b.complex);
        assert_eq!(&hm[..3], &hb[..3], "seed {seed}: HH dims disagree");
        let cm = homology_dims(&tot_cc(&re.ring, CcMode::Full, 4).complex);
        let cb = homology_dims(&tot_cc(&re.base, CcMode::Full, 4).complex);
        assert_eq!(&cm[..4], &cb[..4], "seed {seed}: HC dims disagree");
    }
    budget("criterion 2", started, 60);
    println!(
        "criterion 2: PASS — contraction exact through degree 4 on the ES coring and 20 random modules; HH/HC dims transfer ({:?})",
        started.elapsed()
    );
}

/// Criterion 3: cyclic-homology oracles for ℚ, k², and the triangular
/// algebra [[k², k],[0, k]].
#[test]
fn criterion_3_cyclic_homology_oracles() {
    let started = Instant::now();
    let hq = homology_dims(&tot_cc(&ground_field_algebra(q()), CcMode::Full, 5).complex);
    assert_eq!(&hq[..5], &[1, 0, 1, 0, 1], "HC(Q)");
    let hk2 = homology_dims(&tot_cc(&product_field_algebra(2, q()), CcMode::Full, 5).complex);
    assert_eq!(&hk2[..5], &[2, 0, 2, 0, 2], "HC(k²)");
    // HH of the triangular algebra equals HH(k²) ⊕ HH(k) through degree 3
    let b = product_field_algebra(2, q());
    let k = ground_field_algebra(q());
    let f = q();
    let t = triangular_algebra(
        &b,
        &k,
        1,
        |i, _| {
            if i == 0 {
                SparseVec::from([(0, f.one())])
            } else {
                SparseVec::new()
            }
        },
        |_, _| SparseVec::from([(0, f.one())]),
    )
    .unwrap();
    let ht = homology_dims(&tot_cc(&t, CcMode::Cc1, 4).complex);
    let hb = homology_dims(&tot_cc(&b, CcMode::Cc1, 4).complex);
    let hk = homology_dims(&tot_cc(&k, CcMode::Cc1, 4).complex);
    for n in 0..4 {
        assert_eq!(ht[n], hb[n] + hk[n], "HH(T) ≠ HH(k²) ⊕ HH(k) at degree {n}");
    }
    budget("criterion 3", started, 10);
    println!(
        "criterion 3: PASS — HC(Q) = {:?}, HC(k²) = {:?}, HH(triangular) = HH(k²)⊕HH(k) through degree 3 ({:?})",
        &hq[..5],
        &hk2[..5],
        started.elapsed()
    );
}

/// Criterion 4: matrix stability for M₂(ℚ) and M₂(k²) through degree 3, and
/// conjugation homotopies for 10 random invertible γ.
#[test]
fn criterion_4_matrix_stability_and_conjugation() {
    let started = Instant::now();
    for (name, alg) in [
        ("M2(Q)", ground_field_algebra(q())),
        ("M2(k2)", product_field_algebra(2, q())),
    ] {
        let out = matrix_stability(&alg, 2, 3).unwrap();
        assert!(out.report.all_pass(), "{name}: {}", out.report.first_failure().unwrap());
    }
    let b = ground_field_algebra(q());
    let mat = matrix_algebra(&b, 2).unwrap();
    use rand::SeedableRng;
    for seed in 0..10u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = cychom_core::chainkit::randomized::random_invertible(&mut rng, 2, &q());
        let mut gamma = SparseVec::new();
        for (i, j, c) in g.iter() {
            gamma.insert(mat.flat(i, j, 0), c.clone());
        }
        let out = conjugation_homotopy(&mat, &gamma, 2).unwrap();
        out.report.assert_all();
    }
    budget("criterion 4", started, 30);
    println!(
        "criterion 4: PASS — tr∘inc = 1 and 1 − inc∘tr = dh + hd exact through degree 3; 10/10 conjugation homotopies exact through degree 2 ({:?})",
        started.elapsed()
    );
}

/// Criterion 5: dim C^tr(k^G) equals the number of conjugacy classes for all
/// groups of order ≤ 8, and the two characters of k^{ℤ/2} span its cotraces.
#[test]
fn criterion_5_cotrace_oracle() {
    let started = Instant::now();
    let groups = GroupTable::all_up_to_order_8();
    for (name, g) in &groups {
        let classes = g.conjugacy_classes().len();
        let c = function_algebra_of_group(g, q()).unwrap().coalgebra;
        assert_eq!(
            cotrace_basis(&c).len(),
            classes,
            "cotrace dimension of k^{name} differs from its class count"
        );
    }
    let c = function_algebra_of_group(&GroupTable::cyclic(2), q())
        .unwrap()
        .coalgebra;
    let triv: SparseVec = [(0, q().one()), (1, q().one())].into();
    let sign: SparseVec = [(0, q().one()), (1, q().integer(-1))].into();
    let comods = vec![
        Comodule::from_grouplike(&triv),
        Comodule::from_grouplike(&sign),
    ];
    assert!(enough_characters(&c, &comods).unwrap());
    budget("criterion 5", started, 10);
    println!(
        "criterion 5: PASS — cotrace dimension = class count for all {} groups of order ≤ 8; characters of k^(Z/2) span C^tr ({:?})",
        groups.len(),
        started.elapsed()
    );
}

fn z4_setup() -> (
    ComoduleAlgebra,
    cychom_core::galois::CanonicalData,
    cychom_core::galois::Entwining,
    StrongConnection,
    cychom_core::galois::ESCoring,
) {
    let ca = cyclic_quotient_bundle(4, 2, q()).unwrap();
    let can = canonical_map(&ca).unwrap();
    let ent = entwining(&ca, &can).unwrap();
    let (conn, _) = solve_strong_connection(&ca, &can, &ent, true).unwrap();
    let es = es_coring(&ca, &can, &ent, &conn).unwrap();
    (ca, can, ent, conn, es)
}

fn sign_comodule() -> Comodule {
    let s: SparseVec = [(0, q().one()), (1, q().integer(-1))].into();
    Comodule::from_grouplike(&s)
}

/// Criterion 6: the Chern-Weil theorem on the ℤ/4 bundle: exact 2n-cycles in
/// Tot CC(M) and Tot CC(B) for n ∈ {0,1}; cyclic symmetry and face
/// identities exact for all m ≤ 4; S[chw₁] homologous to [chw₀].
#[test]
fn criterion_6_chern_weil_theorem() {
    let started = Instant::now();
    let (ca, _can, _ent, conn, es) = z4_setup();
    let chi = comodule_character(&ca.coalg, &sign_comodule()).unwrap();
    // cyclic symmetry and the face identities for all m ≤ 4 are exactly the
    // K-sequence certificates of the degree-4 chain family
    let mut terms = Vec::new();
    for m in 0..=4 {
        terms.push(cychom_core::chern::chw_chain(&ca, &es, &conn, &chi, m).unwrap());
    }
    let ks = cychom_core::chern::KSequence {
        ambient: es.row.ring.clone(),
        terms,
    };
    ks.verify().expect("cyclic symmetry and face identities exact for m ≤ 4");
    // exact cycles at both levels for n ∈ {0, 1}
    let chw0 = chern_weil(&ca, &es, &conn, &chi, 0).unwrap();
    let chw1 = chern_weil(&ca, &es, &conn, &chi, 1).unwrap();
    for chw in [&chw0, &chw1] {
        chw.m_level.report.assert_all();
        chw.b_level.report.assert_all();
    }
    // S[chw₁] homologous to [chw₀], explicit witnesses at both levels
    let wb = periodicity_witness(&chw1.b_level, &chw0.b_level).unwrap();
    assert!(wb.is_some(), "no S-witness over B");
    let wm = periodicity_witness(&chw1.m_level, &chw0.m_level).unwrap();
    assert!(wm.is_some(), "no S-witness over M");
    budget("criterion 6", started, 120);
    println!(
        "criterion 6: PASS — chw cycles exact at both levels for n ≤ 1; cyclic symmetry and face identities exact for m ≤ 4; S[chw₁] ~ [chw₀] with witnesses ({:?})",
        started.elapsed()
    );
}

/// Criterion 7: the factorization diagram on (a) the k^{ℤ/2} self-bundle and
/// (b) the ℤ/4 bundle with the sign comodule, n ∈ {0,1}: ε-pushed Chern-Weil
/// chains equal the Chern-Galois expression coordinatewise and are
/// homologous to the idempotent Chern character; chw₀ over k counts dim V.
#[test]
fn criterion_7_factorization_diagram() {
    let started = Instant::now();
    // (a) B = k, A = k^{Z/2}
    let h = function_algebra_of_group(&GroupTable::cyclic(2), q()).unwrap();
    let ca = self_coaction_bundle(&h).unwrap();
    let can = canonical_map(&ca).unwrap();
    let ent = entwining(&ca, &can).unwrap();
    let (conn, _) = solve_strong_connection(&ca, &can, &ent, true).unwrap();
    let es = es_coring(&ca, &can, &ent, &conn).unwrap();
    let sign = sign_comodule();
    for n in 0..=1 {
        let f = verify_factorization(&ca, &es, &conn, &sign, n).unwrap();
        f.report.assert_all();
    }
    // chw₀ over B = k equals dim(V)·1
    let chi = comodule_character(&ca.coalg, &sign).unwrap();
    let chw0 = chern_weil(&ca, &es, &conn, &chi, 0).unwrap();
    let c0 = chw0.b_level.cycle.component(0).unwrap();
    assert_eq!(c0.coeff(&[0]), Some(&q().one()), "chw₀ ≠ dim(V)·1");
    // (b) the Z/4 bundle
    let (ca2, _can2, _ent2, conn2, es2) = z4_setup();
    for n in 0..=1 {
        let f = verify_factorization(&ca2, &es2, &conn2, &sign, n).unwrap();
        f.report.assert_all();
    }
    budget("criterion 7", started, 120);
    println!(
        "criterion 7: PASS — ε-push = Chern-Galois expression coordinatewise and ~ idempotent character with witnesses, both bundles, n ≤ 1; chw₀ = dim V over k ({:?})",
        started.elapsed()
    );
}

/// Criterion 8: connection independence. For case 7(a) the affine solution
/// space is zero-dimensional — the solver proves the strong connection is
/// unique, so independence of the choice is vacuously certified and the
/// trivial pair gives a zero witness. The same check runs with genuinely
/// distinct connections on the ℤ/4 bundle, whose solution space is
/// 2-dimensional.
#[test]
fn criterion_8_connection_independence() {
    let started = Instant::now();
    // case 7(a): uniqueness certificate
    let h = function_algebra_of_group(&GroupTable::cyclic(2), q()).unwrap();
    let ca = self_coaction_bundle(&h).unwrap();
    let can = canonical_map(&ca).unwrap();
    let ent = entwining(&ca, &can).unwrap();
    let (conn, system) = solve_strong_connection(&ca, &can, &ent, true).unwrap();
    assert_eq!(
        system.kernel_dim(),
        0,
        "the k^(Z/2) self-bundle was expected to pin its connection uniquely"
    );
    let es = es_coring(&ca, &can, &ent, &conn).unwrap();
    let sign = sign_comodule();
    let chi = comodule_character(&ca.coalg, &sign).unwrap();
    let triv: SparseVec = [(0, q().one()), (1, q().one())].into();
    let comods = vec![Comodule::from_grouplike(&triv), sign.clone()];
    let out = cychom_core::chern::connection_independence(
        &ca, &es, &can, &ent, &chi, &comods, &conn, &conn, 1,
    )
    .unwrap();
    assert_eq!(out.verdict, IndependenceVerdict::Homologous);
    out.report.assert_all();
    // genuinely distinct connections on the Z/4 bundle
    let ca2 = cyclic_quotient_bundle(4, 2, q()).unwrap();
    let can2 = canonical_map(&ca2).unwrap();
    let ent2 = entwining(&ca2, &can2).unwrap();
    let (conn2, system2) = solve_strong_connection(&ca2, &can2, &ent2, true).unwrap();
    assert!(system2.kernel_dim() >= 1, "expected connection freedom");
    let other = StrongConnection {
        ell: system2.point(&[1, -1], &q()),
        report: Default::default(),
    };
    assert_ne!(other.ell, conn2.ell);
    verify_connection(&ca2, &can2, &ent2, &other.ell, true).assert_all();
    let es2 = es_coring(&ca2, &can2, &ent2, &conn2).unwrap();
    let chi2 = comodule_character(&ca2.coalg, &sign).unwrap();
    let comods2 = vec![Comodule::from_grouplike(&triv), sign.clone()];
    let out2 = cychom_core::chern::connection_independence(
        &ca2, &es2, &can2, &ent2, &chi2, &comods2, &conn2, &other, 1,
    )
    .unwrap();
    assert_eq!(out2.verdict, IndependenceVerdict::Homologous);
    out2.report.assert_all();
    budget("criterion 8", started, 60);
    println!(
        "criterion 8: PASS — 7(a) connection proven unique (independence vacuous, zero witness verified); distinct connections on the ℤ/4 bundle give homologous chw₀, chw₁ with witnesses ({:?})",
        started.elapsed()
    );
}
