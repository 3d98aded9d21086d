//! Command drivers: each loads its inputs, runs the computation, and fills a
//! deterministic report.

use crate::report::{digest_args, digest_bytes, Report};
use crate::schema::{self, Bundle};
use anyhow::{anyhow, bail, Context, Result};
use cychom_core::chainkit::{
    bar_contraction, homology_dims, kill_contractible, tot_cc, CcMode,
};
use cychom_core::chern::{
    chern_weil as core_chern_weil, idempotent_chern, periodicity_witness, verify_factorization,
};
use cychom_core::galois::{
    canonical_map, entwining, es_coring as build_es, row_iso_omega, solve_strong_connection,
    translation_certificates, CanonicalData, Entwining, ESCoring,
    StrongConnection,
};
use cychom_core::rowext::kernel_contraction;
use cychom_core::structcoalg::{comodule_character, cotrace_basis, Cotrace};
use cychom_core::{FieldSpec, SparseVec};
use std::path::Path;

fn read(file: &Path) -> Result<(Vec<u8>, String)> {
    let bytes =
        std::fs::read(file).with_context(|| format!("cannot read {}", file.display()))?;
    let digest = digest_bytes(&bytes);
    Ok((bytes, digest))
}

fn parse_bundle(bytes: &[u8], field_override: &Option<String>) -> Result<Bundle> {
    let mut spec: schema::BundleSpec =
        serde_json::from_slice(bytes).context("malformed JSON")?;
    if field_override.is_some() {
        spec.field = field_override.clone();
    }
    schema::load_bundle(&spec)
}

struct Principal {
    bundle: Bundle,
    can: CanonicalData,
    ent: Entwining,
    conn: StrongConnection,
    es: ESCoring,
}

fn principal_data(bytes: &[u8], field_override: &Option<String>) -> Result<Principal> {
    let bundle = parse_bundle(bytes, field_override)?;
    let can = canonical_map(&bundle.ca).map_err(|e| anyhow!("{e}"))?;
    let ent = entwining(&bundle.ca, &can).map_err(|e| anyhow!("{e}"))?;
    let (conn, _) =
        solve_strong_connection(&bundle.ca, &can, &ent, true).map_err(|e| anyhow!("{e}"))?;
    let es = build_es(&bundle.ca, &can, &ent, &conn).map_err(|e| anyhow!("{e}"))?;
    Ok(Principal {
        bundle,
        can,
        ent,
        conn,
        es,
    })
}

pub fn check(file: &Path, field_override: &Option<String>) -> Result<Report> {
    let (bytes, digest) = read(file)?;
    let spec: schema::BundleSpec = serde_json::from_slice(&bytes).context("malformed JSON")?;
    let field = schema::parse_field(&if field_override.is_some() {
        field_override.clone()
    } else {
        spec.field.clone()
    })?;
    let mut report = Report::new("check", digest, field.to_string(), None);
    let alg = schema::load_algebra(&spec.algebra, field)?;
    let arep = cychom_core::structalg::check_algebra(&alg);
    report.absorb(&arep.certificates());
    if let Some(u) = &spec.algebra.unit {
        let declared = crate::schema::coeffs_to_vec_pub(&field, u, alg.dim())?;
        report.push(
            "algebra.declared_unit",
            Some(&declared) == alg.unit(),
            Some("declared unit is not the two-sided unit".into()),
        );
    }
    report
        .dims
        .insert("algebra".into(), vec![alg.dim()]);
    if let Some(cs) = &spec.coalgebra {
        let co = schema::load_coalgebra(cs, field)?;
        report.absorb(&co.check().certificates());
        if let Some(h) = schema::load_hopf(cs, field)? {
            report.absorb(&h.check());
        }
        report.dims.insert("coalgebra".into(), vec![co.dim()]);
        if let (Some(_), Some(_)) = (&spec.coaction, &spec.comodules) {
            // full bundle: run the comodule-algebra axioms too
            let bundle = parse_bundle(&bytes, field_override)?;
            report.absorb(&bundle.ca.check());
            for (name, v) in &bundle.comodules {
                report.push(
                    &format!("comodule.{name}"),
                    v.check(&bundle.ca.coalg).is_ok(),
                    Some("comodule axioms fail".into()),
                );
            }
        }
    }
    Ok(report)
}

pub fn homology(
    file: &Path,
    field_override: &Option<String>,
    mode: CcMode,
    top: usize,
) -> Result<Report> {
    let (bytes, digest) = read(file)?;
    let spec: schema::BundleSpec = serde_json::from_slice(&bytes).context("malformed JSON")?;
    let field = schema::parse_field(&if field_override.is_some() {
        field_override.clone()
    } else {
        spec.field.clone()
    })?;
    let alg = schema::load_algebra_checked(&spec.algebra, field)?;
    let mut report = Report::new("homology", digest, field.to_string(), None);
    let tot = tot_cc(&alg, mode, top);
    report.push("tot.d_squared", true, None);
    let dims = homology_dims(&tot.complex);
    report.dims.insert(
        format!("homology_{}", mode_name(mode)),
        dims,
    );
    if mode == CcMode::Bar {
        if let Ok((_, _, certs)) = bar_contraction(&alg, top.saturating_sub(1)) {
            report.absorb(&certs);
        }
    }
    Ok(report)
}

fn mode_name(m: CcMode) -> &'static str {
    match m {
        CcMode::Full => "full",
        CcMode::Cc2 => "cc2",
        CcMode::Cc1 => "cc1",
        CcMode::Bar => "bar",
    }
}

pub fn cotraces(file: &Path, field_override: &Option<String>) -> Result<Report> {
    let (bytes, digest) = read(file)?;
    let spec: schema::BundleSpec = serde_json::from_slice(&bytes).context("malformed JSON")?;
    let field = schema::parse_field(&if field_override.is_some() {
        field_override.clone()
    } else {
        spec.field.clone()
    })?;
    let cs = spec
        .coalgebra
        .as_ref()
        .ok_or_else(|| anyhow!("file has no coalgebra block"))?;
    let co = schema::load_coalgebra(cs, field)?;
    let rep = co.check();
    let mut report = Report::new("cotraces", digest, field.to_string(), None);
    report.absorb(&rep.certificates());
    let basis = cotrace_basis(&co);
    report
        .dims
        .insert("cotrace_dim".into(), vec![basis.len()]);
    if let Some(map) = &spec.comodules {
        let mut comods = Vec::new();
        for (name, vspec) in map {
            let v = schema::load_comodule(vspec, &co)?;
            let chi = comodule_character(&co, &v).map_err(|e| anyhow!("{e}"))?;
            report.push(
                &format!("character.{name}_is_cotrace"),
                chi.verify(&co),
                Some("character fails the cotrace symmetry".into()),
            );
            comods.push(v);
        }
        // a finding, not a correctness certificate: false is a valid outcome
        let enough = cychom_core::structcoalg::enough_characters(&co, &comods)
            .map_err(|e| anyhow!("{e}"))?;
        report
            .dims
            .insert("enough_characters".into(), vec![enough as usize]);
    }
    Ok(report)
}

pub fn strong_connection(
    file: &Path,
    field_override: &Option<String>,
    unital: bool,
) -> Result<Report> {
    let (bytes, digest) = read(file)?;
    let bundle = parse_bundle(&bytes, field_override)?;
    let mut report = Report::new(
        "strong-connection",
        digest,
        bundle.field.to_string(),
        None,
    );
    let can = canonical_map(&bundle.ca).map_err(|e| anyhow!("{e}"))?;
    report.absorb(&can.report);
    let ent = entwining(&bundle.ca, &can).map_err(|e| anyhow!("{e}"))?;
    report.absorb(&ent.report);
    report.absorb(&translation_certificates(&bundle.ca, &can, &ent));
    let (conn, system) = solve_strong_connection(&bundle.ca, &can, &ent, unital)
        .map_err(|e| anyhow!("{e}"))?;
    report.absorb(&conn.report);
    report.dims.insert(
        "solution_space".into(),
        vec![system.kernel_dim()],
    );
    Ok(report)
}

pub fn es_coring(file: &Path, field_override: &Option<String>) -> Result<Report> {
    let (bytes, digest) = read(file)?;
    let p = principal_data(&bytes, field_override)?;
    let mut report = Report::new("es-coring", digest, p.bundle.field.to_string(), None);
    report.absorb(&p.can.report);
    report.absorb(&p.ent.report);
    report.absorb(&p.es.report);
    let iso = row_iso_omega(&p.bundle.ca, &p.es);
    report.absorb(&iso.report);
    let contraction = kernel_contraction(&p.es.row, 3).map_err(|e| anyhow!("{e}"))?;
    report.absorb(&contraction.report);
    report.dims.insert(
        "blocks".into(),
        vec![p.es.b.algebra.dim(), iso.omega_basis.len()],
    );
    report
        .dims
        .insert("kernel_dims".into(), contraction.kernel_dims);
    report.dims.insert("dim_m".into(), vec![p.es.dim_m()]);
    Ok(report)
}

pub fn chern(idem_file: &Path, field_override: &Option<String>, n: usize) -> Result<Report> {
    let (bytes, digest) = read(idem_file)?;
    let mut spec: schema::IdempotentSpec =
        serde_json::from_slice(&bytes).context("malformed JSON")?;
    if field_override.is_some() {
        spec.field = field_override.clone();
    }
    let field = schema::parse_field(&spec.field)?;
    let b = schema::load_algebra_checked(&spec.algebra, field)?;
    let mat = cychom_core::structalg::matrix_algebra(&b, spec.size)
        .map_err(|e| anyhow!("{e}"))?;
    let mut e = SparseVec::new();
    for (r, c, cs) in &spec.entries {
        if *r >= spec.size || *c >= spec.size {
            bail!("entry ({r}, {c}) out of range");
        }
        for (k, lit) in cs {
            let v = field.parse(lit).map_err(|er| anyhow!("{er}"))?;
            if !v.is_zero() {
                e.insert(mat.flat(*r, *c, *k), v);
            }
        }
    }
    let mut report = Report::new("chern", digest, field.to_string(), None);
    let ch = idempotent_chern(&mat, &e, n).map_err(|e| anyhow!("{e}"))?;
    report.absorb(&ch.matrix_level.report);
    report.absorb(&ch.base_level.report);
    if n >= 1 {
        let lower = idempotent_chern(&mat, &e, n - 1).map_err(|e| anyhow!("{e}"))?;
        let w = periodicity_witness(&ch.base_level, &lower.base_level)
            .map_err(|e| anyhow!("{e}"))?;
        report.push(
            "chern.periodicity",
            w.is_some(),
            Some("no S-witness found".into()),
        );
    }
    report.dims.insert(
        "components".into(),
        (0..=2 * n)
            .map(|m| {
                ch.base_level
                    .cycle
                    .component(m)
                    .map(|t| t.num_terms())
                    .unwrap_or(0)
            })
            .collect(),
    );
    Ok(report)
}

pub fn chern_weil(
    file: &Path,
    field_override: &Option<String>,
    cotrace_name: &str,
    n: usize,
) -> Result<Report> {
    let (bytes, digest) = read(file)?;
    let p = principal_data(&bytes, field_override)?;
    let mut report = Report::new("chern-weil", digest, p.bundle.field.to_string(), None);
    let cot = resolve_cotrace(&p.bundle, cotrace_name)?;
    let chw = chern_weil_run(&p, &cot, n, &mut report)?;
    report.dims.insert(
        "b_components".into(),
        (0..=2 * n)
            .map(|m| {
                chw.b_level
                    .cycle
                    .component(m)
                    .map(|t| t.num_terms())
                    .unwrap_or(0)
            })
            .collect(),
    );
    Ok(report)
}

fn chern_weil_run(
    p: &Principal,
    cot: &Cotrace,
    n: usize,
    report: &mut Report,
) -> Result<cychom_core::chern::ChernWeil> {
    let chw =
        core_chern_weil(&p.bundle.ca, &p.es, &p.conn, cot, n).map_err(|e| anyhow!("{e}"))?;
    report.absorb(&chw.m_level.report);
    report.absorb(&chw.b_level.report);
    if n >= 1 {
        let lower = core_chern_weil(&p.bundle.ca, &p.es, &p.conn, cot, n - 1)
            .map_err(|e| anyhow!("{e}"))?;
        let w =
            periodicity_witness(&chw.b_level, &lower.b_level).map_err(|e| anyhow!("{e}"))?;
        report.push(
            "chern_weil.periodicity",
            w.is_some(),
            Some("no S-witness found".into()),
        );
    }
    Ok(chw)
}

fn resolve_cotrace(bundle: &Bundle, name: &str) -> Result<Cotrace> {
    if let Some(com) = name.strip_prefix("chi:") {
        let v = bundle
            .comodules
            .get(com)
            .ok_or_else(|| anyhow!("no comodule named {com} in the input"))?;
        return comodule_character(&bundle.ca.coalg, v).map_err(|e| anyhow!("{e}"));
    }
    if let Some(k) = name.strip_prefix("basis:") {
        let k: usize = k.parse().context("cotrace basis index")?;
        let basis = cotrace_basis(&bundle.ca.coalg);
        return basis
            .into_iter()
            .nth(k)
            .ok_or_else(|| anyhow!("cotrace basis index {k} out of range"));
    }
    bail!("cotrace must be chi:<comodule> or basis:<k>")
}

#[derive(Clone, Copy, Debug)]
pub enum Lemma {
    Kill,
    Bar,
    Matrix,
    Conj,
    Rowext,
}

pub fn verify(lemma: Lemma, seeds: u64, seed0: u64) -> Result<Report> {
    use cychom_core::chainkit::randomized::{random_invertible, random_split_exact};
    use cychom_core::rowext::randomized::random_row_extension;
    use cychom_core::structalg::{
        dual_numbers, function_algebra_of_group, ground_field_algebra, matrix_algebra,
        product_field_algebra, GroupTable,
    };
    let field = FieldSpec::Q;
    let name = format!("verify-{:?}", lemma).to_lowercase();
    let digest = digest_args(&[&name, &seeds.to_string(), &seed0.to_string()]);
    let mut report = Report::new(&name, digest, field.to_string(), Some(seed0));
    match lemma {
        Lemma::Kill => {
            let mut passes = 0usize;
            for s in 0..seeds {
                let data = random_split_exact(seed0.wrapping_add(s), 4);
                match kill_contractible(&data) {
                    Ok(out) if out.report.all_pass() => passes += 1,
                    Ok(out) => {
                        report.push(
                            &format!("kill.seed_{s}"),
                            false,
                            out.report.first_failure().map(|c| c.to_string()),
                        );
                    }
                    Err(e) => report.push(&format!("kill.seed_{s}"), false, Some(e.to_string())),
                }
            }
            report.push(
                &format!("kill.{passes}_of_{seeds}"),
                passes == seeds as usize,
                Some("some seeds failed".into()),
            );
        }
        Lemma::Bar => {
            for (name, alg) in [
                ("q", ground_field_algebra(field)),
                ("k2", product_field_algebra(2, field)),
                ("dual", dual_numbers(field)),
                (
                    "kz2",
                    function_algebra_of_group(&GroupTable::cyclic(2), field)
                        .map_err(|e| anyhow!("{e}"))?
                        .algebra,
                ),
            ] {
                let (_, _, certs) = bar_contraction(&alg, 3).map_err(|e| anyhow!("{e}"))?;
                report.push(
                    &format!("bar.{name}"),
                    certs.all_pass(),
                    certs.first_failure().map(|c| c.to_string()),
                );
            }
        }
        Lemma::Matrix => {
            for (name, alg) in [
                ("m2_q", ground_field_algebra(field)),
                ("m2_k2", product_field_algebra(2, field)),
            ] {
                let out = cychom_core::chainkit::matrix_stability(&alg, 2, 2)
                    .map_err(|e| anyhow!("{e}"))?;
                report.push(
                    &format!("matrix.{name}"),
                    out.report.all_pass(),
                    out.report.first_failure().map(|c| c.to_string()),
                );
            }
        }
        Lemma::Conj => {
            use rand::SeedableRng;
            let b = ground_field_algebra(field);
            let mat = matrix_algebra(&b, 2).map_err(|e| anyhow!("{e}"))?;
            let mut passes = 0usize;
            for s in 0..seeds {
                let mut rng =
                    rand_chacha::ChaCha8Rng::seed_from_u64(seed0.wrapping_add(s));
                let g = random_invertible(&mut rng, 2, &field);
                let mut gamma = SparseVec::new();
                for (i, j, c) in g.iter() {
                    gamma.insert(mat.flat(i, j, 0), c.clone());
                }
                match cychom_core::chainkit::conjugation_homotopy(&mat, &gamma, 2) {
                    Ok(out) if out.report.all_pass() => passes += 1,
                    Ok(out) => report.push(
                        &format!("conj.seed_{s}"),
                        false,
                        out.report.first_failure().map(|c| c.to_string()),
                    ),
                    Err(e) => {
                        report.push(&format!("conj.seed_{s}"), false, Some(e.to_string()))
                    }
                }
            }
            report.push(
                &format!("conj.{passes}_of_{seeds}"),
                passes == seeds as usize,
                Some("some seeds failed".into()),
            );
        }
        Lemma::Rowext => {
            let mut passes = 0usize;
            for s in 0..seeds {
                let re = random_row_extension(seed0.wrapping_add(s));
                let inv = re.invariants();
                let contraction = kernel_contraction(&re, 3).map_err(|e| anyhow!("{e}"))?;
                if inv.all_pass() && contraction.report.all_pass() {
                    passes += 1;
                } else {
                    report.push(
                        &format!("rowext.seed_{s}"),
                        false,
                        inv.first_failure()
                            .or(contraction.report.first_failure())
                            .map(|c| c.to_string()),
                    );
                }
            }
            report.push(
                &format!("rowext.{passes}_of_{seeds}"),
                passes == seeds as usize,
                Some("some seeds failed".into()),
            );
        }
    }
    Ok(report)
}

pub fn diagram(
    file: &Path,
    field_override: &Option<String>,
    n: usize,
    comodule: &str,
) -> Result<Report> {
    let (bytes, digest) = read(file)?;
    let p = principal_data(&bytes, field_override)?;
    let mut report = Report::new("diagram", digest, p.bundle.field.to_string(), None);
    let v = p
        .bundle
        .comodules
        .get(comodule)
        .ok_or_else(|| anyhow!("no comodule named {comodule} in the input"))?;
    let f = verify_factorization(&p.bundle.ca, &p.es, &p.conn, v, n)
        .map_err(|e| anyhow!("{e}"))?;
    report.absorb(&p.conn.report);
    report.absorb(&f.idempotent.report);
    report.absorb(&f.chw.m_level.report);
    report.absorb(&f.chw.b_level.report);
    report.absorb(&f.report);
    report.dims.insert(
        "idempotent_size".into(),
        vec![f.idempotent.layout.len()],
    );
    Ok(report)
}
