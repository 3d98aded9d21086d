//! JSON input formats.
//!
//! Rational literals are strings ("p/q" or "p") so nothing ever round-trips
//! through floating point. Indices are 0-based. A triple `[i, j, k, "p/q"]`
//! in `mult` means e_i·e_j contains (p/q)·e_k; in `comult`, Δ(c_i) contains
//! (p/q)·c_j⊗c_k; in `coaction`, ρ(a_i) contains (p/q)·a_j⊗c_k.

use anyhow::{anyhow, bail, Context, Result};
use cychom_core::structalg::{Algebra, HopfAlgebra};
use cychom_core::structcoalg::{Coalgebra, Comodule};
use cychom_core::galois::ComoduleAlgebra;
use cychom_core::tenalg::{BasedSpace, TensorElem, TensorSpace};
use cychom_core::{FieldSpec, SparseMat, SparseVec};
use serde::Deserialize;
use std::collections::BTreeMap;

pub type Coeffs = Vec<(usize, String)>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub basis: Option<Vec<String>>,
    pub mult: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    pub unit: Option<Coeffs>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraSpec {
    pub dim: usize,
    pub basis: Option<Vec<String>>,
    pub comult: Vec<(usize, usize, usize, String)>,
    pub counit: Coeffs,
    #[serde(default)]
    pub grouplike: Option<Coeffs>,
    /// Optional algebra structure (Hopf mode).
    #[serde(default)]
    pub mult: Option<Vec<(usize, usize, usize, String)>>,
    #[serde(default)]
    pub unit: Option<Coeffs>,
    /// antipode entries [i, j, "p/q"]: S(c_j) contains (p/q)·c_i.
    #[serde(default)]
    pub antipode: Option<Vec<(usize, usize, String)>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleSpec {
    pub dim: usize,
    /// matrix entries [i, j, C-vector].
    pub matrix: Vec<(usize, usize, Coeffs)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    #[serde(default)]
    pub field: Option<String>,
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub coalgebra: Option<CoalgebraSpec>,
    #[serde(default)]
    pub coaction: Option<Vec<(usize, usize, usize, String)>>,
    #[serde(default)]
    pub comodules: Option<BTreeMap<String, ComoduleSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdempotentSpec {
    #[serde(default)]
    pub field: Option<String>,
    pub algebra: AlgebraSpec,
    pub size: usize,
    /// entries [r, c, B-vector]
    pub entries: Vec<(usize, usize, Coeffs)>,
}

pub fn parse_field(s: &Option<String>) -> Result<FieldSpec> {
    match s.as_deref() {
        None | Some("Q") => Ok(FieldSpec::Q),
        Some(x) => {
            let p = x
                .strip_prefix('F')
                .ok_or_else(|| anyhow!("field must be \"Q\" or \"F<p>\""))?
                .parse::<u64>()
                .context("prime modulus")?;
            FieldSpec::fp(p).map_err(|e| anyhow!("{e}"))
        }
    }
}

/// Public wrapper used by the check command.
pub fn coeffs_to_vec_pub(field: &FieldSpec, cs: &Coeffs, dim: usize) -> Result<SparseVec> {
    coeffs_to_vec(field, cs, dim)
}

fn coeffs_to_vec(field: &FieldSpec, cs: &Coeffs, dim: usize) -> Result<SparseVec> {
    let mut v = SparseVec::new();
    for (i, lit) in cs {
        if *i >= dim {
            bail!("index {i} out of range (dim {dim})");
        }
        let c = field.parse(lit).map_err(|e| anyhow!("{e}"))?;
        if !c.is_zero() {
            v.insert(*i, c);
        }
    }
    Ok(v)
}

fn space_of(dim: usize, basis: &Option<Vec<String>>, prefix: &str) -> Result<BasedSpace> {
    match basis {
        Some(names) => {
            if names.len() != dim {
                bail!("basis has {} names but dim = {dim}", names.len());
            }
            Ok(BasedSpace::named(names.clone()))
        }
        None => Ok(BasedSpace::anon(prefix, dim)),
    }
}

/// Build the algebra without axiom validation (defects are report content,
/// not parse errors).
pub fn load_algebra(spec: &AlgebraSpec, field: FieldSpec) -> Result<Algebra> {
    let space = space_of(spec.dim, &spec.basis, "a")?;
    let d = spec.dim;
    let mut mult = vec![SparseVec::new(); d * d];
    for (i, j, k, lit) in &spec.mult {
        if *i >= d || *j >= d || *k >= d {
            bail!("mult entry ({i}, {j}, {k}) out of range");
        }
        let c = field.parse(lit).map_err(|e| anyhow!("{e}"))?;
        if !c.is_zero() {
            let e = mult[i * d + j].entry(*k).or_insert_with(|| field.zero());
            *e += &c;
            if e.is_zero() {
                mult[i * d + j].remove(k);
            }
        }
    }
    Ok(Algebra::new_unchecked(space, mult, field))
}

/// Validate and build an algebra (used where downstream needs the axioms).
pub fn load_algebra_checked(spec: &AlgebraSpec, field: FieldSpec) -> Result<Algebra> {
    let a = load_algebra(spec, field)?;
    let rep = cychom_core::structalg::check_algebra(&a);
    if !rep.associative() {
        bail!(
            "algebra is not associative (first witness {:?})",
            rep.assoc_failures.first()
        );
    }
    Ok(a)
}

pub fn load_coalgebra(spec: &CoalgebraSpec, field: FieldSpec) -> Result<Coalgebra> {
    let space = space_of(spec.dim, &spec.basis, "c")?;
    let d = spec.dim;
    let sp2 = TensorSpace::power(&space, 2);
    let mut comult = vec![TensorElem::zero(sp2.clone()); d];
    for (i, j, k, lit) in &spec.comult {
        if *i >= d || *j >= d || *k >= d {
            bail!("comult entry ({i}, {j}, {k}) out of range");
        }
        let c = field.parse(lit).map_err(|e| anyhow!("{e}"))?;
        comult[*i].add_term(&[*j, *k], &c);
    }
    let counit = coeffs_to_vec(&field, &spec.counit, d)?;
    let grouplike = spec
        .grouplike
        .as_ref()
        .map(|g| coeffs_to_vec(&field, g, d))
        .transpose()?;
    Ok(Coalgebra::new_unchecked(
        space, comult, counit, grouplike, field,
    ))
}

/// Hopf data when the coalgebra block carries mult/antipode.
pub fn load_hopf(spec: &CoalgebraSpec, field: FieldSpec) -> Result<Option<HopfAlgebra>> {
    let (Some(mult), Some(antipode)) = (&spec.mult, &spec.antipode) else {
        return Ok(None);
    };
    let alg_spec = AlgebraSpec {
        dim: spec.dim,
        basis: spec.basis.clone(),
        mult: mult.clone(),
        unit: spec.unit.clone(),
    };
    let algebra = load_algebra_checked(&alg_spec, field)?;
    let coalgebra = load_coalgebra(spec, field)?;
    let mut s = SparseMat::zero(spec.dim, spec.dim);
    for (i, j, lit) in antipode {
        if *i >= spec.dim || *j >= spec.dim {
            bail!("antipode entry ({i}, {j}) out of range");
        }
        s.add_to(*i, *j, &field.parse(lit).map_err(|e| anyhow!("{e}"))?);
    }
    let hopf = HopfAlgebra {
        algebra,
        coalgebra,
        antipode: s,
    };
    let cs = hopf.check();
    if !cs.all_pass() {
        bail!("hopf axioms fail: {}", cs.first_failure().unwrap());
    }
    Ok(Some(hopf))
}

pub fn load_comodule(spec: &ComoduleSpec, c: &Coalgebra) -> Result<Comodule> {
    let mut matrix = vec![vec![SparseVec::new(); spec.dim]; spec.dim];
    for (i, j, cs) in &spec.matrix {
        if *i >= spec.dim || *j >= spec.dim {
            bail!("comodule entry ({i}, {j}) out of range");
        }
        matrix[*i][*j] = coeffs_to_vec(&c.field(), cs, c.dim())?;
    }
    let v = Comodule::new(spec.dim, matrix).map_err(|e| anyhow!("{e}"))?;
    v.check(c).map_err(|e| anyhow!("comodule axioms: {e}"))?;
    Ok(v)
}

/// A fully assembled bundle: comodule algebra plus named comodules.
pub struct Bundle {
    pub field: FieldSpec,
    pub ca: ComoduleAlgebra,
    pub comodules: BTreeMap<String, Comodule>,
}

pub fn load_bundle(spec: &BundleSpec) -> Result<Bundle> {
    let field = parse_field(&spec.field)?;
    let alg = load_algebra_checked(&spec.algebra, field)?;
    let co_spec = spec
        .coalgebra
        .as_ref()
        .ok_or_else(|| anyhow!("bundle needs a coalgebra block"))?;
    let coalg = load_coalgebra(co_spec, field)?;
    let rep = coalg.check();
    if !rep.pass() {
        bail!("coalgebra axioms fail");
    }
    let hopf = load_hopf(co_spec, field)?;
    let coaction_spec = spec
        .coaction
        .as_ref()
        .ok_or_else(|| anyhow!("bundle needs a coaction block"))?;
    let sp = TensorSpace::new(vec![alg.space().clone(), coalg.space().clone()]);
    let (da, dc) = (alg.dim(), coalg.dim());
    let mut coaction = vec![TensorElem::zero(sp.clone()); da];
    for (i, j, k, lit) in coaction_spec {
        if *i >= da || *j >= da || *k >= dc {
            bail!("coaction entry ({i}, {j}, {k}) out of range");
        }
        let c = field.parse(lit).map_err(|e| anyhow!("{e}"))?;
        coaction[*i].add_term(&[*j, *k], &c);
    }
    let ca = ComoduleAlgebra::new(alg, coalg, coaction, hopf).map_err(|e| anyhow!("{e}"))?;
    let mut comodules = BTreeMap::new();
    if let Some(map) = &spec.comodules {
        for (name, cs) in map {
            comodules.insert(name.clone(), load_comodule(cs, &ca.coalg)?);
        }
    }
    Ok(Bundle {
        field,
        ca,
        comodules,
    })
}
