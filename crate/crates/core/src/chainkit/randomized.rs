//! Seeded generators for the randomized verification suites.
//!
//! The generators produce graded-split short exact sequences with a
//! contractible kernel and exact splitting data, scrambled by random changes
//! of basis so the block structure is not visible to the code under test.
//! Everything is driven by a ChaCha stream cipher, so a seed determines the
//! instance bit-for-bit on every platform.

use super::complex::{ChainComplex, ChainMap, Homotopy};
use super::kill::SplitData;
use crate::exactlin::{FieldSpec, SparseMat};
use crate::tenalg::BasedSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_scalar(rng: &mut ChaCha8Rng, field: &FieldSpec) -> crate::exactlin::Scalar {
    field.integer(rng.gen_range(-2..=2))
}

/// Random invertible matrix: unit lower-triangular times unit upper-triangular
/// times a permutation, all with small integer entries.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, field: &FieldSpec) -> SparseMat {
    let mut l = SparseMat::identity(n, field.one());
    let mut u = SparseMat::identity(n, field.one());
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, small_scalar(rng, field));
        }
        for j in i + 1..n {
            u.set(i, j, small_scalar(rng, field));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut p = SparseMat::zero(n, n);
    for (i, pi) in perm.iter().enumerate() {
        p.set(*pi, i, field.one());
    }
    l.mul_mat(&u).mul_mat(&p)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, field: &FieldSpec) -> SparseMat {
    let mut m = SparseMat::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(0.5) {
                m.set(i, j, small_scalar(rng, field));
            }
        }
    }
    m
}

struct ScrambledContractible {
    complex: ChainComplex,
    h: Homotopy,
}

/// A contractible complex: a cone ⊕-sum scrambled by invertible changes of
/// basis, together with its exact contracting homotopy.
fn random_contractible(
    rng: &mut ChaCha8Rng,
    len: usize,
    max_w: usize,
    field: &FieldSpec,
) -> ScrambledContractible {
    // X_n = W_n ⊕ W_{n-1} with d(w, w') = (w', 0), h(w, w') = (0, w);
    // W_len = W_{-1} = 0 keeps the complex bounded by `len`.
    let w_dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_w)).collect();
    let w = |n: isize| -> usize {
        if n < 0 || n as usize >= len {
            0
        } else {
            w_dims[n as usize]
        }
    };
    let top = len; // degrees 0..=len, then one zero degree of padding
    let dim = |n: isize| -> usize {
        if n < 0 || n > top as isize {
            0
        } else {
            w(n) + w(n - 1)
        }
    };
    let scr: Vec<SparseMat> = (0..=top + 1)
        .map(|n| random_invertible(rng, dim(n as isize), field))
        .collect();
    let scr_inv: Vec<SparseMat> = scr
        .iter()
        .map(|p| p.inverse(&field.one()).expect("invertible by construction"))
        .collect();
    let mut spaces = Vec::new();
    let mut diffs = Vec::new();
    let mut hmats = Vec::new();
    for n in 0..=top + 1 {
        let ni = n as isize;
        spaces.push(BasedSpace::anon("x", dim(ni)));
        // block differential: (w, w') ↦ (w', 0): W_{n-1} → W_{n-1} identity
        // into the first component of X_{n-1}
        let mut d = SparseMat::zero(dim(ni - 1), dim(ni));
        for k in 0..w(ni - 1) {
            d.set(k, w(ni) + k, field.one());
        }
        let d = if n == 0 {
            SparseMat::zero(0, dim(0))
        } else {
            scr[n - 1].mul_mat(&d).mul_mat(&scr_inv[n])
        };
        diffs.push(d);
        // h(w, w') = (0, w): W_n → W_n into the second component of X_{n+1}
        let mut h = SparseMat::zero(dim(ni + 1), dim(ni));
        for k in 0..w(ni) {
            h.set(w(ni + 1) + k, k, field.one());
        }
        let h = if n == top + 1 {
            SparseMat::zero(0, dim(ni))
        } else {
            scr[n + 1].mul_mat(&h).mul_mat(&scr_inv[n])
        };
        hmats.push(h);
    }
    ScrambledContractible {
        complex: ChainComplex::new(spaces, diffs, *field),
        h: Homotopy { mats: hmats },
    }
}

/// A random bounded complex (not necessarily exact), scrambled.
fn random_complex(
    rng: &mut ChaCha8Rng,
    len: usize,
    max_u: usize,
    field: &FieldSpec,
) -> ChainComplex {
    // Z_n = U_n ⊕ V_n with d(u, v) = (f_n(v), 0) for random f_n: V_n → U_{n-1};
    // d² = 0 because images live in the U part and f kills it.
    let u_dims: Vec<usize> = (0..=len).map(|_| rng.gen_range(0..=max_u)).collect();
    let v_dims: Vec<usize> = (0..=len).map(|_| rng.gen_range(0..=max_u)).collect();
    let dim = |n: usize| -> usize {
        if n > len {
            0
        } else {
            u_dims[n] + v_dims[n]
        }
    };
    let scr: Vec<SparseMat> = (0..=len + 1)
        .map(|n| random_invertible(rng, dim(n), field))
        .collect();
    let scr_inv: Vec<SparseMat> = scr
        .iter()
        .map(|p| p.inverse(&field.one()).expect("invertible"))
        .collect();
    let mut spaces = Vec::new();
    let mut diffs = Vec::new();
    for n in 0..=len + 1 {
        spaces.push(BasedSpace::anon("z", dim(n)));
        if n == 0 {
            diffs.push(SparseMat::zero(0, dim(0)));
            continue;
        }
        let mut d = SparseMat::zero(dim(n - 1), dim(n));
        if n <= len {
            let f = random_matrix(rng, u_dims[n - 1], v_dims[n], field);
            for (i, j, c) in f.iter() {
                d.set(i, u_dims[n] + j, c.clone());
            }
        }
        diffs.push(scr[n - 1].mul_mat(&d).mul_mat(&scr_inv[n]));
    }
    ChainComplex::new(spaces, diffs, *field)
}

/// A graded-split short exact sequence 0 → X → Y → Z → 0 over ℚ with X
/// contractible and all splitting identities holding exactly. `max_dim`
/// bounds the per-degree block dimensions; lengths vary up to 4 (so complexes
/// span at most 5 nonzero degrees plus a zero pad).
pub fn random_split_exact(seed: u64, max_dim: usize) -> SplitData {
    let field = FieldSpec::Q;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(1..=4usize);
    let max_w = (max_dim / 2).max(1);
    let x = random_contractible(&mut rng, len, max_w, &field);
    let z = random_complex(&mut rng, len, max_w, &field);
    // align lengths
    let top = x.complex.top_degree().max(z.top_degree());
    let xd = |n: usize| x.complex.dim(n);
    let zd = |n: usize| z.dim(n);

    // twist u_n : Z_n → X_n; f = d_X u − u d_Z makes d_Y² = 0
    let u: Vec<SparseMat> = (0..=top)
        .map(|n| random_matrix(&mut rng, xd(n), zd(n), &field))
        .collect();
    let f: Vec<SparseMat> = (0..=top)
        .map(|n| {
            if n == 0 {
                SparseMat::zero(0, zd(0))
            } else {
                let a = x.complex.diff(n).mul_mat(&u[n]);
                let b = u[n - 1].mul_mat(&z.diff(n));
                a.sub_mat(&b)
            }
        })
        .collect();

    let mut spaces = Vec::new();
    let mut diffs = Vec::new();
    let mut iota = Vec::new();
    let mut rho = Vec::new();
    let mut pi = Vec::new();
    let mut sigma = Vec::new();
    for n in 0..=top {
        let (dx, dz) = (xd(n), zd(n));
        spaces.push(BasedSpace::anon("y", dx + dz));
        // block differential [[d_X, f],[0, d_Z]]
        let rows = if n == 0 { 0 } else { xd(n - 1) + zd(n - 1) };
        let mut d = SparseMat::zero(rows, dx + dz);
        if n >= 1 {
            d.insert_block(0, 0, &x.complex.diff(n));
            d.insert_block(0, dx, &f[n]);
            d.insert_block(xd(n - 1), dx, &z.diff(n));
        }
        diffs.push(d);
        let mut i = SparseMat::zero(dx + dz, dx);
        i.insert_block(0, 0, &SparseMat::identity(dx, field.one()));
        iota.push(i);
        let mut r = SparseMat::zero(dx, dx + dz);
        r.insert_block(0, 0, &SparseMat::identity(dx, field.one()));
        rho.push(r);
        let mut p = SparseMat::zero(dz, dx + dz);
        p.insert_block(0, dx, &SparseMat::identity(dz, field.one()));
        pi.push(p);
        let mut s = SparseMat::zero(dx + dz, dz);
        s.insert_block(dx, 0, &SparseMat::identity(dz, field.one()));
        sigma.push(s);
    }
    let y = ChainComplex::new(spaces, diffs, field);
    SplitData {
        x: x.complex,
        y,
        z,
        iota: ChainMap { mats: iota },
        pi: ChainMap { mats: pi },
        rho: ChainMap { mats: rho },
        sigma: ChainMap { mats: sigma },
        h: x.h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic() {
        let a = random_split_exact(99, 4);
        let b = random_split_exact(99, 4);
        for n in 0..=a.y.top_degree() {
            assert_eq!(a.y.diff(n), b.y.diff(n));
        }
    }

    #[test]
    fn contractible_part_contracts() {
        for seed in [0, 1, 2, 3] {
            let d = random_split_exact(seed, 4);
            for n in 0..=d.x.top_degree() {
                let hd = d.h.dh_plus_hd(&d.x, n);
                let id = SparseMat::identity(d.x.dim(n), FieldSpec::Q.one());
                assert!(hd.sub_mat(&id).is_zero(), "hd+dh ≠ 1 at degree {n}");
            }
        }
    }
}
