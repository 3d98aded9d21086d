//! Chain complexes, chain maps and homotopies as graded sparse operators.

use crate::exactlin::{FieldSpec, SparseMat};
use crate::par;
use crate::tenalg::BasedSpace;

/// A nonnegatively graded chain complex truncated at some top degree.
///
/// `diffs[n]` is the differential `C_n → C_{n-1}`; `diffs[0]` has zero rows.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    spaces: Vec<BasedSpace>,
    diffs: Vec<SparseMat>,
    field: FieldSpec,
}

impl ChainComplex {
    pub fn new(spaces: Vec<BasedSpace>, diffs: Vec<SparseMat>, field: FieldSpec) -> Self {
        assert_eq!(spaces.len(), diffs.len(), "one differential per degree");
        for n in 0..spaces.len() {
            assert_eq!(diffs[n].cols(), spaces[n].dim(), "differential domain");
            let target = if n == 0 { 0 } else { spaces[n - 1].dim() };
            assert_eq!(diffs[n].rows(), target, "differential codomain");
        }
        let cc = ChainComplex {
            spaces,
            diffs,
            field,
        };
        if let Some((n, j)) = cc.d_squared_witness() {
            panic!("d² ≠ 0 at degree {n}, basis column {j}");
        }
        cc
    }

    /// Top degree of the truncation.
    pub fn top_degree(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn space(&self, n: usize) -> &BasedSpace {
        &self.spaces[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        if n < self.spaces.len() {
            self.spaces[n].dim()
        } else {
            0
        }
    }

    /// `d_n`, with out-of-range degrees the zero map.
    pub fn diff(&self, n: usize) -> SparseMat {
        if n < self.diffs.len() {
            self.diffs[n].clone()
        } else {
            SparseMat::zero(0, 0)
        }
    }

    pub fn diff_ref(&self, n: usize) -> Option<&SparseMat> {
        self.diffs.get(n)
    }

    /// First (degree, basis column) where `d∘d ≠ 0`, if any.
    pub fn d_squared_witness(&self) -> Option<(usize, usize)> {
        for n in 2..self.diffs.len() {
            let dd = self.diffs[n - 1].mul_mat(&self.diffs[n]);
            if !dd.is_zero() {
                let j = dd.iter().next().map(|(_, j, _)| j).unwrap_or(0);
                return Some((n, j));
            }
        }
        None
    }
}

/// Per-degree matrices of a degree-0 map between complexes.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub mats: Vec<SparseMat>,
}

impl ChainMap {
    pub fn identity(cc: &ChainComplex) -> Self {
        let one = cc.field().one();
        ChainMap {
            mats: (0..=cc.top_degree())
                .map(|n| SparseMat::identity(cc.dim(n), one.clone()))
                .collect(),
        }
    }

    pub fn mat(&self, n: usize) -> SparseMat {
        self.mats
            .get(n)
            .cloned()
            .unwrap_or_else(|| SparseMat::zero(0, 0))
    }

    /// First degree where `d_to ∘ f ≠ f ∘ d_from`, with a witness column.
    pub fn chain_map_witness(
        &self,
        from: &ChainComplex,
        to: &ChainComplex,
    ) -> Option<(usize, usize)> {
        let top = self.mats.len().saturating_sub(1);
        for n in 1..=top {
            let lhs = to.diff(n).mul_mat(&self.mats[n]);
            let rhs = self.mats[n - 1].mul_mat(&from.diff(n));
            let delta = lhs.sub_mat(&rhs);
            if !delta.is_zero() {
                let j = delta.iter().next().map(|(_, j, _)| j).unwrap_or(0);
                return Some((n, j));
            }
        }
        None
    }
}

/// Per-degree matrices of a degree +1 map; `mats[n]: C_n → C_{n+1}`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub mats: Vec<SparseMat>,
}

impl Homotopy {
    pub fn zero(cc: &ChainComplex) -> Self {
        let top = cc.top_degree();
        Homotopy {
            mats: (0..=top)
                .map(|n| SparseMat::zero(cc.dim(n + 1), cc.dim(n)))
                .collect(),
        }
    }

    pub fn mat(&self, n: usize) -> SparseMat {
        self.mats
            .get(n)
            .cloned()
            .unwrap_or_else(|| SparseMat::zero(0, 0))
    }

    /// `d_{n+1} h_n + h_{n-1} d_n` on `C_n` (missing pieces are zero maps).
    pub fn dh_plus_hd(&self, cc: &ChainComplex, n: usize) -> SparseMat {
        let dim = cc.dim(n);
        let mut acc = SparseMat::zero(dim, dim);
        if n < self.mats.len() && n < cc.top_degree() {
            acc = acc.add_mat(&cc.diff(n + 1).mul_mat(&self.mats[n]));
        }
        if n >= 1 && n - 1 < self.mats.len() {
            acc = acc.add_mat(&self.mats[n - 1].mul_mat(&cc.diff(n)));
        }
        acc
    }
}

/// Homology dimensions per degree: `dim ker d_n − rank d_{n+1}`.
///
/// The value at the truncation's top degree uses the absent `d_{top+1}` as
/// zero and is therefore an upper bound; callers build one extra degree when
/// they need the top value to be exact.
pub fn homology_dims(cc: &ChainComplex) -> Vec<usize> {
    let top = cc.top_degree();
    let ranks = par::map_indexed(top + 2, |n| {
        if n == 0 || n > top {
            0
        } else {
            cc.diff_ref(n).map_or(0, |d| d.rank())
        }
    });
    (0..=top)
        .map(|n| {
            let ker = cc.dim(n) - ranks[n];
            ker - ranks[n + 1]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Q
    }

    #[test]
    fn zero_complex_has_zero_homology() {
        let spaces = vec![BasedSpace::anon("c", 0); 4];
        let diffs = (0..4).map(|_| SparseMat::zero(0, 0)).collect();
        let cc = ChainComplex::new(spaces, diffs, q());
        assert_eq!(homology_dims(&cc), vec![0, 0, 0, 0]);
    }

    #[test]
    fn two_term_identity_complex_is_acyclic() {
        let spaces = vec![BasedSpace::anon("c", 1), BasedSpace::anon("c", 1)];
        let diffs = vec![
            SparseMat::zero(0, 1),
            SparseMat::identity(1, q().one()),
        ];
        let cc = ChainComplex::new(spaces, diffs, q());
        assert_eq!(homology_dims(&cc), vec![0, 0]);
    }

    #[test]
    #[should_panic(expected = "d² ≠ 0")]
    fn d_squared_violation_panics() {
        let spaces = vec![BasedSpace::anon("c", 1); 3];
        let one = SparseMat::identity(1, q().one());
        let diffs = vec![SparseMat::zero(0, 1), one.clone(), one];
        let _ = ChainComplex::new(spaces, diffs, q());
    }
}
