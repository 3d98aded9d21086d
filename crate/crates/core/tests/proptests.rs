//! Property tests for the exact linear algebra invariants and the tensor
//! calculus, all with zero tolerance.

use cychom_core::exactlin::{FieldSpec, Scalar, SparseMat, SparseVec};
use cychom_core::tenalg::{BasedSpace, TensorElem, TensorSpace};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Scalar {
    FieldSpec::Q.ratio(n, d).unwrap()
}

prop_compose! {
    fn small_matrix()(rows in 1usize..6, cols in 1usize..6)
        (rows in Just(rows), cols in Just(cols),
         entries in proptest::collection::vec((0usize..6, 0usize..6, -4i64..=4, 1i64..=3), 0..18))
        -> SparseMat
    {
        let mut m = SparseMat::zero(rows, cols);
        for (i, j, n, d) in entries {
            if n != 0 {
                m.add_to(i % rows, j % cols, &q(n, d));
            }
        }
        m
    }
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_cols(m in small_matrix()) {
        prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn kernel_vectors_are_killed(m in small_matrix()) {
        for v in m.kernel_basis() {
            prop_assert!(m.apply(&v).is_empty());
        }
    }

    #[test]
    fn solve_reproduces_rhs_bit_exactly(
        m in small_matrix(),
        x in proptest::collection::vec((-4i64..=4, 1i64..=3), 6),
    ) {
        // manufacture a solvable system: rhs = m·x
        let xv: SparseVec = x
            .iter()
            .enumerate()
            .take(m.cols())
            .filter(|(_, (n, _))| *n != 0)
            .map(|(i, (n, d))| (i, q(*n, *d)))
            .collect();
        let rhs = m.apply(&xv);
        let sol = m.solve_affine(&rhs).expect("constructed solvable");
        prop_assert_eq!(m.apply(&sol.particular), rhs);
        prop_assert_eq!(sol.kernel.len(), m.cols() - m.rank());
    }

    #[test]
    fn elimination_is_deterministic(m in small_matrix()) {
        // same input, same bases, entry for entry
        let k1 = m.kernel_basis();
        let k2 = m.clone().kernel_basis();
        prop_assert_eq!(k1, k2);
    }

    #[test]
    fn tensor_power_is_linear(
        coeffs in proptest::collection::vec((0usize..8, -3i64..=3), 1..6),
        scale_n in -3i64..=3,
    ) {
        let v = BasedSpace::anon("v", 2);
        let sp = TensorSpace::power(&v, 3);
        let mut x = TensorElem::zero(sp.clone());
        for (flat, c) in &coeffs {
            if *c != 0 {
                let idx = sp.codec.unflatten(*flat);
                x.add_term(&idx, &q(*c, 1));
            }
        }
        let mut f = SparseMat::zero(2, 2);
        f.set(0, 0, q(1, 2));
        f.set(1, 0, q(3, 1));
        f.set(0, 1, q(-2, 1));
        let s = q(scale_n, 1);
        let lhs = x.scale(&s).apply_tensor_power(&f, &v).unwrap();
        let rhs = x.apply_tensor_power(&f, &v).unwrap().scale(&s);
        prop_assert_eq!(lhs, rhs);
    }
}
