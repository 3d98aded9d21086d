//! Exact scalar arithmetic and sparse linear algebra.
//!
//! Scalars are arbitrary-precision rationals (always in lowest terms with a
//! positive denominator) or residues modulo a prime; the two kinds are never
//! mixed inside one computation. Matrices are sparse, zero entries are never
//! stored, and elimination uses a deterministic pivot order so that ranks,
//! kernels and solutions are reproducible across runs and platforms.

mod scalar;
mod sparse;

pub use scalar::{FieldSpec, Scalar, ScalarError};
pub use sparse::{axpy, scale, AffineSolution, Echelon, SparseMat, SparseVec, Subspace};
