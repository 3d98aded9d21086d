//! Exact-arithmetic computational homological algebra.
//!
//! The crate computes Hochschild and cyclic homology of finite-dimensional
//! algebras over ℚ or a prime field, builds the chain-level homotopy
//! equivalences used in noncommutative Chern-Weil theory (killing contractible
//! complexes, bar contractions, matrix stability, conjugation triviality, row
//! extension contractions), solves for strong connections on finite
//! Hopf-Galois extensions, and evaluates Chern-type characters with every
//! identity certified at chain level in exact arithmetic.
//!
//! Organisation:
//!
//! * [`exactlin`] — exact scalars and sparse matrices with deterministic
//!   Gaussian elimination (rank, kernel, affine solving).
//! * [`tenalg`] — based spaces, tensor powers with mixed-radix index codecs,
//!   sparse elements of tensor powers.
//! * [`structalg`] — structure-constant algebras, group (function) algebras,
//!   matrix algebras.
//! * [`structcoalg`] — coalgebras, comodules, cotraces, characters.
//! * [`chainkit`] — chain complexes, the cyclic bicomplex, homology, and the
//!   four homotopy lemmas as executable constructions.
//! * [`rowext`] — augmented modules, row extensions, cocycle normalization and
//!   the kernel contraction certifying homotopy invariance.
//! * [`galois`] — comodule algebras, canonical maps, translation maps, strong
//!   connections and the Ehresmann-Schauenburg coring.
//! * [`chern`] — abstract cyclic characters, idempotent Chern characters, the
//!   Chern-Weil chains and the factorization diagram.
//!
//! All computations are exact; every certificate in a report either passes
//! bit-exactly or carries a witness for the first failing coordinate.

// index-heavy loops mirror the tensor formulas they implement
#![allow(clippy::needless_range_loop)]
#![allow(clippy::too_many_arguments)]

pub mod cert;
pub mod chainkit;
pub mod chern;
pub mod exactlin;
pub mod galois;
pub mod par;
pub mod rowext;
pub mod structalg;
pub mod structcoalg;
pub mod tenalg;

pub use cert::{Certificate, CertificateSet};
pub use exactlin::{FieldSpec, Scalar, SparseMat, SparseVec};
