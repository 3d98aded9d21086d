//! Chain complexes, the cyclic bicomplex, exact homology, and the homotopy
//! lemmas of the homotopy category toolbox as executable constructions.
//!
//! Complexes are graded families of based spaces with sparse differentials;
//! every construction that claims `d² = 0`, "is a chain map" or "is a
//! contracting homotopy" re-verifies the claim in exact arithmetic and
//! reports the first failing degree and basis vector if it is not.

mod complex;
mod cyclic;
mod kill;
pub mod randomized;
mod stability;

pub use complex::{homology_dims, ChainComplex, ChainMap, Homotopy};
pub use cyclic::{
    apply_b_chain, apply_norm_chain, apply_one_minus_t, b_of_word, bar_contraction, boundary_b,
    boundary_bprime, connes_s, cyclic_operators, cyclic_t, cyclic_word_space, face_matrix,
    homologous, induced_chain_map, norm_n, tot_cc, total_boundary, CcMode, CyclicChain,
    CyclicError, CyclicOps, TotBlock, TotComplex,
};
pub use kill::{kill_contractible, kill_contractible_bounded, KillError, KillOutput, SplitData};
pub use stability::{conjugation_homotopy, matrix_stability, ConjugationOutput, StabilityOutput};
