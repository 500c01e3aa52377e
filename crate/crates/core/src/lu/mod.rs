//! The zero-sum quadratic inequality and the commutator inequality for
//! orthogonal families, with their equality configurations and randomized
//! soundness sweeps.

mod lemma1;
mod lemma2;
pub mod sampling;
pub mod sweep;

pub use lemma1::{
    classify_equality, construct_equality_eta, lemma1_bound, lemma1_check, lemma1_lhs,
    lemma1_maximize, weighted_laplacian, Classification, EdgeWeights, EqualityCase1,
    EqualityClass, EtaWeights, InequalityReport, Orientation, StationaryPoint,
};
pub use lemma2::{
    construct_lemma2_equality, diagonalize_leading, lemma2_bound, lemma2_check, lemma2_lhs,
    lemma2_to_lemma1, Lemma2EqualityConfig,
};
