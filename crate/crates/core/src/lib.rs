//! Small cancellation over the free product of countably many copies of
//! ℤ/3.
//!
//! Words are over letters `x_i` and `x_i^2 = x_i⁻¹`. The crate builds the
//! relator families `w_{σ,k}` of a permutation group, certifies C'(λ) on
//! the symmetrized closure, solves the word problem by Dehn reduction and
//! runs consequence probes. All ratios are exact.

pub mod cancellation;
pub mod dehn;
pub mod density;
pub mod family;
pub mod index;
pub mod perm;
pub mod rational;
pub mod relator;
pub mod sampling;
pub mod word;

pub use cancellation::{
    find_relator_subword, max_piece, piece_lengths, verify_cprime, CancellationError, Certificate, PieceWitness,
    SubwordMatch,
};
pub use dehn::{greendlinger_certificate, reduced_words, DehnError, DehnSolver, Status, Step, Verdict};
pub use density::{cyclic_windows, distinct_letter_count, is_epsilon_dense};
pub use family::{check_inclusion, materialize_family, BaseRelator, FamilyError, InclusionReport, RelatorFamily, Source};
pub use index::MemberLabel;
pub use perm::{apply_sigma, closure_enumerate, parse_perm, prefix_patterns, Closure, GroupSpec, Perm, PermError, PrefixPattern};
pub use rational::{Rational, RationalError};
pub use relator::{
    make_relator, relator_length, symmetrize, unique_exponent_scan, ConstructionParams, RelatorError, ScanReport,
};
pub use sampling::Sampler;
pub use word::{cyclic_reduce, parse_word, reduce, weak_cyclic_reduce, Letter, Word, WordError};

/// Any error raised by the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Relator(#[from] RelatorError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Cancellation(#[from] CancellationError),
    #[error(transparent)]
    Dehn(#[from] DehnError),
}
