//! Relations on sequences: domination and equivalence of weight sequences,
//! the relation `∼*` on generalized-integer sequences, the maps `𝐧`, `𝐘`,
//! `φ`, and the separating family `b_ε`.
//!
//! Every verdict is either an exact certificate or explicitly inconclusive.

#![forbid(unsafe_code)]

mod borel;
mod error;
pub mod genint;
mod maps;
pub mod mass;
mod ratio;
mod star;
mod verdict;

pub use borel::{b_epsilon, borel2_phi, borel2_phi_with, cut_to_string, eks_discrepancy, BitSeq, Borel2Block, Borel2Blocks, IndexPartition};
pub use error::SeqError;
pub use genint::{GenInt, GenIntSeq, IntTail, XiPoint, XiTail};
pub use maps::{base_sequence, n_map, n_of, y_map, AngleMode, FrameAngle};
pub use mass::{MassReport, QuarterMass};
pub use ratio::{
    compose, dominates, replay_domination, replay_equivalence, seq_equivalent, ExceedSet, RatioVerdict, RatioWitness,
};
pub use star::{forced_set, replay_star, set_mass, star_check, star_equiv, star_equiv_at, StarCheck, StarVerdict, StarWitness};
pub use verdict::{certificate_is_monotone, EquivVerdict, ForcedMass, VerdictKind};

pub type Result<T> = std::result::Result<T, SeqError>;
