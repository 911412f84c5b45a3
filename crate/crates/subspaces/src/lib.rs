//! Subspaces `Y ⊂ X^d(α)` at finite truncation: restricted spectra, the
//! minimax identity for singular values, canonical bases, the subbasis
//! embedding schedule, and lower-bound certificates for projections and
//! subsequence embeddings.
#![forbid(unsafe_code)]

mod bounds;
mod canonical;
mod error;
mod frame;
mod subbasis;
mod wielandt;

pub use bounds::{
    dominate_shadow, gamma_divergence, noncomplemented_bound, not_subbasis_certificate, subsequence_distortion,
    ComplementBound, DistortionBound, Divergence, DominateShadow, SplitCase,
};
pub use canonical::{
    canonical_basis, canonical_map_norms, sign_average, unconditional_constant, AveragingMethod, CanonicalBasis,
    CanonicalMapNorms, MAX_ENUMERATED_DIM,
};
pub use error::SubspaceError;
pub use frame::{restricted_spectrum, Entry, FrameSpec, SubspaceFrame, INTERLACING_TOL};
pub use subbasis::{subbasis_embed, SubbasisEmbedding, SubbasisSchedule, KERNEL_TOL};
pub use wielandt::{chain_minimum, trial_seed, wielandt_check, wielandt_for_operator, WielandtReport};

pub type Result<T> = std::result::Result<T, SubspaceError>;
