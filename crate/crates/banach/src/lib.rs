//! Subspaces of `ℝ ⊕₁ ℓ₂` truncated to `ℝ ⊕₁ ℝ^d`: the invariant
//! `c(Y) = ‖P|_Y‖` for the projection `P` onto the `ℝ` summand, the
//! function `φ`, the family `Φ(t)` and the isometry decision.
//!
//! Scalars are real. The norm of `s ⊕ ξ` is `|s| + ‖ξ‖₂`.

#![forbid(unsafe_code)]

mod error;
mod frame;
mod invariant;

pub use error::BanachError;
pub use frame::{make_phi, BanachFrame, BanachFrameSpec};
pub use invariant::{
    c_invariant, isometric, phi_fn, sum_norm, ut_intersects, ut_member, weak_sup_check, CInvariant, IsometryVerdict,
    WeakSupCheck, DEFAULT_ISOMETRY_TOL,
};

pub type Result<T> = std::result::Result<T, BanachError>;
