//! Completely bounded norms of maps `T : X(A) -> X(B)`.
//!
//! The cb-norm is `max{‖T‖, s}` with
//! `s² = sup tr(T*B*BT v)` over `0 ⪯ v ⪯ I`, `tr(A*A v) ≤ 1`
//! (write `v = uu*` for a contraction `u` with `‖Au‖₂ ≤ 1`).
//! For diagonal data the supremum is a fractional knapsack.
#![forbid(unsafe_code)]

mod amplify;
mod error;
mod general;
mod greedy;
mod result;
mod same_basis;
pub mod sdp;

pub use amplify::{amplified_from_map, amplified_lower_bound, AmplifiedBound};
pub use error::CbNormError;
pub use general::{cb_norm_general, cb_norm_general_with, GeneralOptions};
pub use greedy::{cb_norm_diag_identity, knapsack, Knapsack};
pub use result::{CbNormResult, Method, Witness};
pub use same_basis::{same_basis_check, unique_basis_constants, SameBasis, UniqueBasisConstants};

pub type Result<T> = std::result::Result<T, CbNormError>;
