//! Finite sections of the diagonal spaces X^d(α) spanned by `e_i = ξ_i ⊕ α_i ξ_i`
//! and `f_i = ξ'_i ⊕ 0` inside a row space plus a column space.
//!
//! An element of `M_n(X^d(α))` is `Σ a_i ⊗ e_i + Σ b_i ⊗ f_i`, and its norm is
//! `max{‖Σ a_i a_i* + Σ b_i b_i*‖, ‖Σ α_i² a_i* a_i‖}^{1/2}`.
#![forbid(unsafe_code)]

mod element;
mod error;
mod norms;
pub mod weights;

pub use element::{Coefficient, MatElement};
pub use error::XSpaceError;
pub use norms::{
    concrete_rep_norm, join, norm_parts, scale_check, split_bounds, xd_norm, Join, NormParts, ScaleCheck,
    SpacePartition, SplitBounds,
};
pub use weights::{Flag, PairVariant, Run, SquareSum, TailRule, WeightSequence};

pub type Result<T> = std::result::Result<T, XSpaceError>;
