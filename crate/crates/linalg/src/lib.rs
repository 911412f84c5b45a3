//! Dense complex linear algebra used by the rest of the workspace.
//!
//! Everything here is deterministic: the same input bits give the same
//! output bits, which keeps certificates reproducible.
#![forbid(unsafe_code)]

mod eigh;
mod error;
mod gram;
mod matrix;
pub mod random;
mod svd;

pub use eigh::{eigh, HermitianEigen};
pub use error::LinalgError;
pub use gram::{complete_basis, orthonormalize, projector};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use svd::{matrix_norms, svd, MatrixNorms, SingularSpectrum, Svd};

/// Relative tolerance for structural checks (orthonormality, reconstruction).
pub const STRUCTURAL_TOL: f64 = 1e-10;

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Shorthand for a complex number with the given real and imaginary parts.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
