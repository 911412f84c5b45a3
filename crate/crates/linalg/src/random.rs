//! Seeded random matrices.
//!
//! Complex Gaussian entries have independent real and imaginary parts,
//! each normal with mean 0 and variance 1/2, so `E|z|^2 = 1`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{orthonormalize, ComplexMatrix};

/// The generator used everywhere a seed appears.
pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn real_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), 0.0))
}

/// Haar-like unitary from Gram-Schmidt on a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        if let Ok(q) = orthonormalize(&gaussian_matrix(rng, n, n)) {
            return q;
        }
    }
}

/// Random `rows x cols` matrix with orthonormal columns.
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(cols <= rows, "an isometry needs cols <= rows");
    loop {
        if let Ok(q) = orthonormalize(&gaussian_matrix(rng, rows, cols)) {
            return q;
        }
    }
}

/// Real orthogonal matrix.
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        if let Ok(q) = orthonormalize(&real_gaussian_matrix(rng, n, n)) {
            return q;
        }
    }
}
