//! The minimax identity `Σ_j s_{i_j}² = sup_{E_1 ⊂ … ⊂ E_k} min Σ_j ‖S x_j‖²`.

use rayon::prelude::*;
use rowcol_linalg::random::{rng, unitary};
use rowcol_linalg::{complete_basis, eigh, orthonormalize, svd, Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::{restricted_spectrum, Result, SubspaceError, SubspaceFrame};

/// Gram eigenvalues below this count as the null space of the orthogonality constraints.
const NULL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WielandtReport {
    pub indices: Vec<usize>,
    /// `Σ_j s_{i_j}²`
    pub closed_form: f64,
    /// Largest chain minimum over the random chains.
    pub best_oracle: f64,
    /// Chain minimum for the chain spanned by leading right singular vectors.
    pub singular_chain: f64,
    pub trials: usize,
}

/// Minimax check for `A|_Y`.
pub fn wielandt_check(y: &SubspaceFrame, indices: &[usize], trials: usize, seed: u64) -> Result<WielandtReport> {
    restricted_spectrum(y)?;
    wielandt_for_operator(&y.restricted_operator(), indices, trials, seed)
}

/// Minimax check for an arbitrary `S` acting on `ℂ^d`, `d = S.cols()`.
pub fn wielandt_for_operator(s: &ComplexMatrix, indices: &[usize], trials: usize, seed: u64) -> Result<WielandtReport> {
    let d = s.cols();
    validate_indices(indices, d)?;
    let dec = svd(s)?;
    let closed_form = indices.iter().map(|&i| dec.spectrum.get(i).powi(2)).sum();
    let h = s.adjoint_mul(s);

    let right = &dec.right;
    let q = if right.cols() < d { complete_basis(right, d - right.cols()) } else { right.clone() };
    let singular_chain = chain_minimum(&h, &q, indices)?;

    let best_oracle = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(trial_seed(seed, t as u64));
            chain_minimum(&h, &unitary(&mut r, d), indices)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(WielandtReport { indices: indices.to_vec(), closed_form, best_oracle, singular_chain, trials })
}

/// Seed of trial `t` derived from the master seed (SplitMix64 finalizer).
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    let mut z = seed ^ t.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn validate_indices(indices: &[usize], d: usize) -> Result<()> {
    if indices.is_empty() {
        return Err(SubspaceError::Invalid("at least one index is needed".into()));
    }
    let mut prev = 0;
    for &i in indices {
        if i <= prev {
            return Err(SubspaceError::Invalid("indices must be strictly increasing and 1-based".into()));
        }
        if i > d {
            return Err(SubspaceError::Range { index: i, available: d });
        }
        prev = i;
    }
    Ok(())
}

/// `min Σ_j ⟨H x_j, x_j⟩` over orthonormal `x_j ∈ E_j = span(q_1, …, q_{i_j})`.
///
/// Independent `y_j ∈ E_j` span an admissible `U`, and Gram-Schmidt turns them
/// into an orthonormal tuple in the `E_j` with value `tr(H P_U)`. Starting
/// from the greedy tuple, each step replaces one `y_j` by the choice that
/// minimizes `tr(H P_U)` with the others fixed. The returned value is
/// attained by a feasible tuple, so it bounds the true minimum from above.
pub fn chain_minimum(h: &ComplexMatrix, q: &ComplexMatrix, indices: &[usize]) -> Result<f64> {
    validate_indices(indices, q.cols())?;
    let k = indices.len();
    let spaces: Vec<ComplexMatrix> = indices.iter().map(|&i| q.columns(0..i)).collect();
    let mut ys: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for space in &spaces {
        let (_, x) = constrained_min(h, space, &ys)?;
        ys.push(x);
    }
    let mut value = span_value(h, &ys)?;
    if k == 1 {
        return Ok(value);
    }
    for _ in 0..MAX_SWEEPS {
        let before = value;
        for j in 0..k {
            let others: Vec<Vec<Complex64>> =
                ys.iter().enumerate().filter(|&(l, _)| l != j).map(|(_, y)| y.clone()).collect();
            if let Some(y) = span_step(h, &spaces[j], &others)? {
                let mut trial = ys.clone();
                trial[j] = y;
                if let Ok(v) = span_value(h, &trial) {
                    if v < value {
                        ys = trial;
                        value = v;
                    }
                }
            }
        }
        if before - value <= 1e-14 * value.abs().max(1.0) {
            break;
        }
    }
    Ok(value)
}

fn rayleigh(h: &ComplexMatrix, x: &[Complex64]) -> f64 {
    let hx = h.mul_vec(x);
    x.iter().zip(&hx).map(|(a, b)| (a.conj() * b).re).sum()
}

/// `tr(H P_U)` for `U = span(ys)`, via Gram-Schmidt in order.
fn span_value(h: &ComplexMatrix, ys: &[Vec<Complex64>]) -> Result<f64> {
    let y = ComplexMatrix::from_columns(h.rows(), ys)?;
    let x = orthonormalize(&y)?;
    Ok((0..x.cols()).map(|j| rayleigh(h, &x.column(j))).sum())
}

/// Best `y ∈ span(space)` to join `others`: the component of `y` orthogonal
/// to `S = span(others)` should minimize the Rayleigh quotient.
fn span_step(h: &ComplexMatrix, space: &ComplexMatrix, others: &[Vec<Complex64>]) -> Result<Option<Vec<Complex64>>> {
    let s = orthonormalize(&ComplexMatrix::from_columns(h.rows(), others)?)?;
    let m = space.sub(&s.matmul(&s.adjoint_mul(space)));
    let dec = svd(&m)?;
    let r = dec.spectrum.values().iter().take_while(|&&v| v > 1e-10).count();
    if r == 0 {
        return Ok(None);
    }
    let z = dec.left.columns(0..r);
    let e = eigh(&z.adjoint_mul(&h.matmul(&z)))?;
    let w = e.vectors.column(e.values.len() - 1);
    // Preimage in `space`: c = R Σ^{-1} w.
    let scaled: Vec<Complex64> = w.iter().zip(dec.spectrum.values()).map(|(a, s)| a / s).collect();
    let c = dec.right.columns(0..r).mul_vec(&scaled);
    let y = space.mul_vec(&c);
    let n = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(Some(y.into_iter().map(|z| z / n).collect()))
}

/// Smallest Rayleigh quotient on `span(space) ∩ others^⊥`.
fn constrained_min(h: &ComplexMatrix, space: &ComplexMatrix, others: &[Vec<Complex64>]) -> Result<(f64, Vec<Complex64>)> {
    let feasible = if others.is_empty() {
        space.clone()
    } else {
        let x = ComplexMatrix::from_columns(space.rows(), others)?;
        let kmat = x.adjoint_mul(space);
        let g = kmat.adjoint_mul(&kmat);
        let e = eigh(&g)?;
        let m = e.values.len();
        let mut keep: Vec<usize> = (0..m).filter(|&i| e.values[i] <= NULL_TOL).collect();
        if keep.is_empty() {
            keep.push(m - 1);
        }
        space.matmul(&e.vectors.select_columns(&keep))
    };
    let compressed = feasible.adjoint_mul(&h.matmul(&feasible));
    let e = eigh(&compressed)?;
    let last = e.values.len() - 1;
    let x = feasible.mul_vec(&e.vectors.column(last));
    Ok((e.values[last], x))
}
