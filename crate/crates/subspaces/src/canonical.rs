//! Canonical basis of `X^d(β)` attached to a basis of `Y` via `β_i = ‖A e_i′‖`.

use rowcol_cbnorm::cb_norm_general;
use rowcol_linalg::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::{Result, SubspaceError, SubspaceFrame};

/// Largest dimension for which all `2^d` sign patterns are enumerated.
pub const MAX_ENUMERATED_DIM: usize = 10;
/// Slack for checking that a supplied basis lies in `Y`.
const CONTAINMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AveragingMethod {
    /// Sum over all `2^d` diagonal sign matrices.
    Enumerated,
    /// Diagonal extraction, which equals the average entrywise.
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalBasis {
    /// `β_i = ‖A e_i′‖`
    pub beta: Vec<f64>,
    /// `T` in frame coordinates: `T e_i′ = e_i`.
    pub t: ComplexMatrix,
    /// Coordinates of `e_i′` in the frame, as columns.
    pub coords: ComplexMatrix,
    /// `Ave_Λ Λ* G Λ` for the Gram matrix `G_ij = ⟨A e_j′, A e_i′⟩`.
    pub average: ComplexMatrix,
    /// `max |Ave_Λ Λ* G Λ − diag(β²)|`
    pub residual: f64,
    /// Largest off-diagonal entry of the average.
    pub off_diagonal: f64,
    pub method: AveragingMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// `β`, `T` and the sign-averaging identity for the basis `e′` of `Y`.
///
/// `basis` holds `e_i′` as ambient columns (`2N × d`); `None` uses the
/// frame's own orthonormal columns.
pub fn canonical_basis(y: &SubspaceFrame, basis: Option<&ComplexMatrix>) -> Result<CanonicalBasis> {
    let d = y.dim();
    let coords = match basis {
        None => ComplexMatrix::identity(d),
        Some(b) => {
            if b.rows() != y.basis().rows() || b.cols() != d {
                return Err(SubspaceError::Frame(format!(
                    "a basis of Y needs {d} columns of length {}, got {}x{}",
                    y.basis().rows(),
                    b.rows(),
                    b.cols()
                )));
            }
            let defect = y.containment_defect(b);
            if defect > CONTAINMENT_TOL {
                return Err(SubspaceError::Frame(format!("basis vectors leave Y by {defect:e}")));
            }
            y.basis().adjoint_mul(b)
        }
    };
    let t = coords.inverse().map_err(|_| SubspaceError::Frame("supplied vectors are linearly dependent".into()))?;
    let images = y.apply_ambient(&y.basis().matmul(&coords));
    let gram = images.adjoint_mul(&images);
    let beta: Vec<f64> = (0..d).map(|i| gram[(i, i)].re.max(0.0).sqrt()).collect();

    let (average, method, note) = if d <= MAX_ENUMERATED_DIM {
        (sign_average(&gram), AveragingMethod::Enumerated, None)
    } else {
        let diag: Vec<Complex64> = gram.diagonal();
        (
            ComplexMatrix::diag(&diag),
            AveragingMethod::Analytic,
            Some(format!("d = {d} > {MAX_ENUMERATED_DIM}: average taken as the diagonal of the Gram matrix")),
        )
    };
    let target = ComplexMatrix::diag_real(&beta.iter().map(|b| b * b).collect::<Vec<_>>());
    let residual = average.sub(&target).max_abs();
    let off_diagonal = average.off_diagonal_max();
    Ok(CanonicalBasis { beta, t, coords, average, residual, off_diagonal, method, note })
}

/// `2^{−d} Σ_Λ Λ* G Λ` over all real diagonal sign matrices.
///
/// Entry `(i, j)` is `G_ij · 2^{−d} Σ_Λ λ_i λ_j`; the sign sums are
/// accumulated as integers, so cancellation is exact.
pub fn sign_average(g: &ComplexMatrix) -> ComplexMatrix {
    let d = g.rows();
    assert!(d <= 30, "sign enumeration is limited to small dimensions");
    let mut counts = vec![0i64; d * d];
    for mask in 0u64..(1u64 << d) {
        let sign = |i: usize| if mask >> i & 1 == 1 { -1i64 } else { 1 };
        for i in 0..d {
            for j in 0..d {
                counts[i * d + j] += sign(i) * sign(j);
            }
        }
    }
    let total = (1u64 << d) as f64;
    ComplexMatrix::from_fn(d, d, |i, j| g[(i, j)] * (counts[i * d + j] as f64 / total))
}

/// Completely bounded norms of `T : Y → X^d(β)` and of its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalMapNorms {
    pub t_cb: f64,
    pub t_inv_cb: f64,
    /// Whether both values come from exact paths.
    pub certified: bool,
}

pub fn canonical_map_norms(y: &SubspaceFrame, cb: &CanonicalBasis) -> Result<CanonicalMapNorms> {
    let a = y.restricted_operator();
    let b = ComplexMatrix::diag_real(&cb.beta);
    let fwd = cb_norm_general(&a, &b, &cb.t)?;
    let inv = cb_norm_general(&b, &a, &cb.coords)?;
    Ok(CanonicalMapNorms { t_cb: fwd.value, t_inv_cb: inv.value, certified: fwd.certified && inv.certified })
}

/// `max_Λ ‖Λ‖cb` over sign changes `Λ e_i′ = ±e_i′` acting on `Y`.
pub fn unconditional_constant(y: &SubspaceFrame, cb: &CanonicalBasis) -> Result<f64> {
    let d = y.dim();
    if d > MAX_ENUMERATED_DIM {
        return Err(SubspaceError::Invalid(format!("sign enumeration needs d ≤ {MAX_ENUMERATED_DIM}")));
    }
    let a = y.restricted_operator();
    let mut best: f64 = 1.0;
    // Λ and −Λ have the same norm, so the last sign stays fixed.
    for mask in 0u64..(1u64 << (d - 1)) {
        let signs: Vec<f64> = (0..d).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let lambda = cb.coords.matmul(&ComplexMatrix::diag_real(&signs)).matmul(&cb.t);
        best = best.max(cb_norm_general(&a, &a, &lambda)?.value);
    }
    Ok(best)
}
