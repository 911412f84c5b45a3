use rowcol_linalg::{ComplexMatrix, LinalgError};
use rowcol_xspace::WeightSequence;
use serde::{Deserialize, Serialize};

use crate::{cb_norm_diag_identity, cb_norm_general, CbNormError, Result};

/// Formal identities against an isomorphism `U : X^d(α) -> X^d(β)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SameBasis {
    /// `max{‖U‖cb, ‖U⁻¹‖cb}`
    pub c: f64,
    pub u_cb: f64,
    pub u_inv_cb: f64,
    /// `‖id : X^d(α) -> X^d(β)‖cb`
    pub id_cb: f64,
    pub id_inv_cb: f64,
    pub id_product: f64,
    /// `id_product ≤ 16 C⁴ + 1e-6`
    pub bound_holds: bool,
    /// Each identity below `4C²` (up to `1e-6`).
    pub factor_bounds_hold: bool,
}

pub fn same_basis_check(alpha: &WeightSequence, beta: &WeightSequence, u: &ComplexMatrix, depth: u64) -> Result<SameBasis> {
    let n = depth as usize;
    if n == 0 || u.shape() != (n, n) {
        return Err(CbNormError::InvalidInput(format!("U must be {n}x{n}")));
    }
    let u_inv = u.inverse().map_err(|e| match e {
        LinalgError::Singular => CbNormError::Precondition("U is not invertible".into()),
        other => other.into(),
    })?;
    let a = ComplexMatrix::diag_real(&alpha.materialize(depth)?);
    let b = ComplexMatrix::diag_real(&beta.materialize(depth)?);
    let u_cb = cb_norm_general(&a, &b, u)?.value;
    let u_inv_cb = cb_norm_general(&b, &a, &u_inv)?.value;
    let c = u_cb.max(u_inv_cb);
    let id_cb = cb_norm_diag_identity(alpha, beta, depth)?.value;
    let id_inv_cb = cb_norm_diag_identity(beta, alpha, depth)?.value;
    let id_product = id_cb * id_inv_cb;
    Ok(SameBasis {
        c,
        u_cb,
        u_inv_cb,
        id_cb,
        id_inv_cb,
        id_product,
        bound_holds: id_product <= 16.0 * c.powi(4) + 1e-6,
        factor_bounds_hold: id_cb.max(id_inv_cb) <= 4.0 * c * c + 1e-6,
    })
}

/// The chain of constants for a `C`-completely unconditional basis of
/// `X^d(α)` compared with the canonical one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniqueBasisConstants {
    /// Bound on `‖T‖cb` for `T : g_i -> e_i(β)`.
    pub t: f64,
    pub t_inv: f64,
    /// Bound on each formal identity between `X^d(β)` and `X^d(α)`.
    pub id: f64,
    /// Bound on `‖U‖cb` for `U = id ∘ T`.
    pub u: f64,
    pub u_inv: f64,
    /// `u · u_inv`
    pub equivalence: f64,
}

pub fn unique_basis_constants(c: f64) -> UniqueBasisConstants {
    let t = c;
    let t_inv = c * c;
    // The identity estimate applied with constant max{t, t_inv} = C² for C ≥ 1.
    let id = 4.0 * t_inv * t_inv;
    let u = id * t;
    let u_inv = id * t_inv;
    UniqueBasisConstants { t, t_inv, id, u, u_inv, equivalence: u * u_inv }
}
