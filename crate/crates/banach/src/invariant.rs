use rowcol_linalg::{complete_basis, Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::{BanachError, BanachFrame, Result};

/// `‖P y‖² = ‖y‖²·ρ²` below this counts as `Y ⊆ {s = 0}`.
const SLICE_TOL: f64 = 1e-14;
/// Slack for the canonical-form checks on the attaining vector.
const CANONICAL_TOL: f64 = 1e-9;
pub const DEFAULT_ISOMETRY_TOL: f64 = 1e-9;

/// `|s| + ‖ξ‖₂` for `x = s ⊕ ξ`.
pub fn sum_norm(x: &[f64]) -> f64 {
    x[0].abs() + x[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CInvariant {
    /// `c(Y) = ‖P|_Y‖`
    pub c: f64,
    /// Unit vector `x = c ⊕ (1 − c)ξ₀` with `|Px| = c`.
    pub maximizer: Vec<f64>,
    /// `min ‖ξ‖₂` over `Y ∩ {s = 1}`; absent when the slice is empty.
    pub slice_min: Option<f64>,
}

/// `c(Y)` from the least-squares point of the slice `Y ∩ {s = 1}`.
///
/// With `Q` an orthonormal basis of `Y` and `p = Q Q^T e_ℝ`, the slice point
/// of least `‖ξ‖₂` is `p / p_0`, so `c = 1 / (1 + ‖p_ξ‖ / p_0)`.
pub fn c_invariant(y: &BanachFrame) -> Result<CInvariant> {
    let q = y.orthonormal();
    let v0: Vec<f64> = q.iter().map(|col| col[0]).collect();
    let rho_sq: f64 = v0.iter().map(|v| v * v).sum();
    let n = y.depth() + 1;
    if rho_sq <= SLICE_TOL {
        let mut maximizer = q[0].clone();
        maximizer[0] = 0.0;
        let norm = l2(&maximizer[1..]);
        maximizer.iter_mut().for_each(|v| *v /= norm);
        return Ok(CInvariant { c: 0.0, maximizer, slice_min: None });
    }
    let p: Vec<f64> = (0..n).map(|i| q.iter().zip(&v0).map(|(col, w)| col[i] * w).sum()).collect();
    let xi_min = l2(&p[1..]) / p[0];
    let c = 1.0 / (1.0 + xi_min);
    let mut maximizer = vec![0.0; n];
    maximizer[0] = c;
    if xi_min > 0.0 {
        let scale = (1.0 - c) / l2(&p[1..]);
        for i in 1..n {
            maximizer[i] = p[i] * scale;
        }
    }
    Ok(CInvariant { c, maximizer, slice_min: Some(xi_min) })
}

/// `φ(t) = t + √((1 − t)² + 1)`
pub fn phi_fn(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BanachError::Domain(format!("t = {t} is outside [0, 1]")));
    }
    Ok(t + ((1.0 - t).powi(2) + 1.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakSupCheck {
    pub c: f64,
    /// `max_i ‖x + y_i‖`
    pub sup_norm: f64,
    /// `min_i ‖x + y_i‖`
    pub inf_norm: f64,
    /// `φ(c)`
    pub phi_c: f64,
    /// Number of orthonormal vectors `y_i` spanning `Y ∩ ℓ₂ ⊖ x`.
    pub count: usize,
    /// `max_i |⟨ξ₀, y_i⟩|`
    pub orthogonality_defect: f64,
}

/// Writes `Y = span[x, Y′]` with `x` attaining `c(Y)` and `Y′ ⊂ ℓ₂` orthogonal
/// to `ξ₀`, then evaluates `‖x + y_i‖` on an orthonormal basis `y_i` of `Y′`.
pub fn weak_sup_check(y: &BanachFrame) -> Result<WeakSupCheck> {
    let inv = c_invariant(y)?;
    let x = &inv.maximizer;
    let attained = (sum_norm(x) - 1.0).abs().max((x[0].abs() - inv.c).abs());
    if attained > CANONICAL_TOL {
        return Err(BanachError::Canonical(format!("attaining vector misses by {attained:e}")));
    }
    let q = y.orthonormal();
    let r = q.len();
    if r < 2 {
        return Err(BanachError::Canonical("Y ∩ l2 orthogonal to the attaining vector is trivial".into()));
    }
    // Coordinates in `Q` of the attaining direction; its complement spans `Y′`.
    let coeff: Vec<f64> = q.iter().map(|col| col.iter().zip(x).map(|(a, b)| a * b).sum()).collect();
    let norm = l2(&coeff);
    let known = ComplexMatrix::from_columns(r, &[coeff.iter().map(|v| Complex64::new(v / norm, 0.0)).collect()])?;
    let z = complete_basis(&known, r - 1);

    let xi0: Vec<f64> = if inv.c < 1.0 { x[1..].iter().map(|v| v / (1.0 - inv.c)).collect() } else { vec![0.0; y.depth()] };
    let phi_c = phi_fn(inv.c)?;
    let mut sup_norm = f64::NEG_INFINITY;
    let mut inf_norm = f64::INFINITY;
    let mut defect: f64 = 0.0;
    for j in 1..r {
        let w: Vec<f64> = (0..r).map(|k| z[(k, j)].re).collect();
        let mut yi: Vec<f64> = (0..=y.depth()).map(|i| q.iter().zip(&w).map(|(col, a)| col[i] * a).sum()).collect();
        if yi[0].abs() > CANONICAL_TOL {
            return Err(BanachError::Canonical(format!("basis vector of Y′ has ℝ-coordinate {:e}", yi[0])));
        }
        yi[0] = 0.0;
        let len = l2(&yi);
        yi.iter_mut().for_each(|v| *v /= len);
        defect = defect.max(xi0.iter().zip(&yi[1..]).map(|(a, b)| a * b).sum::<f64>().abs());
        let sum: Vec<f64> = x.iter().zip(&yi).map(|(a, b)| a + b).collect();
        let v = sum_norm(&sum);
        sup_norm = sup_norm.max(v);
        inf_norm = inf_norm.min(v);
    }
    if defect > CANONICAL_TOL {
        return Err(BanachError::Canonical(format!("Y′ is not orthogonal to ξ₀ (defect {defect:e})")));
    }
    Ok(WeakSupCheck { c: inv.c, sup_norm, inf_norm, phi_c, count: r - 1, orthogonality_defect: defect })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryVerdict {
    pub isometric: bool,
    pub c_y: f64,
    pub c_z: f64,
    pub tol: f64,
}

/// Isometry, and equally almost-isometric bi-embeddability, decided by `c`.
pub fn isometric(y: &BanachFrame, z: &BanachFrame, tol: f64) -> Result<IsometryVerdict> {
    let c_y = c_invariant(y)?.c;
    let c_z = c_invariant(z)?.c;
    Ok(IsometryVerdict { isometric: (c_y - c_z).abs() <= tol, c_y, c_z, tol })
}

fn check_t(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(BanachError::Domain(format!("t = {t} is outside [0, 1]")))
    }
}

/// `x ∈ U_t = {s ⊕ ξ : |s| > t, ‖ξ‖ < √(1 − t²)}`.
pub fn ut_member(x: &[f64], t: f64) -> Result<bool> {
    check_t(t)?;
    if x.is_empty() {
        return Err(BanachError::Domain("x needs an ℝ coordinate".into()));
    }
    Ok(x[0].abs() > t && l2(&x[1..]) < (1.0 - t * t).sqrt())
}

/// Whether `Y ∩ U_t ≠ ∅`, decided exactly.
///
/// Points of `Y` with `s = λ` have `‖ξ‖ ≥ |λ|·m` for the slice minimum `m`,
/// with equality on the least-squares line, so the intersection is nonempty
/// iff `t·m < √(1 − t²)`.
pub fn ut_intersects(y: &BanachFrame, t: f64) -> Result<bool> {
    check_t(t)?;
    Ok(match c_invariant(y)?.slice_min {
        None => false,
        Some(m) => t * m < (1.0 - t * t).sqrt(),
    })
}
