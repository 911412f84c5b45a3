use rowcol_linalg::{eigh, Complex64, ComplexMatrix};

use crate::sdp::{projected_gradient, GradientOptions};
use crate::{knapsack, CbNormError, CbNormResult, Method, Result, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeneralOptions {
    pub gradient: GradientOptions,
    /// Skip the exact path for commuting data and always run the optimizer.
    pub force_optimizer: bool,
}

const CONTRACTION_SLACK: f64 = 1e-10;

/// cb-norm of `T : X(A) -> X(B)` with default options.
pub fn cb_norm_general(a: &ComplexMatrix, b: &ComplexMatrix, t: &ComplexMatrix) -> Result<CbNormResult> {
    cb_norm_general_with(a, b, t, &GeneralOptions::default())
}

/// `T` is `p x q`, `A` has `q` columns and `B` has `p` columns.
pub fn cb_norm_general_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    t: &ComplexMatrix,
    opts: &GeneralOptions,
) -> Result<CbNormResult> {
    t.ensure_nonempty()?;
    let (p, q) = t.shape();
    if a.cols() != q || b.cols() != p {
        return Err(CbNormError::InvalidInput(format!(
            "T is {p}x{q} but A has {} columns and B has {}",
            a.cols(),
            b.cols()
        )));
    }
    for (name, m) in [("A", a), ("B", b)] {
        let norm = if m.is_empty() { 0.0 } else { m.op_norm() };
        if norm > 1.0 + CONTRACTION_SLACK {
            return Err(CbNormError::Precondition(format!("{name} is not a contraction (norm {norm})")));
        }
    }
    let op_norm = t.op_norm();
    let bt = if b.rows() == 0 { ComplexMatrix::zeros(0, q) } else { b.matmul(t) };
    let m = if bt.rows() == 0 { ComplexMatrix::zeros(q, q) } else { bt.adjoint_mul(&bt) };
    let g = if a.rows() == 0 { ComplexMatrix::zeros(q, q) } else { a.adjoint_mul(a) };

    if !opts.force_optimizer {
        if let Some(u) = joint_eigenbasis(&m, &g)? {
            let md: Vec<f64> = u.adjoint().matmul(&m).matmul(&u).diagonal().iter().map(|z| z.re.max(0.0)).collect();
            let gd: Vec<f64> = u.adjoint().matmul(&g).matmul(&u).diagonal().iter().map(|z| z.re.max(0.0)).collect();
            let k = knapsack(&gd, &md);
            let root: Vec<Complex64> = k.s.iter().map(|s| Complex64::new(s.sqrt(), 0.0)).collect();
            let witness = u.matmul(&ComplexMatrix::diag(&root));
            let value = op_norm.powi(2).max(k.value).sqrt();
            return Ok(CbNormResult {
                value,
                upper_bound: Some(value),
                op_norm,
                sup_squared: k.value,
                witness: Witness::Matrix(witness),
                method: Method::ExactGreedy,
                certified: true,
            });
        }
    }

    let out = projected_gradient(&m, &g, &opts.gradient)?;
    let witness = eigh(&out.v)?.map(|x| x.max(0.0).sqrt());
    Ok(CbNormResult {
        value: op_norm.powi(2).max(out.value).sqrt(),
        upper_bound: Some(op_norm.powi(2).max(out.dual.value).sqrt()),
        op_norm,
        sup_squared: out.value,
        witness: Witness::Matrix(witness),
        method: Method::Optimizer,
        certified: false,
    })
}

/// A unitary diagonalizing both `m` and `g` when they commute.
fn joint_eigenbasis(m: &ComplexMatrix, g: &ComplexMatrix) -> Result<Option<ComplexMatrix>> {
    let sm = m.max_abs();
    let sg = g.max_abs();
    let comm = m.matmul(g).sub(&g.matmul(m)).max_abs();
    if comm > 1e-12 * (sm * sg).max(f64::MIN_POSITIVE) && sm > 0.0 && sg > 0.0 {
        return Ok(None);
    }
    let ratio = if sm > 0.0 && sg > 0.0 { sg / sm } else { 1.0 };
    for c in [0.618_033_988_749_894_8, 1.324_717_957_244_746, std::f64::consts::E] {
        let u = eigh(&g.add(&m.scale_real(c * ratio)))?.vectors;
        let off_m = u.adjoint().matmul(m).matmul(&u).off_diagonal_max();
        let off_g = u.adjoint().matmul(g).matmul(&u).off_diagonal_max();
        if off_m <= 1e-11 * sm.max(f64::MIN_POSITIVE) && off_g <= 1e-11 * sg.max(f64::MIN_POSITIVE) {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_contraction_is_rejected() {
        let a = ComplexMatrix::diag_real(&[2.0]);
        let t = ComplexMatrix::identity(1);
        assert!(matches!(cb_norm_general(&a, &t, &t), Err(CbNormError::Precondition(_))));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = ComplexMatrix::identity(2);
        let t = ComplexMatrix::identity(3);
        assert!(matches!(cb_norm_general(&a, &t, &t), Err(CbNormError::InvalidInput(_))));
    }
}
