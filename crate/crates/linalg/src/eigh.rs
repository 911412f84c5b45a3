use num_complex::Complex64;

use crate::{ComplexMatrix, LinalgError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `h = vectors · diag(values) · vectors*`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in nonincreasing order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.vectors.matmul(&ComplexMatrix::diag_real(&self.values)).matmul(&self.vectors.adjoint())
    }

    /// Rebuilds the matrix after applying `f` to every eigenvalue.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let vals: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        self.vectors.matmul(&ComplexMatrix::diag_real(&vals)).matmul(&self.vectors.adjoint())
    }
}

/// Cyclic complex Jacobi method for Hermitian matrices.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigen> {
    h.ensure_nonempty()?;
    let n = h.rows();
    if n != h.cols() {
        return Err(LinalgError::Dimension("eigh needs a square matrix".into()));
    }
    let defect = h.hermitian_defect();
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    if defect > 1e-10 * scale {
        return Err(LinalgError::NotHermitian(defect));
    }
    // Work on the exact hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = a.off_diagonal_max();
        if off == 0.0 || off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let r = g.norm();
                if r < 1e-300 {
                    continue;
                }
                let ap = a[(p, p)].re;
                let aq = a[(q, q)].re;
                let phase = g / r;
                let tau = (aq - ap) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // J has J_pp = J_qq = c, J_pq = s·phase, J_qp = -s·conj(phase).
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * jqp.conj();
                    a[(q, k)] = apk * jpq.conj() + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn two_by_two_with_complex_coupling() {
        let h = ComplexMatrix::new(2, 2, vec![c64(2.0, 0.0), c64(0.0, 1.0), c64(0.0, -1.0), c64(2.0, 0.0)]).unwrap();
        let e = eigh(&h).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().sub(&h).max_abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let h = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(eigh(&h), Err(LinalgError::NotHermitian(_))));
    }
}
