use num_complex::Complex64;

use crate::{ComplexMatrix, LinalgError, Result, STRUCTURAL_TOL};

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

// Removes the components of `v` along `basis`, twice for stability.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

/// Gram-Schmidt with reorthogonalization.
///
/// Fails with the (0-based) index of the first column whose residual after
/// projection is below `1e-10` times its original length.
pub fn orthonormalize(frame: &ComplexMatrix) -> Result<ComplexMatrix> {
    frame.ensure_nonempty()?;
    let rows = frame.rows();
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(frame.cols());
    for j in 0..frame.cols() {
        let mut v = frame.column(j);
        let original = norm(&v);
        project_out(&mut v, &out);
        let residual = norm(&v);
        if original == 0.0 || residual <= STRUCTURAL_TOL * original {
            return Err(LinalgError::RankDeficient { column: j, residual: if original == 0.0 { 0.0 } else { residual / original } });
        }
        v.iter_mut().for_each(|x| *x /= residual);
        out.push(v);
    }
    ComplexMatrix::from_columns(rows, &out)
}

/// Appends `extra` orthonormal columns to an orthonormal `known` block.
///
/// Candidates are the standard basis vectors, taken in order and kept when
/// they add a direction of length at least 1/2.
pub fn complete_basis(known: &ComplexMatrix, extra: usize) -> ComplexMatrix {
    let rows = known.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..known.cols()).map(|j| known.column(j)).collect();
    let target = cols.len() + extra;
    assert!(target <= rows, "cannot complete beyond the ambient dimension");
    let mut threshold = 0.5;
    while cols.len() < target {
        for e in 0..rows {
            if cols.len() == target {
                break;
            }
            let mut v = vec![Complex64::new(0.0, 0.0); rows];
            v[e] = Complex64::new(1.0, 0.0);
            project_out(&mut v, &cols);
            let r = norm(&v);
            if r >= threshold {
                v.iter_mut().for_each(|x| *x /= r);
                cols.push(v);
            }
        }
        threshold *= 0.5;
    }
    ComplexMatrix::from_columns(rows, &cols).expect("columns have the ambient length")
}

/// Orthogonal projector onto the column span of an orthonormal frame.
pub fn projector(frame: &ComplexMatrix) -> ComplexMatrix {
    frame.matmul(&frame.adjoint())
}
