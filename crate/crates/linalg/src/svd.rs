use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gram::complete_basis;
use crate::{ComplexMatrix, LinalgError, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values sorted in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for SingularSpectrum {
    type Error = LinalgError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        SingularSpectrum::new(values)
    }
}

impl From<SingularSpectrum> for Vec<f64> {
    fn from(s: SingularSpectrum) -> Self {
        s.values
    }
}

impl SingularSpectrum {
    /// Accepts values that are finite, nonnegative and nonincreasing.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(LinalgError::Dimension(format!("singular value {k} is negative or non-finite")));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(LinalgError::Dimension("singular values must be nonincreasing".into()));
        }
        Ok(SingularSpectrum { values })
    }

    /// Sorts arbitrary nonnegative values into a spectrum.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The k-th value, 1-based, with zero past the end.
    pub fn get(&self, k: usize) -> f64 {
        assert!(k >= 1, "spectrum indices are 1-based");
        self.values.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// `m = left · diag(spectrum) · right*`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub spectrum: SingularSpectrum,
    pub right: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let s = ComplexMatrix::diag_real(self.spectrum.values());
        self.left.matmul(&s).matmul(&self.right.adjoint())
    }
}

/// Thin SVD by one-sided (Hestenes) Jacobi rotations.
///
/// For an `m x n` input with `k = min(m, n)`, `left` is `m x k` and `right`
/// is `n x k`, both with orthonormal columns.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    m.ensure_nonempty()?;
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint())?;
        return Ok(Svd { left: t.right, spectrum: t.spectrum, right: t.left });
    }
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..cols).map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let top = norms[order[0]];
    let cutoff = top * f64::EPSILON * (rows as f64);
    let mut left_cols = Vec::with_capacity(cols);
    let mut values = Vec::with_capacity(cols);
    for &j in &order {
        let s = norms[j];
        if s > cutoff && s > 0.0 {
            left_cols.push(a[j].iter().map(|z| z / s).collect::<Vec<_>>());
            values.push(s);
        } else {
            values.push(s);
        }
    }
    let rank = left_cols.len();
    let known = ComplexMatrix::from_columns(rows, &left_cols)?;
    let left = complete_basis(&known, cols - rank);
    let right = ComplexMatrix::from_columns(cols, &order.iter().map(|&j| v[j].clone()).collect::<Vec<_>>())?;
    Ok(Svd { left, spectrum: SingularSpectrum::new(values)?, right })
}

// Replaces columns p, q by c·a_p - s·a_q', s·a_p + c·a_q' where a_q' = conj(phase)·a_q.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    let ph = phase.conj();
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = ph * *y;
        let nx = *x * c - yq * s;
        let ny = *x * s + yq * c;
        *x = nx;
        *y = ny;
    }
}

/// Operator norm and Hilbert-Schmidt norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixNorms {
    pub op_norm: f64,
    pub hs_norm: f64,
}

pub fn matrix_norms(m: &ComplexMatrix) -> Result<MatrixNorms> {
    let s = svd(m)?;
    let op_norm = s.spectrum.largest();
    let hs_norm = s.spectrum.values().iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(MatrixNorms { op_norm, hs_norm: hs_norm.max(op_norm) })
}

impl ComplexMatrix {
    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        svd(self).map(|s| s.spectrum.largest()).unwrap_or(0.0)
    }
}
