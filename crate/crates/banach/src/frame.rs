use rowcol_linalg::{orthonormalize, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::{BanachError, Result};

/// Columns spanning `Y ⊂ ℝ ⊕₁ ℝ^d`; entry 0 of each column is the `ℝ` coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BanachFrameSpec", into = "BanachFrameSpec")]
pub struct BanachFrame {
    d: usize,
    columns: Vec<Vec<f64>>,
    /// Real orthonormal basis of the span, `(1 + d) × m`.
    orthonormal: Vec<Vec<f64>>,
}

/// Wire form: `{"depth": d, "columns": [[s, ξ_1, …, ξ_d], …]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanachFrameSpec {
    pub depth: usize,
    pub columns: Vec<Vec<f64>>,
}

impl BanachFrame {
    pub fn new(d: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        if d == 0 {
            return Err(BanachError::Frame("the l2 block needs d ≥ 1".into()));
        }
        if columns.is_empty() {
            return Err(BanachError::Frame("a frame needs at least one column".into()));
        }
        if let Some(bad) = columns.iter().position(|c| c.len() != d + 1) {
            return Err(BanachError::Frame(format!("column {bad} should have length {}", d + 1)));
        }
        if columns.iter().flatten().any(|x| !x.is_finite()) {
            return Err(BanachError::Frame("entries must be finite".into()));
        }
        if columns.len() > d + 1 {
            return Err(BanachError::Frame(format!("{} columns cannot be independent in dimension {}", columns.len(), d + 1)));
        }
        let rows: Vec<Vec<f64>> = (0..=d).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        let q = orthonormalize(&ComplexMatrix::from_real_rows(&rows)?)
            .map_err(|e| BanachError::Frame(format!("columns are linearly dependent ({e})")))?;
        let orthonormal = (0..q.cols()).map(|j| q.column(j).iter().map(|z| z.re).collect()).collect();
        Ok(BanachFrame { d, columns, orthonormal })
    }

    pub fn depth(&self) -> usize {
        self.d
    }

    /// `dim Y`
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    /// Orthonormal (Euclidean) basis of `Y`, as columns.
    pub fn orthonormal(&self) -> &[Vec<f64>] {
        &self.orthonormal
    }

    /// Frame for `span(Y ∪ extra)`.
    pub fn extend(&self, extra: &[Vec<f64>]) -> Result<Self> {
        let mut cols = self.columns.clone();
        cols.extend_from_slice(extra);
        Self::new(self.d, cols)
    }

    /// Applies an orthogonal `d × d` matrix (given by rows) to the `ℓ₂` block.
    pub fn rotate_l2(&self, rot: &[Vec<f64>]) -> Result<Self> {
        if rot.len() != self.d || rot.iter().any(|r| r.len() != self.d) {
            return Err(BanachError::Frame(format!("rotation must be {0} × {0}", self.d)));
        }
        let cols = self
            .columns
            .iter()
            .map(|c| {
                let mut out = vec![c[0]];
                out.extend(rot.iter().map(|r| r.iter().zip(&c[1..]).map(|(a, b)| a * b).sum::<f64>()));
                out
            })
            .collect();
        Self::new(self.d, cols)
    }
}

impl TryFrom<BanachFrameSpec> for BanachFrame {
    type Error = BanachError;

    fn try_from(spec: BanachFrameSpec) -> Result<Self> {
        BanachFrame::new(spec.depth, spec.columns)
    }
}

impl From<BanachFrame> for BanachFrameSpec {
    fn from(f: BanachFrame) -> Self {
        BanachFrameSpec { depth: f.d, columns: f.columns }
    }
}

/// `Φ(t) = span[t ⊕ (1−t)e_0, 0 ⊕ e_1, …, 0 ⊕ e_{d−1}]`, with `e_0, …, e_{d−1}`
/// the coordinates of `ℝ^d`.
pub fn make_phi(t: f64, d: usize) -> Result<BanachFrame> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BanachError::Domain(format!("t = {t} is outside [0, 1]")));
    }
    if d < 2 {
        return Err(BanachError::Domain("Φ(t) needs d ≥ 2".into()));
    }
    let mut cols = Vec::with_capacity(d);
    let mut first = vec![0.0; d + 1];
    first[0] = t;
    first[1] = 1.0 - t;
    cols.push(first);
    for i in 1..d {
        let mut c = vec![0.0; d + 1];
        c[i + 1] = 1.0;
        cols.push(c);
    }
    BanachFrame::new(d, cols)
}
