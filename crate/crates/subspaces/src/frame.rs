//! Subspaces `Y ⊂ span{e_i, f_i : i ≤ N}` given by orthonormal frames.

use rowcol_linalg::{svd, Complex64, ComplexMatrix, SingularSpectrum};
use rowcol_xspace::WeightSequence;
use serde::{Deserialize, Serialize};

use crate::{Result, SubspaceError};

/// Relative cutoff below which a direction of a raw span is dropped.
const RANK_TOL: f64 = 1e-10;
/// Slack allowed in `s_k(Y) ≤ s_k^o`.
pub const INTERLACING_TOL: f64 = 1e-10;

/// `Y` inside the first `N` coordinates of `X^d(α)`.
///
/// Coordinates `0..N` hold the `e`-part and `N..2N` the `f`-part, so the
/// ambient operator is `diag(α_1, …, α_N, 0, …, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceFrame {
    ambient: WeightSequence,
    weights: Vec<f64>,
    basis: ComplexMatrix,
}

/// One matrix entry: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> Complex64 {
        match self {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Serialized frame; `columns` may be any spanning set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub ambient: WeightSequence,
    pub depth: usize,
    pub columns: Vec<Vec<Entry>>,
}

impl SubspaceFrame {
    /// Orthonormal basis of the column span of `span` (`2N × m`).
    pub fn new(ambient: WeightSequence, depth: usize, span: &ComplexMatrix) -> Result<Self> {
        if depth == 0 {
            return Err(SubspaceError::Frame("depth must be positive".into()));
        }
        if span.rows() != 2 * depth {
            return Err(SubspaceError::Frame(format!("columns have length {} but 2N = {}", span.rows(), 2 * depth)));
        }
        if span.cols() == 0 {
            return Err(SubspaceError::Frame("no columns given".into()));
        }
        let weights = ambient.materialize(depth as u64)?;
        let dec = svd(span)?;
        let top = dec.spectrum.largest();
        if top == 0.0 {
            return Err(SubspaceError::Frame("all columns vanish".into()));
        }
        let rank = dec.spectrum.values().iter().take_while(|&&s| s > RANK_TOL * top).count();
        let basis = dec.left.columns(0..rank);
        Ok(SubspaceFrame { ambient, weights, basis })
    }

    pub fn from_spec(spec: &FrameSpec) -> Result<Self> {
        let rows = 2 * spec.depth;
        let cols: Vec<Vec<Complex64>> = spec.columns.iter().map(|c| c.iter().map(|e| e.value()).collect()).collect();
        if let Some(bad) = cols.iter().position(|c| c.len() != rows) {
            return Err(SubspaceError::Frame(format!("column {bad} does not have length 2N = {rows}")));
        }
        if cols.is_empty() {
            return Err(SubspaceError::Frame("no columns given".into()));
        }
        let span = ComplexMatrix::from_columns(rows, &cols)?;
        Self::new(spec.ambient.clone(), spec.depth, &span)
    }

    pub fn to_spec(&self) -> FrameSpec {
        let columns = (0..self.dim())
            .map(|j| self.basis.column(j).into_iter().map(|z| Entry::Complex([z.re, z.im])).collect())
            .collect();
        FrameSpec { ambient: self.ambient.clone(), depth: self.depth(), columns }
    }

    /// `span{e_i : i ∈ e} + span{f_i : i ∈ f}`, 1-based.
    pub fn coordinate(ambient: WeightSequence, depth: usize, e: &[usize], f: &[usize]) -> Result<Self> {
        let mut cols = Vec::new();
        for (&i, offset) in e.iter().map(|i| (i, 0)).chain(f.iter().map(|i| (i, depth))) {
            if i == 0 || i > depth {
                return Err(SubspaceError::Range { index: i, available: depth });
            }
            let mut v = vec![Complex64::new(0.0, 0.0); 2 * depth];
            v[offset + i - 1] = Complex64::new(1.0, 0.0);
            cols.push(v);
        }
        if cols.is_empty() {
            return Err(SubspaceError::Frame("no coordinates given".into()));
        }
        Self::new(ambient, depth, &ComplexMatrix::from_columns(2 * depth, &cols)?)
    }

    /// `span{sin φ e_i + cos φ f_i}` for each `(i, sin φ)`, 1-based.
    pub fn from_angles(ambient: WeightSequence, depth: usize, angles: &[(usize, f64)]) -> Result<Self> {
        let mut cols = Vec::new();
        for &(i, sin) in angles {
            if i == 0 || i > depth {
                return Err(SubspaceError::Range { index: i, available: depth });
            }
            if !(0.0..=1.0).contains(&sin) {
                return Err(SubspaceError::Invalid(format!("sin φ_{i} = {sin} is outside [0,1]")));
            }
            let mut v = vec![Complex64::new(0.0, 0.0); 2 * depth];
            v[i - 1] = Complex64::new(sin, 0.0);
            v[depth + i - 1] = Complex64::new((1.0 - sin * sin).max(0.0).sqrt(), 0.0);
            cols.push(v);
        }
        if cols.is_empty() {
            return Err(SubspaceError::Frame("no angles given".into()));
        }
        Self::new(ambient, depth, &ComplexMatrix::from_columns(2 * depth, &cols)?)
    }

    pub fn ambient(&self) -> &WeightSequence {
        &self.ambient
    }

    /// `α_1, …, α_N`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn depth(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Orthonormal columns, `2N × dim`.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// `A` applied to vectors given in ambient coordinates; only the `e`-rows survive.
    pub fn apply_ambient(&self, v: &ComplexMatrix) -> ComplexMatrix {
        let n = self.depth();
        ComplexMatrix::from_fn(n, v.cols(), |i, j| v[(i, j)] * self.weights[i])
    }

    /// `A|_Y` in the frame's coordinates, `N × dim`.
    pub fn restricted_operator(&self) -> ComplexMatrix {
        self.apply_ambient(&self.basis)
    }

    /// `max_j ‖P_Y v_j − v_j‖` for ambient columns `v_j`.
    pub fn containment_defect(&self, v: &ComplexMatrix) -> f64 {
        let coeff = self.basis.adjoint_mul(v);
        let back = self.basis.matmul(&coeff);
        let diff = back.sub(v);
        (0..v.cols())
            .map(|j| diff.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Ambient singular values `s^o`: the weights sorted nonincreasingly.
    pub fn ambient_spectrum(&self) -> Vec<f64> {
        let mut s = self.weights.clone();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// `max_k (s_k(Y) − s_k^o)`, clipped at 0.
    pub fn interlacing_defect(&self, spectrum: &SingularSpectrum) -> f64 {
        let outer = self.ambient_spectrum();
        spectrum
            .values()
            .iter()
            .enumerate()
            .map(|(k, &s)| s - outer.get(k).copied().unwrap_or(0.0))
            .fold(0.0, f64::max)
    }
}

/// Singular values of `A|_Y`, checked against `s_k(Y) ≤ s_k^o`.
pub fn restricted_spectrum(y: &SubspaceFrame) -> Result<SingularSpectrum> {
    let spectrum = svd(&y.restricted_operator())?.spectrum;
    let defect = y.interlacing_defect(&spectrum);
    if defect > INTERLACING_TOL {
        return Err(SubspaceError::Frame(format!("interlacing fails by {defect:e}")));
    }
    Ok(spectrum)
}
