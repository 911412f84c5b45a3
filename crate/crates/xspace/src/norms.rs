use std::collections::BTreeSet;

use rand::Rng;
use rowcol_linalg::random::rng;
use rowcol_linalg::{eigh, svd, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::{MatElement, Result, WeightSequence, XSpaceError};

/// The two Gram operator norms whose maximum is the squared norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormParts {
    /// `‖Σ a_i a_i* + Σ b_i b_i*‖`
    pub row: f64,
    /// `‖Σ α_i² a_i* a_i‖`
    pub column: f64,
}

impl NormParts {
    pub fn value(&self) -> f64 {
        self.row.max(self.column).sqrt()
    }
}

fn largest_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    if h.max_abs() == 0.0 {
        return Ok(0.0);
    }
    Ok(eigh(h)?.values[0].max(0.0))
}

pub fn norm_parts(alpha: &WeightSequence, x: &MatElement) -> Result<NormParts> {
    let n = x.n();
    let mut row = ComplexMatrix::zeros(n, n);
    let mut col = ComplexMatrix::zeros(n, n);
    for c in x.e() {
        let w = alpha.get(c.index)?;
        row.add_assign(&c.matrix.matmul(&c.matrix.adjoint()));
        col.add_assign(&c.matrix.adjoint_mul(&c.matrix).scale_real(w * w));
    }
    for c in x.f() {
        row.add_assign(&c.matrix.matmul(&c.matrix.adjoint()));
    }
    Ok(NormParts { row: largest_eigenvalue(&row)?, column: largest_eigenvalue(&col)? })
}

/// Norm of `x` in `M_n(X^d(α))` from the Gram formula.
pub fn xd_norm(alpha: &WeightSequence, x: &MatElement) -> Result<f64> {
    Ok(norm_parts(alpha, x)?.value())
}

/// Norm of `x` computed from concrete operators: the block row
/// `[a_1 … a_m | b_1 … b_k]` and the block column of the `α_i a_i`.
pub fn concrete_rep_norm(alpha: &WeightSequence, x: &MatElement) -> Result<f64> {
    let n = x.n();
    let mut row = ComplexMatrix::zeros(n, 0);
    let mut column = ComplexMatrix::zeros(0, n);
    for c in x.e() {
        let w = alpha.get(c.index)?;
        row = row.hstack(&c.matrix);
        column = column.vstack(&c.matrix.scale_real(w));
    }
    for c in x.f() {
        row = row.hstack(&c.matrix);
    }
    let op = |m: &ComplexMatrix| -> Result<f64> {
        if m.is_empty() || m.max_abs() == 0.0 {
            Ok(0.0)
        } else {
            Ok(svd(m)?.spectrum.largest())
        }
    };
    Ok(op(&row)?.max(op(&column)?))
}

/// Disjoint index blocks whose union is `1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacePartition {
    blocks: Vec<Vec<u64>>,
}

impl SpacePartition {
    pub fn new(blocks: Vec<Vec<u64>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            for &i in b {
                if i == 0 {
                    return Err(XSpaceError::Partition("indices are 1-based".into()));
                }
                if !seen.insert(i) {
                    return Err(XSpaceError::Partition(format!("index {i} lies in two blocks")));
                }
            }
        }
        let n = seen.len() as u64;
        if let Some(&max) = seen.last() {
            if max != n {
                let gap = (1..=max).find(|i| !seen.contains(i)).unwrap_or(max);
                return Err(XSpaceError::Partition(format!("index {gap} is not covered")));
            }
        }
        Ok(SpacePartition { blocks })
    }

    /// Consecutive blocks of the given sizes.
    pub fn contiguous(sizes: &[u64]) -> Result<Self> {
        let mut start = 1;
        let mut blocks = Vec::new();
        for &s in sizes {
            blocks.push((start..start + s).collect());
            start += s;
        }
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    /// The covered range `1..=N`.
    pub fn depth(&self) -> u64 {
        self.blocks.iter().map(|b| b.len() as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitBounds {
    /// `max_k ‖x_k‖` over the blocks.
    pub lower: f64,
    /// `√m · lower`.
    pub upper: f64,
    pub whole: f64,
}

/// Compares `‖x‖` with the norms of its restrictions to the blocks of `part`.
pub fn split_bounds(alpha: &WeightSequence, x: &MatElement, part: &SpacePartition) -> Result<SplitBounds> {
    let depth = part.depth();
    let top = x.max_e_index().max(x.max_f_index());
    if top > depth {
        return Err(XSpaceError::Partition(format!("element uses index {top} beyond the covered range 1..={depth}")));
    }
    let mut lower: f64 = 0.0;
    for b in part.blocks() {
        let set: BTreeSet<u64> = b.iter().copied().collect();
        lower = lower.max(xd_norm(alpha, &x.restrict(|i| set.contains(&i)))?);
    }
    let whole = xd_norm(alpha, x)?;
    Ok(SplitBounds { lower, upper: (part.len() as f64).sqrt() * lower, whole })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleCheck {
    pub max_ratio: f64,
    pub min_ratio: f64,
}

/// Ratios `‖x‖_α / ‖x‖_{λα}` over random elements supported on `1..=depth`.
///
/// Each sample draws `n` in `1..=4`, random e- and f-supports, and complex
/// Gaussian coefficients.
pub fn scale_check(alpha: &WeightSequence, lambda: f64, depth: u64, samples: usize, seed: u64) -> Result<ScaleCheck> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(XSpaceError::Domain(format!("scale factor {lambda} is not in (0, 1]")));
    }
    if depth == 0 {
        return Err(XSpaceError::Domain("depth must be at least 1".into()));
    }
    let scaled = alpha.scaled(lambda, depth)?;
    let mut g = rng(seed);
    let mut max_ratio: f64 = 1.0;
    let mut min_ratio: f64 = 1.0;
    for _ in 0..samples {
        let n = g.random_range(1..=4);
        let e: Vec<u64> = (1..=depth).filter(|_| g.random_bool(0.6)).collect();
        let f: Vec<u64> = (1..=depth).filter(|_| g.random_bool(0.3)).collect();
        let x = MatElement::random(&mut g, n, &e, &f)?;
        let den = xd_norm(&scaled, &x)?;
        if den == 0.0 {
            continue;
        }
        let r = xd_norm(alpha, &x)? / den;
        max_ratio = max_ratio.max(r);
        min_ratio = min_ratio.min(r);
    }
    Ok(ScaleCheck { max_ratio, min_ratio })
}

/// Nonincreasing merge of two finite weight lists, keeping multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Join {
    pub gamma: Vec<f64>,
    /// Position (1-based) in `gamma` of each entry of the first list.
    pub first: Vec<u64>,
    pub second: Vec<u64>,
}

pub fn join(a: &[f64], b: &[f64]) -> Join {
    let mut tagged: Vec<(f64, usize, usize)> =
        a.iter().enumerate().map(|(i, &w)| (w, 0, i)).chain(b.iter().enumerate().map(|(i, &w)| (w, 1, i))).collect();
    tagged.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut first = vec![0; a.len()];
    let mut second = vec![0; b.len()];
    for (pos, &(_, src, i)) in tagged.iter().enumerate() {
        if src == 0 {
            first[i] = pos as u64 + 1;
        } else {
            second[i] = pos as u64 + 1;
        }
    }
    Join { gamma: tagged.into_iter().map(|t| t.0).collect(), first, second }
}
