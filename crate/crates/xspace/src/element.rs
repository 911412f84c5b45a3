use std::collections::BTreeMap;

use rand::Rng;
use rowcol_linalg::random::gaussian_matrix;
use rowcol_linalg::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::{Result, XSpaceError};

/// One term `a ⊗ e_index` (or `a ⊗ f_index`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub index: u64,
    pub matrix: ComplexMatrix,
}

/// An element `Σ a_i ⊗ e_i + Σ b_i ⊗ f_i` of `M_n(X^d(α))`.
///
/// The e-indices and f-indices are separate namespaces, both 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct MatElement {
    n: usize,
    e: Vec<Coefficient>,
    f: Vec<Coefficient>,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    n: usize,
    #[serde(default)]
    e: Vec<Coefficient>,
    #[serde(default)]
    f: Vec<Coefficient>,
}

impl TryFrom<RawElement> for MatElement {
    type Error = XSpaceError;

    fn try_from(raw: RawElement) -> Result<Self> {
        MatElement::new(raw.n, raw.e, raw.f)
    }
}

impl From<MatElement> for RawElement {
    fn from(x: MatElement) -> Self {
        RawElement { n: x.n, e: x.e, f: x.f }
    }
}

fn check_list(n: usize, list: &mut [Coefficient], name: &str) -> Result<()> {
    for c in list.iter() {
        if c.index == 0 {
            return Err(XSpaceError::Element(format!("{name}-indices are 1-based")));
        }
        if c.matrix.shape() != (n, n) {
            return Err(XSpaceError::Element(format!(
                "{name}-coefficient at index {} is {}x{}, expected {n}x{n}",
                c.index,
                c.matrix.rows(),
                c.matrix.cols()
            )));
        }
    }
    list.sort_by_key(|c| c.index);
    if let Some(w) = list.windows(2).find(|w| w[0].index == w[1].index) {
        return Err(XSpaceError::Element(format!("repeated {name}-index {}", w[0].index)));
    }
    Ok(())
}

impl MatElement {
    pub fn new(n: usize, mut e: Vec<Coefficient>, mut f: Vec<Coefficient>) -> Result<Self> {
        if n == 0 {
            return Err(XSpaceError::Element("matrix size must be at least 1".into()));
        }
        check_list(n, &mut e, "e")?;
        check_list(n, &mut f, "f")?;
        Ok(MatElement { n, e, f })
    }

    pub fn zero(n: usize) -> Self {
        MatElement { n: n.max(1), e: vec![], f: vec![] }
    }

    /// Element with e-part only, from `(index, matrix)` pairs.
    pub fn from_e(n: usize, terms: Vec<(u64, ComplexMatrix)>) -> Result<Self> {
        Self::new(n, terms.into_iter().map(|(index, matrix)| Coefficient { index, matrix }).collect(), vec![])
    }

    /// `Σ_{i=1}^{k} E_{i1} ⊗ e_{first + i - 1}` in `M_k`: a column of matrix units.
    pub fn column_pattern(k: usize, first: u64) -> Self {
        let e = (0..k)
            .map(|i| Coefficient { index: first + i as u64, matrix: ComplexMatrix::unit(k, k, i, 0) })
            .collect();
        MatElement { n: k.max(1), e, f: vec![] }
    }

    /// Gaussian coefficients on the given e- and f-indices.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, e_indices: &[u64], f_indices: &[u64]) -> Result<Self> {
        let e = e_indices.iter().map(|&index| Coefficient { index, matrix: gaussian_matrix(rng, n, n) }).collect();
        let f = f_indices.iter().map(|&index| Coefficient { index, matrix: gaussian_matrix(rng, n, n) }).collect();
        Self::new(n, e, f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn e(&self) -> &[Coefficient] {
        &self.e
    }

    pub fn f(&self) -> &[Coefficient] {
        &self.f
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().chain(&self.f).all(|c| c.matrix.max_abs() == 0.0)
    }

    /// Largest e-index in use (0 if none).
    pub fn max_e_index(&self) -> u64 {
        self.e.last().map_or(0, |c| c.index)
    }

    pub fn max_f_index(&self) -> u64 {
        self.f.last().map_or(0, |c| c.index)
    }

    /// Keeps the terms whose index satisfies `keep` (same rule for both namespaces).
    pub fn restrict(&self, keep: impl Fn(u64) -> bool) -> Self {
        MatElement {
            n: self.n,
            e: self.e.iter().filter(|c| keep(c.index)).cloned().collect(),
            f: self.f.iter().filter(|c| keep(c.index)).cloned().collect(),
        }
    }

    /// Multiplies each e-coefficient `a_i` by `lambda(i)`.
    pub fn scale_e(&self, lambda: impl Fn(u64) -> Complex64) -> Self {
        let mut out = self.clone();
        for c in &mut out.e {
            c.matrix = c.matrix.scale(lambda(c.index));
        }
        out
    }

    /// `x ⊕ y` in `M_{n+m}`: coefficientwise block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let merge = |a: &[Coefficient], b: &[Coefficient]| {
            let mut map: BTreeMap<u64, (Option<&ComplexMatrix>, Option<&ComplexMatrix>)> = BTreeMap::new();
            for c in a {
                map.entry(c.index).or_default().0 = Some(&c.matrix);
            }
            for c in b {
                map.entry(c.index).or_default().1 = Some(&c.matrix);
            }
            map.into_iter()
                .map(|(index, (x, y))| {
                    let x = x.cloned().unwrap_or_else(|| ComplexMatrix::zeros(self.n, self.n));
                    let y = y.cloned().unwrap_or_else(|| ComplexMatrix::zeros(other.n, other.n));
                    Coefficient { index, matrix: x.direct_sum(&y) }
                })
                .collect()
        };
        MatElement { n: self.n + other.n, e: merge(&self.e, &other.e), f: merge(&self.f, &other.f) }
    }
}
