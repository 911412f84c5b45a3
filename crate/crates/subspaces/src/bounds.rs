//! Lower bounds certifying that some subspaces are badly placed: projections
//! onto `span[f_i]`, maps onto subsequences of the canonical basis, and the
//! square-sum inequalities behind domination.

use rowcol_cbnorm::{amplified_lower_bound, cb_norm_general};
use rowcol_linalg::{svd, ComplexMatrix};
use rowcol_xspace::{SquareSum, TailRule, WeightSequence};
use serde::{Deserialize, Serialize};

use crate::{Result, SubspaceError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Divergence {
    /// `Σ γ_i² = ∞`, with the reason.
    Certified { reason: String },
    /// `Σ γ_i² < ∞`.
    Convergent,
    /// Not decided from the tail rules.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementBound {
    /// `(Σ_{i=K+1}^{K+N} γ_i²)^{1/2} / 2` with `γ_i = α_i β_i`.
    pub bound: f64,
    pub sum_sq: f64,
    pub divergence: Divergence,
}

/// Lower bound on `‖Q‖cb` for any projection `Q` onto `span[f_i]`,
/// `f_i = β_i e_{2i} + √(1 − β_i²) e_{2i−1}`.
///
/// The bound is returned in all cases; it only forces non-complementation
/// when `divergence` is certified.
pub fn noncomplemented_bound(alpha: &WeightSequence, beta: &WeightSequence, k: u64, n: u64) -> Result<ComplementBound> {
    if n == 0 {
        return Err(SubspaceError::Invalid("N must be positive".into()));
    }
    let mut prev = f64::INFINITY;
    let mut sum_sq = 0.0;
    for i in 1..=(k + n) {
        let b = beta.get(i)?;
        if b <= 0.0 || b > 1.0 || b > prev {
            return Err(SubspaceError::Invalid(format!("β must be nonincreasing in (0,1]; β_{i} = {b}")));
        }
        prev = b;
        if i > k {
            let g = alpha.get(i)? * b;
            sum_sq += g * g;
        }
    }
    Ok(ComplementBound { bound: sum_sq.sqrt() / 2.0, sum_sq, divergence: gamma_divergence(alpha, beta) })
}

fn is_constant_one(w: &WeightSequence) -> bool {
    w.prefix().iter().all(|&x| x == 1.0)
        && matches!(w.tail(), Some(TailRule::Power { exponent, scale }) if *exponent == 0.0 && *scale == 1.0)
}

/// Decides `Σ (α_i β_i)² = ∞` when the tails admit a closed form.
pub fn gamma_divergence(alpha: &WeightSequence, beta: &WeightSequence) -> Divergence {
    let from_square_sum = |w: &WeightSequence| match w.square_sum() {
        SquareSum::Diverges { reason } => Divergence::Certified { reason },
        SquareSum::Converges { .. } => Divergence::Convergent,
        SquareSum::Unknown => Divergence::Unknown,
    };
    if is_constant_one(beta) {
        return from_square_sum(alpha);
    }
    if is_constant_one(alpha) {
        return from_square_sum(beta);
    }
    match (alpha.tail(), beta.tail()) {
        (Some(TailRule::Power { exponent: e1, scale: s1 }), Some(TailRule::Power { exponent: e2, scale: s2 })) => {
            if *s1 == 0.0 || *s2 == 0.0 {
                Divergence::Convergent
            } else if e1 + e2 <= 0.5 {
                Divergence::Certified { reason: format!("γ_i ≍ i^-{} with exponent sum at most 1/2", e1 + e2) }
            } else {
                Divergence::Convergent
            }
        }
        (Some(TailRule::Zero), _) | (_, Some(TailRule::Zero)) => Divergence::Convergent,
        _ => Divergence::Unknown,
    }
}

/// Which half of the pigeonhole split is large.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCase {
    /// `|I_n| > 4^{n²+2n}`: images stay below `4^{(n+1)²}`; bounds `‖T‖cb`.
    Inside,
    /// `|J_n| > 4^{n²+2n}`: images reach `4^{(n+1)²}` or beyond; bounds `‖T⁻¹‖cb`.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionBound {
    pub n: u32,
    pub case: SplitCase,
    /// `4^{n²+2n} + 1`, the size of the large half.
    pub count: u64,
    /// Ratio of the two squared column norms, as `"p/q"`.
    pub ratio_sq: String,
    /// Lower bound on the norm named by `case`.
    pub bound: f64,
}

/// Lower bound from the `x = Σ E_{i1} ⊗ e_i` test vector on the large half of
/// block `n` of the pair `2^{−n²}` / `2^{−n²−n}`.
///
/// Column norms follow the closed form `max{1, |I| w}` with the per-index
/// weights `w` as they enter that formula: `2^{−n²−n}` on the source,
/// `2^{−n²}` for images inside, `2^{−(n+1)²}` for images outside.
pub fn subsequence_distortion(n: u32, case: SplitCase) -> Result<DistortionBound> {
    if n == 0 {
        return Err(SubspaceError::Invalid("n must be at least 1".into()));
    }
    let exp = 2 * (n as u64 * n as u64 + 2 * n as u64);
    if exp >= 64 {
        return Err(SubspaceError::Invalid(format!("block count 4^{} exceeds 64-bit integers", exp / 2)));
    }
    let count = (1u64 << exp) + 1;
    let p = |e: u32| 2f64.powi(-(e as i32));
    let source = p(n * n + n);
    let b = match case {
        SplitCase::Inside => amplified_lower_bound(count, source, p(n * n))?,
        SplitCase::Outside => amplified_lower_bound(count, p((n + 1) * (n + 1)), source)?,
    };
    Ok(DistortionBound {
        n,
        case,
        count,
        ratio_sq: format!("{}/{}", b.ratio_sq.numer(), b.ratio_sq.denom()),
        bound: b.bound,
    })
}

/// `max{‖T‖cb, ‖T⁻¹‖cb}` is at least the smaller of the two case bounds.
pub fn not_subbasis_certificate(n: u32) -> Result<f64> {
    let inside = subsequence_distortion(n, SplitCase::Inside)?;
    let outside = subsequence_distortion(n, SplitCase::Outside)?;
    Ok(inside.bound.min(outside.bound))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominateShadow {
    /// Factor by which `U` was divided to make it a complete contraction.
    pub scale: f64,
    /// Singular values of `B U` after scaling.
    pub beta_prime: Vec<f64>,
    /// `min over i_1 < … < i_k of 1 + Σ α_{i_j}² − Σ β′_{i_j}²`.
    pub fin_sum_slack: f64,
    /// `{i : β′_i > 2α_i}`, 1-based.
    pub exceed_set: Vec<usize>,
    /// `Σ_{i ∈ exceed_set} β′_i²`
    pub exceed_mass: f64,
}

/// Checks `1 + Σ α_{i_j}² ≥ Σ β′_{i_j}²` for all index sets and
/// `Σ_{β′_i > 2α_i} β′_i² ≤ 2`, for `U : X(diag α) → X(diag β)` rescaled
/// to `‖U‖cb ≤ 1`.
///
/// `alpha` must be nonincreasing (it is then the spectrum of `diag α`).
pub fn dominate_shadow(alpha: &[f64], beta: &[f64], u: &ComplexMatrix) -> Result<DominateShadow> {
    let n = alpha.len();
    if n == 0 || n > 20 || beta.len() != u.rows() || u.cols() != n {
        return Err(SubspaceError::Invalid("need 1 ≤ dim ≤ 20 and U of shape |β| × |α|".into()));
    }
    if alpha.windows(2).any(|w| w[1] > w[0]) {
        return Err(SubspaceError::Invalid("α must be nonincreasing".into()));
    }
    let a = ComplexMatrix::diag_real(alpha);
    let b = ComplexMatrix::diag_real(beta);
    let cb = cb_norm_general(&a, &b, u)?;
    let scale = cb.upper_bound.unwrap_or(cb.value).max(cb.value);
    let bu = b.matmul(u).scale_real(1.0 / scale);
    let mut beta_prime = svd(&bu)?.spectrum.values().to_vec();
    beta_prime.resize(n, 0.0);

    // The worst nonempty index set takes every i with α_i² − β′_i² < 0, or
    // the single least favorable i when there is none.
    let terms: Vec<f64> = (0..n).map(|i| alpha[i].powi(2) - beta_prime[i].powi(2)).collect();
    let negative: f64 = terms.iter().filter(|&&t| t < 0.0).sum();
    let fin_sum_slack = if negative < 0.0 { 1.0 + negative } else { 1.0 + terms.iter().copied().fold(f64::INFINITY, f64::min) };
    let exceed_set: Vec<usize> = (0..n).filter(|&i| beta_prime[i] > 2.0 * alpha[i]).map(|i| i + 1).collect();
    let exceed_mass = exceed_set.iter().map(|&i| beta_prime[i - 1].powi(2)).sum();
    Ok(DominateShadow { scale, beta_prime, fin_sum_slack, exceed_set, exceed_mass })
}
