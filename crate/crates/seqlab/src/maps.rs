//! The maps `𝐧` (singular values to generalized integers) and `𝐘`
//! (generalized integers to subspaces of `span{e_i, f_i}`).

use rowcol_linalg::SingularSpectrum;
use serde::{Deserialize, Serialize};

use crate::genint::{GenInt, GenIntSeq};
use crate::{Result, SeqError};

/// `sup{ℓ ∈ ℕ : 2^{1−ℓ} ≥ s}`; `∞` for `s = 0`.
pub fn n_of(s: f64) -> Result<GenInt> {
    if s.is_nan() || s < 0.0 {
        return Err(SeqError::Invalid(format!("singular value {s} is not a nonnegative number")));
    }
    if s == 0.0 {
        return Ok(GenInt::Inf);
    }
    if s > 1.0 {
        return Err(SeqError::Invalid(format!("singular value {s} exceeds 1; no ℓ ∈ ℕ qualifies")));
    }
    // Powers of two are exact in f64 down to 2^{-1074}.
    let mut l: u64 = 1;
    while (2f64).powi(-(l as i32)) >= s {
        l += 1;
    }
    Ok(GenInt::Fin(l))
}

/// `𝐧_k` of a spectrum, 1-based; indices past the stored values read `s_k = 0`.
pub fn n_map(spectrum: &SingularSpectrum, k: usize) -> Result<GenInt> {
    if k == 0 {
        return Err(SeqError::Invalid("indices are 1-based".into()));
    }
    n_of(spectrum.get(k))
}

/// `(𝐧_1, …, 𝐧_depth)` as a truncated sequence.
pub fn base_sequence(spectrum: &SingularSpectrum, depth: usize) -> Result<GenIntSeq> {
    let values = (1..=depth).map(|k| n_map(spectrum, k)).collect::<Result<Vec<_>>>()?;
    GenIntSeq::finite(values)
}

/// `2^{−b}`, flushing to zero below the subnormal range.
fn pow2_neg(b: u64) -> f64 {
    2f64.powi(-(b.min(1100) as i32))
}

/// Angle convention for `𝐘`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleMode {
    /// `s_i^o sin φ_i = min(s_i^o, 2^{1/2 − β_i})`, so that `𝐧(𝐘(β)) = β` exactly.
    #[default]
    Centered,
    /// `s_i^o sin φ_i = 2^{−β_i}`; then `𝐧(𝐘(β)) = β + 1`.
    Literal,
}

/// Unit vector `g_i = sin φ_i e_i + cos φ_i f_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameAngle {
    pub i: u64,
    pub sin: f64,
    pub cos: f64,
}

/// Angles of `𝐘(β)` against the base spectrum `s^o` for `i ≤ depth`.
pub fn y_map(beta: &GenIntSeq, base: &SingularSpectrum, depth: u64, mode: AngleMode) -> Result<Vec<FrameAngle>> {
    let mut out = Vec::with_capacity(depth as usize);
    let mut prev = GenInt::Fin(0);
    for i in 1..=depth {
        let b = beta.get(i)?;
        if b < prev {
            return Err(SeqError::Membership(format!("entries decrease at index {i}")));
        }
        prev = b;
        let s = base.get(i as usize);
        let sin = match b {
            GenInt::Inf => 0.0,
            GenInt::Fin(bv) => {
                if s == 0.0 {
                    return Err(SeqError::Membership(format!("s_{i} = 0 forces β_{i} = ∞, got {bv}")));
                }
                match mode {
                    AngleMode::Centered => {
                        let a = n_of(s)?;
                        if b < a {
                            return Err(SeqError::Membership(format!("β_{i} = {bv} is below 𝐧_{i} = {a}")));
                        }
                        (std::f64::consts::SQRT_2 * pow2_neg(bv) / s).min(1.0)
                    }
                    AngleMode::Literal => {
                        let t = pow2_neg(bv);
                        if t > s {
                            return Err(SeqError::Membership(format!("2^-{bv} exceeds s_{i} = {s}")));
                        }
                        t / s
                    }
                }
            }
        };
        out.push(FrameAngle { i, sin, cos: (1.0 - sin * sin).max(0.0).sqrt() });
    }
    Ok(out)
}
