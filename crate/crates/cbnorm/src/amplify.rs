use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rowcol_xspace::weights::exact_f64;
use rowcol_xspace::WeightSequence;

use crate::{CbNormError, Result};

/// Norms of `x = Σ_{i∈I} E_{i1} ⊗ e_i` and of its image, in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedBound {
    /// `‖x‖²`
    pub source_sq: BigRational,
    /// `‖Tx‖²`
    pub image_sq: BigRational,
    /// `‖Tx‖² / ‖x‖²`, a lower bound on `‖T‖cb²`.
    pub ratio_sq: BigRational,
    /// `sqrt(ratio_sq)`, rounded to the nearest double.
    pub bound: f64,
}

fn finish(source_sq: BigRational, image_sq: BigRational) -> AmplifiedBound {
    let ratio_sq = &image_sq / &source_sq;
    let bound = ratio_sq.to_f64().unwrap_or(f64::INFINITY).sqrt();
    AmplifiedBound { source_sq, image_sq, ratio_sq, bound }
}

fn column_norm_sq(mass: BigRational) -> BigRational {
    if mass > BigRational::one() {
        mass
    } else {
        BigRational::one()
    }
}

fn check_weight_sq(name: &str, w: f64) -> Result<BigRational> {
    if !(0.0..=1.0).contains(&w) {
        return Err(CbNormError::InvalidInput(format!("{name} squared weight {w} is outside [0, 1]")));
    }
    Ok(exact_f64(w))
}

/// Closed form for `|I|` coordinates of squared weight `src_sq` mapped to
/// coordinates of squared weight `dst_sq`: the ratio
/// `max{1, |I| dst_sq} / max{1, |I| src_sq}`.
pub fn amplified_lower_bound(count: u64, src_sq: f64, dst_sq: f64) -> Result<AmplifiedBound> {
    if count == 0 {
        return Err(CbNormError::InvalidInput("index set must be nonempty".into()));
    }
    let n = BigRational::from_integer(BigInt::from(count));
    let s = check_weight_sq("source", src_sq)?;
    let d = check_weight_sq("target", dst_sq)?;
    Ok(finish(column_norm_sq(&n * s), column_norm_sq(&n * d)))
}

/// The same bound for an explicit injection `i -> k_i` from the source
/// canonical basis into the target canonical basis.
pub fn amplified_from_map(source: &WeightSequence, target: &WeightSequence, k_map: &[(u64, u64)]) -> Result<AmplifiedBound> {
    if k_map.is_empty() {
        return Err(CbNormError::InvalidInput("index set must be nonempty".into()));
    }
    let mut dom = BTreeSet::new();
    let mut img = BTreeSet::new();
    for &(i, k) in k_map {
        if !dom.insert(i) {
            return Err(CbNormError::InvalidInput(format!("index {i} is mapped twice")));
        }
        if !img.insert(k) {
            return Err(CbNormError::InvalidInput(format!("map is not injective at target {k}")));
        }
    }
    let mut src = BigRational::zero();
    let mut dst = BigRational::zero();
    for &(i, k) in k_map {
        let w = source.exact(i)?;
        let v = target.exact(k)?;
        src += &w * &w;
        dst += &v * &v;
    }
    Ok(finish(column_norm_sq(src), column_norm_sq(dst)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_index_with_equal_weights() {
        let b = amplified_lower_bound(1, 0.25, 0.25).unwrap();
        assert_eq!(b.ratio_sq, BigRational::one());
        assert_eq!(b.bound, 1.0);
    }

    #[test]
    fn rejects_empty_and_out_of_range() {
        assert!(amplified_lower_bound(0, 0.5, 0.5).is_err());
        assert!(amplified_lower_bound(3, 1.5, 0.5).is_err());
    }
}
