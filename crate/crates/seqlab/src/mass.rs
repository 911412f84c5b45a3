//! Exact sums of powers of `1/4`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::genint::GenInt;

/// `Σ_b c_b 4^{−b}` stored as counts per exponent.
///
/// Comparison with an integer carries counts towards exponent zero in base 4,
/// so no denominator is ever formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuarterMass {
    counts: BTreeMap<u64, BigUint>,
}

impl QuarterMass {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `4^{−b}`; `b = ∞` adds nothing.
    pub fn add(&mut self, b: GenInt) {
        if let GenInt::Fin(b) = b {
            self.add_count(b, &BigUint::one());
        }
    }

    pub fn add_count(&mut self, b: u64, count: &BigUint) {
        if count.is_zero() {
            return;
        }
        *self.counts.entry(b).or_default() += count;
    }

    pub fn merge(&mut self, other: &QuarterMass) {
        for (b, c) in &other.counts {
            self.add_count(*b, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// Integer part and whether a fractional part remains.
    pub fn split(&self) -> (BigUint, bool) {
        let mut level: Option<u64> = None;
        let mut v = BigUint::zero();
        let mut frac = false;
        for (&b, c) in self.counts.iter().rev() {
            if let Some(l) = level {
                frac |= shift_down(&mut v, l - b);
            }
            v += c;
            level = Some(b);
        }
        if let Some(l) = level {
            frac |= shift_down(&mut v, l);
        }
        (v, frac)
    }

    /// `floor(mass · 4^level)` and whether that truncation is exact.
    pub fn truncate(&self, level: u64) -> (BigUint, bool) {
        let mut lvl: Option<u64> = None;
        let mut v = BigUint::zero();
        let mut frac = false;
        for (&b, c) in self.counts.iter().rev() {
            if b > level {
                if let Some(l) = lvl {
                    frac |= shift_down(&mut v, l - b);
                }
                v += c;
                lvl = Some(b);
            } else {
                if let Some(l) = lvl.filter(|&l| l > level) {
                    frac |= shift_down(&mut v, l - level);
                }
                lvl = Some(level);
                v += c << (2 * (level - b)) as usize;
            }
        }
        if let Some(l) = lvl.filter(|&l| l > level) {
            frac |= shift_down(&mut v, l - level);
        }
        (v, !frac)
    }

    /// Largest exponent present.
    pub fn top(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// Decides `mass + extra ≤ k` exactly for a nonnegative rational `extra`.
    pub fn at_most_with(&self, extra: &BigRational, k: u64) -> bool {
        if extra.is_zero() {
            return self.at_most(k);
        }
        let k = BigRational::from_integer(BigInt::from(k));
        let top = self.top().unwrap_or(0);
        let mut level = 32;
        loop {
            let (v, exact) = self.truncate(level);
            let scale = BigInt::one() << (2 * level) as usize;
            let lo = BigRational::new(BigInt::from(v), scale.clone()) + extra;
            if lo > k {
                return false;
            }
            if exact || level >= top {
                return true;
            }
            let hi = &lo + BigRational::new(BigInt::one(), scale);
            if hi <= k {
                return true;
            }
            level = (level * 4).min(top);
        }
    }

    pub fn cmp_int(&self, k: u64) -> Ordering {
        let (int, frac) = self.split();
        match int.cmp(&BigUint::from(k)) {
            Ordering::Equal if frac => Ordering::Greater,
            other => other,
        }
    }

    /// `mass ≤ k`
    pub fn at_most(&self, k: u64) -> bool {
        self.cmp_int(k) != Ordering::Greater
    }

    /// Exact value; `None` when the largest exponent exceeds `max_exp`.
    pub fn to_rational(&self, max_exp: u64) -> Option<BigRational> {
        let (&top, _) = self.counts.iter().next_back()?;
        if top > max_exp {
            return None;
        }
        let den = BigUint::one() << (2 * top) as usize;
        let mut num = BigUint::zero();
        for (&b, c) in &self.counts {
            num += c << (2 * (top - b)) as usize;
        }
        Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn approx(&self) -> f64 {
        self.counts
            .iter()
            .map(|(&b, c)| c.to_f64().unwrap_or(f64::INFINITY) * 0.25f64.powf(b as f64))
            .sum()
    }

    pub fn report(&self) -> MassReport {
        let (int, frac) = self.split();
        MassReport {
            exact: self.to_rational(EXACT_REPORT_LIMIT).map(|r| format!("{}/{}", r.numer(), r.denom())),
            floor: int.to_string(),
            has_fraction: frac,
            approx: self.approx(),
        }
    }
}

/// Shifts `v` down by `d` base-4 digits; true when nonzero digits are dropped.
fn shift_down(v: &mut BigUint, d: u64) -> bool {
    if d == 0 || v.is_zero() {
        return false;
    }
    let bits = 2 * d;
    if v.bits() <= bits {
        *v = BigUint::zero();
        return true;
    }
    let lost = v.trailing_zeros().is_some_and(|t| t < bits);
    *v >>= bits as usize;
    lost
}

/// Largest exponent for which reports carry the exact rational.
pub const EXACT_REPORT_LIMIT: u64 = 512;

/// Printable form of an exact mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    /// `"p/q"` in lowest terms, when the denominator is small enough to print.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Integer part, exact.
    pub floor: String,
    pub has_fraction: bool,
    pub approx: f64,
}

impl MassReport {
    pub fn from_rational(r: &BigRational) -> MassReport {
        let floor = r.floor().to_integer();
        MassReport {
            exact: Some(format!("{}/{}", r.numer(), r.denom())),
            floor: floor.to_string(),
            has_fraction: !r.is_integer(),
            approx: r.to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mass(exps: &[u64]) -> QuarterMass {
        let mut m = QuarterMass::new();
        for &b in exps {
            m.add(GenInt::Fin(b));
        }
        m
    }

    #[test]
    fn four_quarters_make_one() {
        let m = mass(&[1, 1, 1, 1]);
        assert_eq!(m.cmp_int(1), Ordering::Equal);
        assert!(m.at_most(1));
        assert!(!m.at_most(0));
    }

    #[test]
    fn tiny_excess_is_detected() {
        let mut m = mass(&[0, 0]);
        m.add(GenInt::Fin(1_000_000));
        assert_eq!(m.cmp_int(2), Ordering::Greater);
        assert!(m.at_most(3));
        assert!(m.to_rational(512).is_none());
    }

    #[test]
    fn infinity_contributes_nothing() {
        let mut m = QuarterMass::new();
        m.add(GenInt::Inf);
        assert!(m.is_zero());
        assert!(m.at_most(0));
    }

    #[test]
    fn truncation_is_floor() {
        let m = mass(&[1, 3, 3, 9]);
        let r = m.to_rational(64).unwrap();
        for level in [0u64, 1, 2, 3, 5, 9, 12] {
            let (v, exact) = m.truncate(level);
            let scaled = &r * BigRational::from_integer(BigInt::from(4u32).pow(level as u32));
            assert_eq!(BigInt::from(v), scaled.floor().to_integer());
            assert_eq!(exact, scaled.is_integer());
        }
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        assert!(m.at_most_with(&third, 1));
        assert!(!m.at_most_with(&BigRational::one(), 1));
    }

    #[test]
    fn matches_rational_sum() {
        let exps = [2, 3, 3, 5, 1, 0, 7, 7, 7, 7];
        let m = mass(&exps);
        let mut r = BigRational::zero();
        for &b in &exps {
            r += BigRational::new(BigInt::one(), BigInt::from(4u32).pow(b as u32));
        }
        assert_eq!(m.to_rational(64).unwrap(), r);
        let f = r.floor().to_integer();
        assert_eq!(m.split().0.to_string(), f.to_string());
    }
}
