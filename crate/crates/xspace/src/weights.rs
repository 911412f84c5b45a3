//! Weight sequences: an explicit prefix followed by an optional closed-form tail.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Result, XSpaceError};

/// Closed-form rule for the entries after the prefix.
///
/// Rules marked "global" are functions of the absolute index `i` (1-based);
/// `blocks` is laid out right after the prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TailRule {
    /// Zero from the end of the prefix on.
    Zero,
    /// Consecutive constant runs `(count, value)` after the prefix, then zero.
    Blocks { blocks: Vec<(u64, f64)> },
    /// Global: `2^{-n^2}` (variant `alpha`) or `2^{-n^2-n}` (variant `beta`)
    /// on `4^{n^2} <= i < 4^{(n+1)^2}`.
    NotSubbasis { variant: PairVariant },
    /// Global: `w_{2i} = a^{-k}` for `N_k <= i < N_{k+1}` with `N_k = ratio^k`,
    /// and `w_{2i-1} = 0`.
    Subbasis { a: f64, ratio: u64 },
    /// Global: `2^{-(shift + ceil(log_base i))}`.
    Log4 {
        #[serde(default)]
        shift: u32,
        #[serde(default = "default_base")]
        base: u64,
    },
    /// Global: `scale * i^{-exponent}`.
    Power {
        exponent: f64,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn default_base() -> u64 {
    4
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairVariant {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// Entries are nonincreasing.
    Sorted,
    /// Entries tend to zero.
    Compact,
    /// The sum of squares diverges.
    NonHs,
}

/// What the tail rule says about `sum_i w_i^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SquareSum {
    /// Finite, with an upper bound on the whole sum.
    Converges { bound: f64 },
    /// Divergent, with the reason in words.
    Diverges { reason: String },
    /// The sequence is truncated; nothing is known past the prefix.
    Unknown,
}

/// A maximal run of equal entries, `start..end` (1-based, `end` exclusive,
/// `None` for an infinite run).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Run {
    pub start: u64,
    pub end: Option<u64>,
    pub value: f64,
}

impl Run {
    pub fn len_within(&self, upto: u64) -> u64 {
        let end = self.end.map_or(upto + 1, |e| e.min(upto + 1));
        end.saturating_sub(self.start)
    }
}

/// A sequence in `[0, 1]` indexed from 1.
#[derive(Debug, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct WeightSequence {
    prefix: Vec<f64>,
    tail: Option<TailRule>,
    flags: Vec<Flag>,
    cache: Mutex<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawWeights {
    prefix: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<TailRule>,
    #[serde(default)]
    flags: Vec<Flag>,
}

impl TryFrom<RawWeights> for WeightSequence {
    type Error = XSpaceError;

    fn try_from(raw: RawWeights) -> Result<Self> {
        WeightSequence::new(raw.prefix, raw.tail, raw.flags)
    }
}

impl From<WeightSequence> for RawWeights {
    fn from(w: WeightSequence) -> Self {
        RawWeights { prefix: w.prefix, tail: w.tail, flags: w.flags }
    }
}

impl Clone for WeightSequence {
    fn clone(&self) -> Self {
        WeightSequence {
            prefix: self.prefix.clone(),
            tail: self.tail.clone(),
            flags: self.flags.clone(),
            cache: Mutex::new(Vec::new()),
        }
    }
}

impl PartialEq for WeightSequence {
    fn eq(&self, other: &Self) -> bool {
        self.prefix == other.prefix && self.tail == other.tail && self.flags == other.flags
    }
}

/// How many prefix entries are checked against flags at construction.
const FLAG_CHECK_DEPTH: u64 = 4096;

impl WeightSequence {
    pub fn new(prefix: Vec<f64>, tail: Option<TailRule>, mut flags: Vec<Flag>) -> Result<Self> {
        for (k, &w) in prefix.iter().enumerate() {
            if !(0.0..=1.0).contains(&w) {
                return Err(XSpaceError::WeightRange { index: k as u64 + 1, value: w });
            }
        }
        if let Some(rule) = &tail {
            validate_rule(rule)?;
        }
        flags.sort();
        flags.dedup();
        let w = WeightSequence { prefix, tail, flags, cache: Mutex::new(Vec::new()) };
        w.check_flags()?;
        Ok(w)
    }

    /// A finite sequence followed by zeros.
    pub fn finite(prefix: Vec<f64>) -> Result<Self> {
        Self::new(prefix, Some(TailRule::Zero), vec![])
    }

    /// A truncated sequence: only the prefix exists.
    pub fn truncated(prefix: Vec<f64>) -> Result<Self> {
        Self::new(prefix, None, vec![])
    }

    pub fn with_rule(prefix: Vec<f64>, rule: TailRule) -> Result<Self> {
        Self::new(prefix, Some(rule), vec![])
    }

    /// The sequence with `2^{-n^2}` or `2^{-n^2-n}` on the blocks `[4^{n^2}, 4^{(n+1)^2})`.
    pub fn not_subbasis(variant: PairVariant) -> Self {
        Self::new(vec![], Some(TailRule::NotSubbasis { variant }), vec![Flag::Sorted, Flag::Compact, Flag::NonHs])
            .expect("rule is valid")
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<&TailRule> {
        self.tail.as_ref()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn has_flag(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    /// Number of materializable entries, `None` when unbounded.
    pub fn available(&self) -> Option<u64> {
        match self.tail {
            None => Some(self.prefix.len() as u64),
            Some(_) => None,
        }
    }

    /// Entry `i` (1-based).
    pub fn get(&self, i: u64) -> Result<f64> {
        if i == 0 {
            return Err(XSpaceError::IndexRange { index: 0, available: self.available() });
        }
        if let Some(&w) = self.prefix.get((i - 1) as usize) {
            return Ok(w);
        }
        match &self.tail {
            None => Err(XSpaceError::IndexRange { index: i, available: self.available() }),
            Some(rule) => Ok(rule_value(rule, i, self.prefix.len() as u64)),
        }
    }

    /// Entries `1..=depth`, memoized.
    pub fn materialize(&self, depth: u64) -> Result<Vec<f64>> {
        if let Some(avail) = self.available() {
            if depth > avail {
                return Err(XSpaceError::IndexRange { index: depth, available: Some(avail) });
            }
        }
        let mut cache = self.cache.lock().expect("weight cache poisoned");
        while (cache.len() as u64) < depth {
            let i = cache.len() as u64 + 1;
            let w = self.get(i)?;
            cache.push(w);
        }
        Ok(cache[..depth as usize].to_vec())
    }

    /// Constant runs covering `1..=upto`; the last run may extend to infinity.
    pub fn runs(&self, upto: u64) -> Result<Vec<Run>> {
        if let Some(avail) = self.available() {
            if upto > avail {
                return Err(XSpaceError::IndexRange { index: upto, available: Some(avail) });
            }
        }
        let mut out: Vec<Run> = Vec::new();
        let mut push = |r: Run| {
            if let Some(last) = out.last_mut() {
                if last.value == r.value && last.end == Some(r.start) {
                    last.end = r.end;
                    return;
                }
            }
            out.push(r);
        };
        let p = self.prefix.len() as u64;
        for (k, &w) in self.prefix.iter().enumerate().take(upto as usize) {
            push(Run { start: k as u64 + 1, end: Some(k as u64 + 2), value: w });
        }
        if upto > p {
            if let Some(rule) = &self.tail {
                for r in rule_runs(rule, p + 1, upto, p) {
                    push(r);
                }
            }
        }
        Ok(out)
    }

    /// What is known about the sum of squares.
    pub fn square_sum(&self) -> SquareSum {
        let head: f64 = self.prefix.iter().map(|w| w * w).sum();
        let p = self.prefix.len() as u64;
        match &self.tail {
            None => SquareSum::Unknown,
            Some(rule) => match rule_square_sum(rule, p) {
                SquareSum::Converges { bound } => SquareSum::Converges { bound: head + bound },
                other => other,
            },
        }
    }

    /// Whether the entries tend to zero (always true for finite data).
    pub fn tends_to_zero(&self) -> bool {
        match &self.tail {
            None | Some(TailRule::Zero) | Some(TailRule::Blocks { .. }) => true,
            Some(TailRule::NotSubbasis { .. }) | Some(TailRule::Subbasis { .. }) | Some(TailRule::Log4 { .. }) => true,
            Some(TailRule::Power { exponent, .. }) => *exponent > 0.0,
        }
    }

    /// Whether the tail rule is nonincreasing on its own range.
    fn tail_is_monotone(&self) -> bool {
        match &self.tail {
            None | Some(TailRule::Zero) => true,
            Some(TailRule::Blocks { blocks }) => blocks.windows(2).all(|w| w[1].1 <= w[0].1),
            Some(TailRule::NotSubbasis { .. }) | Some(TailRule::Log4 { .. }) => true,
            Some(TailRule::Power { exponent, .. }) => *exponent >= 0.0,
            Some(TailRule::Subbasis { .. }) => false,
        }
    }

    fn check_flags(&self) -> Result<()> {
        if self.has_flag(Flag::Sorted) {
            let depth = match self.available() {
                Some(a) => a,
                None => (self.prefix.len() as u64 + 1).max(FLAG_CHECK_DEPTH),
            };
            let vals: Vec<f64> = (1..=depth).map(|i| self.get(i)).collect::<Result<_>>()?;
            if let Some(k) = vals.windows(2).position(|w| w[1] > w[0]) {
                return Err(XSpaceError::Flag(format!("not sorted at index {}", k + 2)));
            }
            if !self.tail_is_monotone() {
                return Err(XSpaceError::Flag("tail rule is not monotone".into()));
            }
        }
        if self.has_flag(Flag::Compact) && !self.tends_to_zero() {
            return Err(XSpaceError::Flag("tail does not tend to zero".into()));
        }
        if self.has_flag(Flag::NonHs) && !matches!(self.square_sum(), SquareSum::Diverges { .. }) {
            return Err(XSpaceError::Flag("no divergence certificate for the sum of squares".into()));
        }
        Ok(())
    }

    /// Exact value of entry `i` as a rational (every double is dyadic).
    pub fn exact(&self, i: u64) -> Result<BigRational> {
        Ok(exact_f64(self.get(i)?))
    }

    /// The pointwise product `lambda * self` (for `lambda` in `[0, 1]`), truncated to `depth`.
    pub fn scaled(&self, lambda: f64, depth: u64) -> Result<WeightSequence> {
        let vals = self.materialize(depth)?;
        WeightSequence::truncated(vals.into_iter().map(|w| w * lambda).collect())
    }
}

pub fn exact_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite weight")
}

fn validate_rule(rule: &TailRule) -> Result<()> {
    match rule {
        TailRule::Zero | TailRule::NotSubbasis { .. } => Ok(()),
        TailRule::Blocks { blocks } => {
            for &(_, v) in blocks {
                if !(0.0..=1.0).contains(&v) {
                    return Err(XSpaceError::Rule(format!("block value {v} outside [0,1]")));
                }
            }
            Ok(())
        }
        TailRule::Subbasis { a, ratio } => {
            if !(*a > 1.0 && *a < 2.0) {
                return Err(XSpaceError::Rule(format!("schedule parameter a = {a} must lie in (1,2)")));
            }
            if *ratio < 3 {
                return Err(XSpaceError::Rule("cutpoint ratio must be at least 3 so that N_k > 2 N_(k-1)".into()));
            }
            Ok(())
        }
        TailRule::Log4 { base, .. } => {
            if *base < 2 {
                return Err(XSpaceError::Rule("logarithm base must be at least 2".into()));
            }
            Ok(())
        }
        TailRule::Power { exponent, scale } => {
            if !exponent.is_finite() || *exponent < 0.0 || !(0.0..=1.0).contains(scale) {
                return Err(XSpaceError::Rule("power rule needs exponent >= 0 and scale in [0,1]".into()));
            }
            Ok(())
        }
    }
}

/// Largest `n` with `4^{n^2} <= i`.
pub fn not_subbasis_block(i: u64) -> u32 {
    let mut n: u32 = 0;
    loop {
        let next = (n + 1) * (n + 1) * 2;
        if next >= 64 || (1u64 << next) > i {
            return n;
        }
        n += 1;
    }
}

/// `ceil(log_base i)` for `i >= 1`.
pub fn ceil_log(base: u64, i: u64) -> u32 {
    let mut m = 0u32;
    let mut p: u128 = 1;
    while p < i as u128 {
        p *= base as u128;
        m += 1;
    }
    m
}

/// Cutpoint block `k` with `ratio^k <= i < ratio^{k+1}`.
pub fn schedule_block(ratio: u64, i: u64) -> u32 {
    let mut k = 0u32;
    let mut p: u128 = ratio as u128;
    while p <= i as u128 {
        p *= ratio as u128;
        k += 1;
    }
    k
}

fn rule_value(rule: &TailRule, i: u64, prefix_len: u64) -> f64 {
    match rule {
        TailRule::Zero => 0.0,
        TailRule::Blocks { blocks } => {
            let mut pos = i - prefix_len;
            for &(count, v) in blocks {
                if pos <= count {
                    return v;
                }
                pos -= count;
            }
            0.0
        }
        TailRule::NotSubbasis { variant } => {
            let n = not_subbasis_block(i) as i32;
            let e = match variant {
                PairVariant::Alpha => -(n * n),
                PairVariant::Beta => -(n * n) - n,
            };
            2f64.powi(e)
        }
        TailRule::Subbasis { a, ratio } => {
            if i % 2 == 1 {
                0.0
            } else {
                a.powi(-(schedule_block(*ratio, i / 2) as i32))
            }
        }
        TailRule::Log4 { shift, base } => 2f64.powi(-((*shift + ceil_log(*base, i)) as i32)),
        TailRule::Power { exponent, scale } => scale * (i as f64).powf(-exponent),
    }
}

fn rule_runs(rule: &TailRule, from: u64, upto: u64, prefix_len: u64) -> Vec<Run> {
    let mut out = Vec::new();
    match rule {
        TailRule::Zero => out.push(Run { start: from, end: None, value: 0.0 }),
        TailRule::Blocks { blocks } => {
            let mut s = from;
            for &(count, v) in blocks {
                if count == 0 {
                    continue;
                }
                out.push(Run { start: s, end: Some(s + count), value: v });
                s += count;
                if s > upto {
                    return out;
                }
            }
            out.push(Run { start: s, end: None, value: 0.0 });
        }
        TailRule::NotSubbasis { .. } => {
            let mut s = from;
            while s <= upto {
                let n = not_subbasis_block(s);
                let sq = 2 * (n + 1) * (n + 1);
                let end = if sq >= 64 { None } else { Some(1u64 << sq) };
                out.push(Run { start: s, end, value: rule_value(rule, s, prefix_len) });
                match end {
                    Some(e) => s = e,
                    None => break,
                }
            }
        }
        TailRule::Log4 { base, .. } => {
            let mut s = from;
            while s <= upto {
                let m = ceil_log(*base, s);
                let end = (*base as u128).checked_pow(m).map(|p| p + 1).filter(|&e| e <= u64::MAX as u128).map(|e| e as u64);
                out.push(Run { start: s, end, value: rule_value(rule, s, prefix_len) });
                match end {
                    Some(e) => s = e,
                    None => break,
                }
            }
        }
        TailRule::Subbasis { .. } | TailRule::Power { .. } => {
            for i in from..=upto {
                out.push(Run { start: i, end: Some(i + 1), value: rule_value(rule, i, prefix_len) });
            }
        }
    }
    out
}

fn rule_square_sum(rule: &TailRule, prefix_len: u64) -> SquareSum {
    match rule {
        TailRule::Zero => SquareSum::Converges { bound: 0.0 },
        TailRule::Blocks { blocks } => SquareSum::Converges { bound: blocks.iter().map(|&(c, v)| c as f64 * v * v).sum() },
        TailRule::NotSubbasis { variant } => SquareSum::Diverges {
            reason: match variant {
                PairVariant::Alpha => "block n contributes (4^{(n+1)^2} - 4^{n^2}) 4^{-n^2} >= 3 4^{2n+1}".into(),
                PairVariant::Beta => "block n contributes (4^{(n+1)^2} - 4^{n^2}) 4^{-n^2-n} >= 3 4^{n+1}".into(),
            },
        },
        TailRule::Subbasis { a, ratio } => {
            // Block k holds ratio^{k+1} - ratio^k even positions of value a^{-k}.
            if (*ratio as f64) >= a * a {
                SquareSum::Diverges { reason: format!("block k contributes (ratio-1) (ratio/a^2)^k with ratio {ratio} >= a^2") }
            } else {
                let q = *ratio as f64 / (a * a);
                SquareSum::Converges { bound: (*ratio as f64 - 1.0) / (1.0 - q) + 1.0 }
            }
        }
        TailRule::Log4 { shift, base } => {
            // Stair m holds base^m - base^{m-1} entries of value 2^{-(shift+m)}.
            if *base >= 4 {
                SquareSum::Diverges { reason: format!("stair m contributes (1 - 1/{base}) ({base}/4)^m 4^-{shift} >= const") }
            } else {
                let q = *base as f64 / 4.0;
                SquareSum::Converges { bound: 4f64.powi(-(*shift as i32)) * (1.0 + (*base as f64) / (1.0 - q)) }
            }
        }
        TailRule::Power { exponent, scale } => {
            if 2.0 * exponent <= 1.0 && *scale > 0.0 {
                SquareSum::Diverges { reason: format!("sum of i^-{} diverges", 2.0 * exponent) }
            } else if *scale == 0.0 {
                SquareSum::Converges { bound: 0.0 }
            } else {
                // Integral comparison from the first tail index.
                let s = 2.0 * exponent;
                let p = (prefix_len + 1) as f64;
                let bound = scale * scale * (p.powf(-s) + p.powf(1.0 - s) / (s - 1.0));
                SquareSum::Converges { bound }
            }
        }
    }
}

/// `sum_{i in run} w_i^2` as an exact rational over `1..=upto`.
pub fn exact_run_mass(run: &Run, upto: u64) -> BigRational {
    let w = exact_f64(run.value);
    let n = run.len_within(upto);
    w.clone() * w * BigRational::from_integer(BigInt::from(n))
}

pub fn rational_zero() -> BigRational {
    BigRational::zero()
}

pub fn rational_one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn not_subbasis_values() {
        let a = WeightSequence::not_subbasis(PairVariant::Alpha);
        let b = WeightSequence::not_subbasis(PairVariant::Beta);
        assert_eq!(a.get(1).unwrap(), 1.0);
        assert_eq!(a.get(3).unwrap(), 1.0);
        assert_eq!(a.get(4).unwrap(), 0.5);
        assert_eq!(b.get(4).unwrap(), 0.25);
        assert_eq!(a.get(255).unwrap(), 0.5);
        assert_eq!(a.get(256).unwrap(), 1.0 / 16.0);
        assert_eq!(b.get(256).unwrap(), 1.0 / 64.0);
    }

    #[test]
    fn runs_cover_huge_ranges_cheaply() {
        let a = WeightSequence::not_subbasis(PairVariant::Alpha);
        let runs = a.runs(1 << 50).unwrap();
        assert_eq!(runs.len(), 6);
        assert_eq!(runs[4].start, 1 << 32);
        assert_eq!(runs[4].end, Some(1 << 50));
        assert_eq!(runs[5], Run { start: 1 << 50, end: None, value: 2f64.powi(-25) });
    }

    #[test]
    fn log_rule_stairs() {
        let w = WeightSequence::with_rule(vec![], TailRule::Log4 { shift: 0, base: 4 }).unwrap();
        assert_eq!(w.get(1).unwrap(), 1.0);
        assert_eq!(w.get(4).unwrap(), 0.5);
        assert_eq!(w.get(5).unwrap(), 0.25);
        let runs = w.runs(20).unwrap();
        assert_eq!(runs[1], Run { start: 2, end: Some(5), value: 0.5 });
    }

    #[test]
    fn subbasis_schedule_values() {
        let w = WeightSequence::with_rule(vec![], TailRule::Subbasis { a: 1.5, ratio: 3 }).unwrap();
        assert_eq!(w.get(1).unwrap(), 0.0);
        assert_eq!(w.get(2).unwrap(), 1.0);
        assert_eq!(w.get(4).unwrap(), 1.0);
        assert_eq!(w.get(6).unwrap(), 1.0 / 1.5);
        assert_eq!(w.get(18).unwrap(), 1.0 / 2.25);
    }

    #[test]
    fn truncated_sequence_refuses_out_of_range() {
        let w = WeightSequence::truncated(vec![0.5]).unwrap();
        assert!(matches!(w.get(2), Err(XSpaceError::IndexRange { .. })));
        assert_eq!(w.square_sum(), SquareSum::Unknown);
    }

    #[test]
    fn flags_are_checked() {
        assert!(WeightSequence::new(vec![0.1, 0.5], Some(TailRule::Zero), vec![Flag::Sorted]).is_err());
        assert!(WeightSequence::new(vec![0.5], Some(TailRule::Zero), vec![Flag::NonHs]).is_err());
        assert!(WeightSequence::new(vec![], Some(TailRule::Power { exponent: 0.5, scale: 1.0 }), vec![Flag::NonHs, Flag::Sorted]).is_ok());
        assert!(WeightSequence::new(vec![], Some(TailRule::Subbasis { a: 1.5, ratio: 3 }), vec![Flag::Sorted]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"prefix":[1,0.5],"tail":{"kind":"log4","shift":1},"flags":["sorted"]}"#;
        let w: WeightSequence = serde_json::from_str(s).unwrap();
        assert_eq!(w.get(3).unwrap(), 0.25);
        assert_eq!(w.get(5).unwrap(), 0.125);
        let back: WeightSequence = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn weights_outside_unit_interval_are_rejected() {
        assert!(matches!(WeightSequence::finite(vec![1.5]), Err(XSpaceError::WeightRange { .. })));
    }
}
