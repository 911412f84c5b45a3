//! Sequences over `ℕ ∪ {∞}` and points of `Ξ = Π_k {0, …, k−1}`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Result, SeqError};

/// An element of `ℕ ∪ {∞}`; `4^{−∞} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenInt {
    Fin(u64),
    Inf,
}

impl GenInt {
    pub fn is_inf(self) -> bool {
        matches!(self, GenInt::Inf)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            GenInt::Fin(v) => Some(v),
            GenInt::Inf => None,
        }
    }

    /// `|a − b|`, with `|∞ − ∞| = 0` and `|∞ − n| = ∞`.
    pub fn abs_diff(self, other: GenInt) -> GenInt {
        match (self, other) {
            (GenInt::Fin(a), GenInt::Fin(b)) => GenInt::Fin(a.abs_diff(b)),
            (GenInt::Inf, GenInt::Inf) => GenInt::Fin(0),
            _ => GenInt::Inf,
        }
    }

    pub fn add(self, k: u64) -> GenInt {
        match self {
            GenInt::Fin(v) => GenInt::Fin(v.saturating_add(k)),
            GenInt::Inf => GenInt::Inf,
        }
    }

    /// True when `self > k`.
    pub fn exceeds(self, k: u64) -> bool {
        match self {
            GenInt::Fin(v) => v > k,
            GenInt::Inf => true,
        }
    }
}

impl fmt::Display for GenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenInt::Fin(v) => write!(f, "{v}"),
            GenInt::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for GenInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GenInt::Fin(v) => s.serialize_u64(*v),
            GenInt::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for GenInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(GenInt::Fin(v)),
            Raw::Text(t) if t == "inf" || t == "∞" => Ok(GenInt::Inf),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a natural number or \"inf\", got {t:?}"))),
        }
    }
}

/// Closed-form tail of a [`GenIntSeq`], evaluated at the global index `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IntTail {
    Const { value: GenInt },
    /// `slope · i + offset`
    Linear { slope: u64, offset: i64 },
    /// `shift + ⌈log_base i⌉`
    #[serde(rename = "logbase")]
    LogBase { base: u64, shift: u64 },
}

/// Smallest `m` with `base^m ≥ i`.
pub fn ceil_log_big(base: u64, i: &BigUint) -> u64 {
    let b = BigUint::from(base);
    let mut p = BigUint::one();
    let mut m = 0;
    while &p < i {
        p *= &b;
        m += 1;
    }
    m
}

impl IntTail {
    fn validate(&self) -> Result<()> {
        match *self {
            IntTail::LogBase { base, .. } if base < 2 => Err(SeqError::Invalid("log tail needs base ≥ 2".into())),
            _ => Ok(()),
        }
    }

    pub fn value_big(&self, i: &BigUint) -> Result<GenInt> {
        match *self {
            IntTail::Const { value } => Ok(value),
            IntTail::Linear { slope, offset } => {
                let v = num_bigint::BigInt::from(i.clone()) * slope + offset;
                let v = v
                    .to_u64()
                    .ok_or_else(|| SeqError::Invalid(format!("linear tail is negative or too large at index {i}")))?;
                Ok(GenInt::Fin(v))
            }
            IntTail::LogBase { base, shift } => Ok(GenInt::Fin(shift + ceil_log_big(base, i))),
        }
    }

    pub fn value(&self, i: u64) -> Result<GenInt> {
        match *self {
            IntTail::Const { value } => Ok(value),
            IntTail::Linear { slope, offset } => {
                let v = i128::from(slope) * i128::from(i) + i128::from(offset);
                u64::try_from(v)
                    .map(GenInt::Fin)
                    .map_err(|_| SeqError::Invalid(format!("linear tail is negative or too large at index {i}")))
            }
            IntTail::LogBase { base, shift } => {
                let mut p: u128 = 1;
                let mut m = 0;
                while p < u128::from(i) {
                    p *= u128::from(base);
                    m += 1;
                }
                Ok(GenInt::Fin(shift + m))
            }
        }
    }

    /// Tail mass `Σ 4^{−value}` from some point on: zero, geometric or divergent.
    pub fn mass_kind(&self) -> TailMass {
        match *self {
            IntTail::Const { value: GenInt::Inf } => TailMass::Zero,
            IntTail::Const { .. } => TailMass::Divergent,
            IntTail::Linear { slope: 0, .. } => TailMass::Divergent,
            IntTail::Linear { .. } => TailMass::Geometric,
            IntTail::LogBase { base, .. } if base >= 4 => TailMass::Divergent,
            IntTail::LogBase { .. } => TailMass::Convergent,
        }
    }

    /// Normal form: a zero-slope linear tail is a constant.
    pub fn normalized(&self) -> IntTail {
        match *self {
            IntTail::Linear { slope: 0, offset } if offset >= 0 => IntTail::Const { value: GenInt::Fin(offset as u64) },
            other => other,
        }
    }
}

/// Behaviour of `Σ_{i ≥ n} 4^{−x_i}` for a tail rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailMass {
    Zero,
    /// Converges with an exact geometric closed form.
    Geometric,
    /// Converges, without a closed form implemented here.
    Convergent,
    Divergent,
}

/// Maximal run `[start, end)` of constant value; `end = None` runs forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntRun {
    pub start: BigUint,
    pub end: Option<BigUint>,
    pub value: GenInt,
}

/// Nondecreasing sequence over `ℕ ∪ {∞}`, 1-based: explicit prefix then a
/// tail rule. Without a tail rule the sequence is truncated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenIntSeq {
    prefix: Vec<GenInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<IntTail>,
}

impl<'de> Deserialize<'de> for GenIntSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            prefix: Vec<GenInt>,
            #[serde(default)]
            tail: Option<IntTail>,
        }
        let raw = Raw::deserialize(d)?;
        GenIntSeq::new(raw.prefix, raw.tail).map_err(serde::de::Error::custom)
    }
}

/// Entries of the tail checked for monotonicity at construction.
const MONOTONE_CHECK: u64 = 64;

impl GenIntSeq {
    pub fn new(prefix: Vec<GenInt>, tail: Option<IntTail>) -> Result<Self> {
        if let Some(t) = &tail {
            t.validate()?;
        }
        let seq = GenIntSeq { prefix, tail: tail.map(|t| t.normalized()) };
        if seq.prefix.is_empty() && seq.tail.is_none() {
            return Err(SeqError::Invalid("sequence needs a prefix or a tail".into()));
        }
        let check = seq.tail_start() - 1 + if seq.tail.is_some() { MONOTONE_CHECK } else { 0 };
        let mut prev = GenInt::Fin(0);
        for i in 1..=check {
            let v = seq.get(i)?;
            if v < prev {
                return Err(SeqError::Invalid(format!("entries decrease at index {i}")));
            }
            prev = v;
        }
        Ok(seq)
    }

    pub fn finite(prefix: Vec<GenInt>) -> Result<Self> {
        GenIntSeq::new(prefix, None)
    }

    pub fn from_values(values: &[u64], tail: Option<IntTail>) -> Result<Self> {
        GenIntSeq::new(values.iter().map(|&v| GenInt::Fin(v)).collect(), tail)
    }

    pub fn with_rule(tail: IntTail) -> Result<Self> {
        GenIntSeq::new(Vec::new(), Some(tail))
    }

    pub fn prefix(&self) -> &[GenInt] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<&IntTail> {
        self.tail.as_ref()
    }

    /// First index governed by the tail rule.
    pub fn tail_start(&self) -> u64 {
        self.prefix.len() as u64 + 1
    }

    /// Number of defined entries, `None` when infinite.
    pub fn available(&self) -> Option<u64> {
        match self.tail {
            Some(_) => None,
            None => Some(self.prefix.len() as u64),
        }
    }

    pub fn get(&self, i: u64) -> Result<GenInt> {
        if i == 0 {
            return Err(SeqError::Invalid("indices are 1-based".into()));
        }
        if let Some(v) = self.prefix.get((i - 1) as usize) {
            return Ok(*v);
        }
        match &self.tail {
            Some(t) => t.value(i),
            None => Err(SeqError::Range { index: i, available: self.prefix.len() as u64 }),
        }
    }

    pub fn get_big(&self, i: &BigUint) -> Result<GenInt> {
        match i.to_u64() {
            Some(small) if small < u64::MAX / 2 => self.get(small),
            _ => match &self.tail {
                Some(t) => t.value_big(i),
                None => Err(SeqError::Range { index: u64::MAX, available: self.prefix.len() as u64 }),
            },
        }
    }

    pub fn materialize(&self, n: u64) -> Result<Vec<GenInt>> {
        (1..=n).map(|i| self.get(i)).collect()
    }

    /// Runs of constant value starting at index `from`, in order.
    pub fn runs_from(&self, from: BigUint) -> RunIter<'_> {
        RunIter { seq: self, next: from, done: false }
    }

    /// Checks membership in `S_A`: nondecreasing and `β_k ≥ α_k` for `k ≤ depth`.
    pub fn check_dominates_base(&self, base: &GenIntSeq, depth: u64) -> Result<()> {
        let mut prev = GenInt::Fin(0);
        for k in 1..=depth {
            let b = self.get(k)?;
            let a = base.get(k)?;
            if b < a {
                return Err(SeqError::Membership(format!("entry {k} is {b}, below the base value {a}")));
            }
            if b < prev {
                return Err(SeqError::Membership(format!("entries decrease at index {k}")));
            }
            prev = b;
        }
        Ok(())
    }
}

pub struct RunIter<'a> {
    seq: &'a GenIntSeq,
    next: BigUint,
    done: bool,
}

impl Iterator for RunIter<'_> {
    type Item = Result<IntRun>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let start = self.next.clone();
        let plen = BigUint::from(self.seq.prefix.len());
        if start <= plen {
            let i = start.to_usize().expect("prefix index fits");
            let value = self.seq.prefix[i - 1];
            let mut j = i;
            while j < self.seq.prefix.len() && self.seq.prefix[j] == value {
                j += 1;
            }
            let end = BigUint::from(j + 1);
            self.next = end.clone();
            return Some(Ok(IntRun { start, end: Some(end), value }));
        }
        let Some(tail) = self.seq.tail else {
            self.done = true;
            return None;
        };
        let run = match tail {
            IntTail::Const { value } => {
                self.done = true;
                IntRun { start, end: None, value }
            }
            IntTail::Linear { .. } => match tail.value_big(&start) {
                Ok(value) => {
                    let end = &start + 1u32;
                    self.next = end.clone();
                    IntRun { start, end: Some(end), value }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            },
            IntTail::LogBase { base, shift } => {
                let m = ceil_log_big(base, &start);
                let end = BigUint::from(base).pow(m as u32) + 1u32;
                self.next = end.clone();
                IntRun { start, end: Some(end), value: GenInt::Fin(shift + m) }
            }
        };
        Some(Ok(run))
    }
}

/// Tail rule of a [`XiPoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum XiTail {
    Zero,
    /// `b_i = i − 1`
    Max,
    /// `b_i = min(value, i − 1)`
    Const { value: u64 },
}

impl XiTail {
    pub fn value(&self, i: u64) -> u64 {
        match *self {
            XiTail::Zero => 0,
            XiTail::Max => i - 1,
            XiTail::Const { value } => value.min(i - 1),
        }
    }
}

/// A point `b ∈ Ξ` with `0 ≤ b_i ≤ i − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XiPoint {
    prefix: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<XiTail>,
}

impl<'de> Deserialize<'de> for XiPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            prefix: Vec<u64>,
            #[serde(default)]
            tail: Option<XiTail>,
        }
        let raw = Raw::deserialize(d)?;
        XiPoint::new(raw.prefix, raw.tail).map_err(serde::de::Error::custom)
    }
}

impl XiPoint {
    pub fn new(prefix: Vec<u64>, tail: Option<XiTail>) -> Result<Self> {
        for (k, &b) in prefix.iter().enumerate() {
            if b > k as u64 {
                return Err(SeqError::Invalid(format!("coordinate {} is {b}, above its range 0..={k}", k + 1)));
            }
        }
        Ok(XiPoint { prefix, tail })
    }

    pub fn zero() -> Self {
        XiPoint { prefix: Vec::new(), tail: Some(XiTail::Zero) }
    }

    pub fn with_rule(tail: XiTail) -> Self {
        XiPoint { prefix: Vec::new(), tail: Some(tail) }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<&XiTail> {
        self.tail.as_ref()
    }

    pub fn get(&self, i: u64) -> Result<u64> {
        if i == 0 {
            return Err(SeqError::Invalid("indices are 1-based".into()));
        }
        if let Some(v) = self.prefix.get((i - 1) as usize) {
            return Ok(*v);
        }
        match &self.tail {
            Some(t) => Ok(t.value(i)),
            None => Err(SeqError::Range { index: i, available: self.prefix.len() as u64 }),
        }
    }

    pub fn materialize(&self, n: u64) -> Result<Vec<u64>> {
        (1..=n).map(|i| self.get(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn log_tail_runs_are_stairs() {
        let s = GenIntSeq::with_rule(IntTail::LogBase { base: 4, shift: 1 }).unwrap();
        let runs: Vec<IntRun> = s.runs_from(big(1)).take(4).map(|r| r.unwrap()).collect();
        assert_eq!(runs[0], IntRun { start: big(1), end: Some(big(2)), value: GenInt::Fin(1) });
        assert_eq!(runs[1], IntRun { start: big(2), end: Some(big(5)), value: GenInt::Fin(2) });
        assert_eq!(runs[2], IntRun { start: big(5), end: Some(big(17)), value: GenInt::Fin(3) });
        assert_eq!(runs[3].end, Some(big(65)));
        for i in 1..200 {
            assert_eq!(s.get(i).unwrap(), s.get_big(&big(i)).unwrap());
        }
    }

    #[test]
    fn decreasing_prefix_is_rejected() {
        assert!(GenIntSeq::from_values(&[3, 2], None).is_err());
        assert!(GenIntSeq::from_values(&[5], Some(IntTail::Const { value: GenInt::Fin(4) })).is_err());
    }

    #[test]
    fn infinity_arithmetic() {
        assert_eq!(GenInt::Inf.abs_diff(GenInt::Inf), GenInt::Fin(0));
        assert_eq!(GenInt::Inf.abs_diff(GenInt::Fin(3)), GenInt::Inf);
        assert!(GenInt::Inf.exceeds(u64::MAX));
        assert!(GenInt::Fin(3) < GenInt::Inf);
    }

    #[test]
    fn xi_range_is_enforced() {
        assert!(XiPoint::new(vec![0, 1, 2], None).is_ok());
        assert!(XiPoint::new(vec![1], None).is_err());
        assert_eq!(XiPoint::with_rule(XiTail::Const { value: 3 }).get(2).unwrap(), 1);
    }
}
