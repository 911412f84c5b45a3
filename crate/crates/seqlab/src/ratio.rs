//! The relations `α ≻ β` (`β_i ≤ K α_i` off a set of finite `β`-mass) and
//! `α ∼ β` on nonincreasing weight sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rowcol_xspace::weights::{exact_f64, PairVariant};
use rowcol_xspace::{Flag, SquareSum, TailRule, WeightSequence};
use serde::{Deserialize, Serialize};

use crate::mass::MassReport;
use crate::verdict::{EquivVerdict, ForcedMass};
use crate::{Result, SeqError};

/// `{i ≥ from (and ≤ upto) : big_i > k · small_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceedSet {
    pub big: WeightSequence,
    pub small: WeightSequence,
    pub k: u64,
    pub from: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upto: Option<u64>,
}

impl ExceedSet {
    pub fn contains(&self, i: u64) -> Result<bool> {
        if i < self.from || self.upto.is_some_and(|u| i > u) {
            return Ok(false);
        }
        Ok(!within(self.big.get(i)?, self.small.get(i)?, self.k))
    }
}

/// The set `S` and constant `K` of a domination or equivalence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioWitness {
    pub k: u64,
    /// Explicit members of `S`.
    pub listed: Vec<u64>,
    /// Further members, by predicate.
    pub predicates: Vec<ExceedSet>,
    /// Why `S` has finite mass.
    pub mass_note: String,
}

impl RatioWitness {
    pub fn contains(&self, i: u64) -> Result<bool> {
        if self.listed.binary_search(&i).is_ok() {
            return Ok(true);
        }
        for p in &self.predicates {
            if p.contains(i)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub type RatioVerdict = EquivVerdict<RatioWitness>;

/// `b ≤ k a`, decided exactly when floating point is not conclusive.
fn within(b: f64, a: f64, k: u64) -> bool {
    let ka = k as f64 * a;
    if b < ka * (1.0 - 1e-14) {
        return true;
    }
    if b > ka * (1.0 + 1e-14) {
        return false;
    }
    exact_f64(b) <= exact_f64(a) * BigRational::from_integer(BigInt::from(k))
}

/// Constant segment `[start, end)` of a pair of sequences.
#[derive(Debug, Clone, Copy)]
struct Segment {
    start: u64,
    end: u64,
    a: f64,
    b: f64,
}

/// Pair segments covering `1..=upto`.
fn segments(alpha: &WeightSequence, beta: &WeightSequence, upto: u64) -> Result<Vec<Segment>> {
    let ra = alpha.runs(upto)?;
    let rb = beta.runs(upto)?;
    let stop = upto + 1;
    let (mut i, mut j) = (0, 0);
    let mut pos = 1;
    let mut out = Vec::new();
    while pos < stop && i < ra.len() && j < rb.len() {
        let ea = ra[i].end.unwrap_or(u64::MAX).min(stop);
        let eb = rb[j].end.unwrap_or(u64::MAX).min(stop);
        let end = ea.min(eb);
        out.push(Segment { start: pos, end, a: ra[i].value, b: rb[j].value });
        pos = end;
        if ea == end {
            i += 1;
        }
        if eb == end {
            j += 1;
        }
    }
    Ok(out)
}

/// First index from which the tail rule alone determines the sequence.
fn rule_start(w: &WeightSequence) -> u64 {
    let p = w.prefix().len() as u64 + 1;
    match w.tail() {
        Some(TailRule::Blocks { blocks }) => p.saturating_add(blocks.iter().map(|b| b.0).sum::<u64>()),
        _ => p,
    }
}

fn eventually_zero(w: &WeightSequence) -> bool {
    matches!(w.tail(), Some(TailRule::Zero) | Some(TailRule::Blocks { .. }))
}

fn is_global(rule: &TailRule) -> bool {
    !matches!(rule, TailRule::Zero | TailRule::Blocks { .. })
}

/// What the tail rules say about `β_i ≤ K α_i` beyond both rule starts.
#[derive(Debug, Clone, PartialEq)]
enum TailFact {
    Bounded(u64),
    BetaSquareSummable(f64),
    Divergent(String),
    Unknown(String),
}

fn tail_fact(alpha: &WeightSequence, beta: &WeightSequence) -> TailFact {
    let (Some(ta), Some(tb)) = (alpha.tail(), beta.tail()) else {
        return TailFact::Unknown("a sequence is truncated; finite data never decides the relation".into());
    };
    let beta_sum = beta.square_sum();
    if let SquareSum::Converges { bound } = beta_sum {
        return TailFact::BetaSquareSummable(bound);
    }
    let beta_diverges = matches!(beta_sum, SquareSum::Diverges { .. });
    if ta == tb && (is_global(ta) || alpha.prefix().len() == beta.prefix().len()) {
        return TailFact::Bounded(1);
    }
    if eventually_zero(alpha) && beta_diverges {
        return TailFact::Divergent("α is eventually zero while Σβ² diverges".into());
    }
    match (ta, tb) {
        (TailRule::NotSubbasis { variant: va }, TailRule::NotSubbasis { variant: vb }) => match (va, vb) {
            (PairVariant::Beta, PairVariant::Alpha) => TailFact::Divergent(
                "β_i/α_i = 2^n on block n, and block n carries (4^{(n+1)²} − 4^{n²}) · 4^{−n²} ≥ 3 · 4^{2n+1} of β-mass".into(),
            ),
            _ => TailFact::Bounded(1),
        },
        (TailRule::Log4 { shift: s1, base: b1 }, TailRule::Log4 { shift: s2, base: b2 }) => {
            if b1 >= b2 {
                let e = s1.saturating_sub(*s2);
                if e >= 63 {
                    TailFact::Unknown(format!("ratio bound 2^{e} is out of range"))
                } else {
                    TailFact::Bounded(1u64 << e)
                }
            } else if beta_diverges {
                TailFact::Divergent(format!(
                    "β_i/α_i ≥ 2^{{ceil(log_{b1} i) − ceil(log_{b2} i) + {s1} − {s2}}} → ∞ while Σβ² diverges"
                ))
            } else {
                TailFact::Unknown("unbounded ratio with undecided β-mass".into())
            }
        }
        (TailRule::Power { exponent: e1, scale: c1 }, TailRule::Power { exponent: e2, scale: c2 }) => {
            if *c1 == 0.0 {
                TailFact::Divergent("α is zero on its tail while Σβ² diverges".into())
            } else if e2 >= e1 {
                let k = (c2 / c1 * (1.0 + 1e-12)).ceil().max(1.0);
                TailFact::Bounded(k as u64)
            } else {
                TailFact::Divergent(format!("β_i/α_i = ({c2}/{c1}) i^{} → ∞ while Σβ² diverges", e1 - e2))
            }
        }
        _ => TailFact::Unknown("no closed form relates these tail rules".into()),
    }
}

const LIST_LIMIT: u64 = 100_000;

fn require_sorted(w: &WeightSequence, name: &str) -> Result<()> {
    if w.has_flag(Flag::Sorted) {
        Ok(())
    } else {
        Err(SeqError::Precondition(format!("{name} does not carry the sorted flag")))
    }
}

fn rational_sq(x: f64) -> BigRational {
    let r = exact_f64(x);
    &r * &r
}

/// Smallest `K ≤ k_max` with no forced index in the segments.
fn smallest_clean_k(segs: &[Segment], k_max: u64) -> Option<u64> {
    (1..=k_max.max(1)).find(|&k| segs.iter().all(|s| within(s.b, s.a, k)))
}

/// Forced masses `Σ_{i ≤ d, β_i > Kα_i} β_i²` at doubling depths up to `depth`.
fn forced_certificate(segs: &[Segment], k: u64, depth: u64) -> Vec<ForcedMass> {
    let mut checkpoints: Vec<u64> = std::iter::successors(Some(1u64), |d| d.checked_mul(4)).take_while(|&d| d < depth).collect();
    checkpoints.push(depth);
    let mut out = Vec::new();
    let mut mass = BigRational::zero();
    let mut seg = segs.iter().peekable();
    let mut pos = 1;
    for d in checkpoints {
        while pos <= d {
            let Some(s) = seg.peek() else { break };
            let end = s.end.min(d + 1);
            if !within(s.b, s.a, k) {
                mass += rational_sq(s.b) * BigRational::from_integer(BigInt::from(end - pos));
            }
            pos = end;
            if end == s.end {
                seg.next();
            }
        }
        let kq = BigRational::from_integer(BigInt::from(k));
        out.push(ForcedMass { depth: d, k, mass: MassReport::from_rational(&mass), exceeds_k: mass > kq });
    }
    out
}

/// Decides `α ≻ β`: is `β_i ≤ K α_i` off a set `S` with `Σ_S β_i² < ∞`?
///
/// For each `K` the smallest admissible set is `S_K = {i : β_i > K α_i}`.
pub fn dominates(alpha: &WeightSequence, beta: &WeightSequence, depth: u64, k_max: u64) -> Result<RatioVerdict> {
    require_sorted(alpha, "α")?;
    require_sorted(beta, "β")?;
    let k_max = k_max.max(1);
    let truncated = alpha.available().into_iter().chain(beta.available()).min();
    let fact = tail_fact(alpha, beta);
    let start = rule_start(alpha).max(rule_start(beta));
    let scan = match truncated {
        Some(avail) => depth.min(avail),
        None => depth.max(start - 1),
    };
    let segs = segments(alpha, beta, scan)?;
    let inconclusive = |note: String| RatioVerdict::Inconclusive { depth: scan, smallest_passing_k: smallest_clean_k(&segs, k_max), note };

    match fact {
        TailFact::Bounded(kt) => {
            let k = kt.max(1);
            if k > k_max {
                return Ok(inconclusive(format!("the tail needs K = {k} > {k_max}")));
            }
            let head: Vec<Segment> = segs.iter().copied().filter(|s| s.start < start).collect();
            let forced: Vec<&Segment> = head.iter().filter(|s| !within(s.b, s.a, k)).collect();
            let count: u64 = forced.iter().map(|s| s.end.min(start) - s.start).sum();
            let mut witness = RatioWitness { k, listed: Vec::new(), predicates: Vec::new(), mass_note: String::new() };
            if count <= LIST_LIMIT {
                witness.listed = forced.iter().flat_map(|s| s.start..s.end.min(start)).collect();
            } else {
                witness.predicates.push(ExceedSet { big: beta.clone(), small: alpha.clone(), k, from: 1, upto: Some(start - 1) });
            }
            witness.mass_note = format!("finite: S lies below index {start}, beyond which β_i ≤ {k} α_i");
            Ok(RatioVerdict::Equivalent { k, witness })
        }
        TailFact::BetaSquareSummable(bound) => Ok(RatioVerdict::Equivalent {
            k: 1,
            witness: RatioWitness {
                k: 1,
                listed: Vec::new(),
                predicates: vec![ExceedSet { big: beta.clone(), small: alpha.clone(), k: 1, from: 1, upto: None }],
                mass_note: format!("Σ_S β² ≤ Σβ² ≤ {bound}"),
            },
        }),
        TailFact::Divergent(reason) => {
            let certificate = forced_certificate(&segs, k_max, scan);
            Ok(RatioVerdict::NotEquivalent {
                certificate,
                reason: format!("for every K the forced set has infinite β-mass: {reason}"),
            })
        }
        TailFact::Unknown(note) => Ok(inconclusive(note)),
    }
}

fn union_witness(k: u64, w1: &RatioWitness, w2: &RatioWitness) -> RatioWitness {
    let mut listed: Vec<u64> = w1.listed.iter().chain(&w2.listed).copied().collect();
    listed.sort_unstable();
    listed.dedup();
    let predicates = w1.predicates.iter().chain(&w2.predicates).cloned().collect();
    let mass_note = match (w1.mass_note.is_empty(), w2.mass_note.is_empty()) {
        (false, false) => format!("union of two sets of finite mass ({}; {})", w1.mass_note, w2.mass_note),
        _ => format!("{}{}", w1.mass_note, w2.mass_note),
    };
    RatioWitness { k, listed, predicates, mass_note }
}

/// Decides `α ∼ β` from both dominations; witnesses merge as `S₁ ∪ S₂`
/// with the larger constant.
pub fn seq_equivalent(alpha: &WeightSequence, beta: &WeightSequence, depth: u64, k_max: u64) -> Result<RatioVerdict> {
    let d1 = dominates(alpha, beta, depth, k_max)?;
    let d2 = dominates(beta, alpha, depth, k_max)?;
    Ok(match (d1, d2) {
        (RatioVerdict::Equivalent { k: k1, witness: w1 }, RatioVerdict::Equivalent { k: k2, witness: w2 }) => {
            let k = k1.max(k2);
            RatioVerdict::Equivalent { k, witness: union_witness(k, &w1, &w2) }
        }
        (v @ RatioVerdict::NotEquivalent { .. }, _) | (_, v @ RatioVerdict::NotEquivalent { .. }) => v,
        (RatioVerdict::Inconclusive { depth, note, .. }, _) | (_, RatioVerdict::Inconclusive { depth, note, .. }) => {
            RatioVerdict::Inconclusive { depth, smallest_passing_k: None, note }
        }
    })
}

/// Composition of `α ∼ β` (constant `K₁`) and `β ∼ γ` (`K₂`): `K₁K₂` with `S₁ ∪ S₂`.
pub fn compose(w1: &RatioWitness, w2: &RatioWitness) -> RatioWitness {
    union_witness(w1.k.saturating_mul(w2.k), w1, w2)
}

/// Checks `β_i ≤ K α_i` for every `i ≤ depth` outside the witness set.
pub fn replay_domination(alpha: &WeightSequence, beta: &WeightSequence, witness: &RatioWitness, depth: u64) -> Result<bool> {
    for i in 1..=depth {
        if !witness.contains(i)? && !within(beta.get(i)?, alpha.get(i)?, witness.k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `K⁻¹α_i ≤ β_i ≤ K α_i` for every `i ≤ depth` outside the witness set.
pub fn replay_equivalence(alpha: &WeightSequence, beta: &WeightSequence, witness: &RatioWitness, depth: u64) -> Result<bool> {
    for i in 1..=depth {
        if witness.contains(i)? {
            continue;
        }
        let (a, b) = (alpha.get(i)?, beta.get(i)?);
        if !within(b, a, witness.k) || !within(a, b, witness.k) {
            return Ok(false);
        }
    }
    Ok(true)
}
