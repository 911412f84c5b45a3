//! The relation `β ∼* γ`: some `K` and `I` with `|β_i − γ_i| ≤ K` off `I`
//! and `Σ_I (4^{−β_i} + 4^{−γ_i}) ≤ K`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::genint::{GenInt, GenIntSeq, IntTail, TailMass};
use crate::mass::{MassReport, QuarterMass};
use crate::verdict::{EquivVerdict, ForcedMass};
use crate::Result;

/// Membership of `(β, γ)` in `F(K, n)`, decided with the minimal set
/// `I_n = {i ≤ n : |β_i − γ_i| > K}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarCheck {
    pub holds: bool,
    pub forced_count: u64,
    pub mass: QuarterMass,
}

pub fn star_check(beta: &GenIntSeq, gamma: &GenIntSeq, k: u64, n: u64) -> Result<StarCheck> {
    let mut mass = QuarterMass::new();
    let mut forced_count = 0;
    for i in 1..=n {
        let (b, g) = (beta.get(i)?, gamma.get(i)?);
        if b.abs_diff(g).exceeds(k) {
            forced_count += 1;
            mass.add(b);
            mass.add(g);
        }
    }
    Ok(StarCheck { holds: mass.at_most(k), forced_count, mass })
}

pub fn star_equiv_at(beta: &GenIntSeq, gamma: &GenIntSeq, k: u64, n: u64) -> Result<bool> {
    Ok(star_check(beta, gamma, k, n)?.holds)
}

/// `I_n` itself.
pub fn forced_set(beta: &GenIntSeq, gamma: &GenIntSeq, k: u64, n: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for i in 1..=n {
        if beta.get(i)?.abs_diff(gamma.get(i)?).exceeds(k) {
            out.push(i);
        }
    }
    Ok(out)
}

/// `Σ_{i∈I} (4^{−β_i} + 4^{−γ_i})`.
pub fn set_mass(beta: &GenIntSeq, gamma: &GenIntSeq, set: &[u64]) -> Result<QuarterMass> {
    let mut mass = QuarterMass::new();
    for &i in set {
        mass.add(beta.get(i)?);
        mass.add(gamma.get(i)?);
    }
    Ok(mass)
}

/// Witness of `β ∼* γ`: the minimal set `{i : |β_i − γ_i| > K}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarWitness {
    pub k: u64,
    /// Members up to `scanned`, when few enough to list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listed: Option<Vec<u64>>,
    pub scanned: u64,
    /// Every index from here on is a member.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cofinite_from: Option<u64>,
    /// Mass of the whole set over all indices.
    pub mass: MassReport,
    pub note: String,
}

pub type StarVerdict = EquivVerdict<StarWitness>;

/// Eventual behaviour of `|β_i − γ_i|` on the tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Growth {
    Constant(GenInt),
    Unbounded,
}

fn growth(tb: &IntTail, tg: &IntTail) -> Growth {
    use IntTail::*;
    match (*tb, *tg) {
        (Const { value: a }, Const { value: b }) => Growth::Constant(a.abs_diff(b)),
        (Linear { slope: s1, offset: o1 }, Linear { slope: s2, offset: o2 }) if s1 == s2 => {
            Growth::Constant(GenInt::Fin(o1.abs_diff(o2)))
        }
        (LogBase { base: b1, shift: h1 }, LogBase { base: b2, shift: h2 }) if b1 == b2 => Growth::Constant(GenInt::Fin(h1.abs_diff(h2))),
        _ => Growth::Unbounded,
    }
}

/// Index from which `|β_i − γ_i| > k` holds for good, for linear pairs.
fn linear_threshold(tb: &IntTail, tg: &IntTail, k: u64) -> Option<u64> {
    match (*tb, *tg) {
        (IntTail::Linear { slope: s1, offset: o1 }, IntTail::Linear { slope: s2, offset: o2 }) if s1 != s2 => {
            let ds = s1.abs_diff(s2) as u128;
            let bound = (k as u128 + o1.abs_diff(o2) as u128) / ds + 1;
            u64::try_from(bound).ok()
        }
        _ => None,
    }
}

/// `Σ_{i>n} 4^{−x_i}` for a tail of geometric or zero mass.
fn tail_sum_after(t: &IntTail, n: u64) -> Option<BigRational> {
    match *t {
        IntTail::Const { value: GenInt::Inf } => Some(BigRational::zero()),
        IntTail::Linear { slope, offset } if slope > 0 => {
            let first = i128::from(slope) * i128::from(n + 1) + i128::from(offset);
            let first = usize::try_from(first).ok()?;
            let four_s = BigInt::one() << (2 * slope) as usize;
            let den = (BigInt::one() << (2 * first)) * (&four_s - 1);
            Some(BigRational::new(four_s, den))
        }
        _ => None,
    }
}

/// Scans beyond which no linear threshold is chased.
const SCAN_CAP: u64 = 10_000_000;
const LIST_LIMIT: u64 = 10_000;

/// Decides `β ∼* γ` across `K ≤ k_max`.
///
/// Verdicts are exact: a constant fails once its forced mass at the scanned
/// depth exceeds it (the mass only grows with depth), and passes for good only
/// when the tail rules give a closed form for the rest.
pub fn star_equiv(beta: &GenIntSeq, gamma: &GenIntSeq, depth: u64, k_max: u64) -> Result<StarVerdict> {
    let tails = match (beta.tail(), gamma.tail()) {
        (Some(b), Some(g)) => Some((*b, *g)),
        _ => None,
    };
    let mut scan = match (beta.available(), gamma.available()) {
        (None, None) => depth.max(beta.tail_start().max(gamma.tail_start()) - 1),
        (a, b) => depth.min(a.unwrap_or(u64::MAX)).min(b.unwrap_or(u64::MAX)),
    };
    if let Some((tb, tg)) = tails {
        if let Some(t) = linear_threshold(&tb, &tg, k_max) {
            if t <= SCAN_CAP {
                scan = scan.max(t);
            }
        }
    }

    // Bucket d holds indices with |β_i − γ_i| = d; the last bucket holds d > k_max.
    let buckets = (k_max + 2) as usize;
    let mut mass = vec![QuarterMass::new(); buckets];
    let mut count = vec![0u64; buckets];
    let mut checkpoints: Vec<u64> = std::iter::successors(Some(1u64), |d| d.checked_mul(4)).take_while(|&d| d < scan).collect();
    checkpoints.push(scan);
    let mut next_cp = 0;
    let mut snapshots = Vec::new();
    for i in 1..=scan {
        let (b, g) = (beta.get(i)?, gamma.get(i)?);
        let slot = match b.abs_diff(g) {
            GenInt::Fin(d) if d <= k_max => d as usize,
            _ => buckets - 1,
        };
        mass[slot].add(b);
        mass[slot].add(g);
        count[slot] += 1;
        if next_cp < checkpoints.len() && checkpoints[next_cp] == i {
            snapshots.push((i, mass[buckets - 1].clone()));
            next_cp += 1;
        }
    }
    // forced[k] = mass of {d > k}.
    let mut forced = vec![QuarterMass::new(); buckets];
    let mut forced_count = vec![0u64; buckets];
    let mut acc = QuarterMass::new();
    let mut acc_count = 0;
    for k in (0..buckets).rev() {
        forced[k] = acc.clone();
        forced_count[k] = acc_count;
        acc.merge(&mass[k]);
        acc_count += count[k];
    }

    let diverges = tails.is_some_and(|(tb, tg)| tb.mass_kind() == TailMass::Divergent || tg.mass_kind() == TailMass::Divergent);
    let grow = tails.map(|(tb, tg)| growth(&tb, &tg));
    let mut smallest_at_depth = None;
    let mut all_fail = true;
    let mut undecided = None;
    for k in 0..=k_max {
        let kk = k as usize;
        if !forced[kk].at_most(k) {
            continue;
        }
        smallest_at_depth.get_or_insert(k);
        let Some((tb, tg)) = tails else {
            all_fail = false;
            continue;
        };
        let cofinite = match grow {
            Some(Growth::Constant(d)) if !d.exceeds(k) => None,
            Some(Growth::Constant(_)) => Some(beta.tail_start().max(gamma.tail_start())),
            _ => linear_threshold(&tb, &tg, k)
                .filter(|&t| t <= scan + 1)
                .or(matches!((tb, tg), (IntTail::Const { value: GenInt::Inf }, _) | (_, IntTail::Const { value: GenInt::Inf }))
                    .then(|| beta.tail_start().max(gamma.tail_start()))),
        };
        let unbounded = grow == Some(Growth::Unbounded) || matches!(grow, Some(Growth::Constant(d)) if d.exceeds(k));
        if !unbounded {
            let witness = witness_for(beta, gamma, k, scan, forced_count[kk], None, forced[kk].report(), "no index beyond the scan is forced")?;
            return Ok(StarVerdict::Equivalent { k, witness });
        }
        if diverges {
            continue;
        }
        let extra = match (cofinite, tail_sum_after(&tb, scan), tail_sum_after(&tg, scan)) {
            (Some(_), Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        match extra {
            Some(extra) if forced[kk].at_most_with(&extra, k) => {
                let total = forced[kk].to_rational(crate::mass::EXACT_REPORT_LIMIT).map(|r| r + &extra);
                let report = match total {
                    Some(r) => MassReport::from_rational(&r),
                    None => forced[kk].report(),
                };
                let witness = witness_for(beta, gamma, k, scan, forced_count[kk], cofinite, report, "geometric closed form beyond the scan")?;
                return Ok(StarVerdict::Equivalent { k, witness });
            }
            Some(_) => {}
            None => {
                all_fail = false;
                undecided.get_or_insert(k);
            }
        }
    }

    let every_k_fails = diverges && grow == Some(Growth::Unbounded);
    if all_fail && every_k_fails {
        let certificate = snapshots
            .into_iter()
            .map(|(d, m)| ForcedMass { depth: d, k: k_max, exceeds_k: !m.at_most(k_max), mass: m.report() })
            .collect();
        return Ok(StarVerdict::NotEquivalent {
            certificate,
            reason: "the difference is unbounded on the tails, so every K forces a cofinite set, and a tail mass diverges".into(),
        });
    }
    let note = if tails.is_none() {
        "a sequence is truncated; only refutations are final".to_string()
    } else if let Some(k) = undecided {
        format!("K = {k} passes at depth but the tail has no closed form")
    } else if all_fail {
        format!("every K ≤ {k_max} is refuted; larger K may pass")
    } else {
        "undecided".to_string()
    };
    Ok(StarVerdict::Inconclusive { depth: scan, smallest_passing_k: smallest_at_depth, note })
}

#[allow(clippy::too_many_arguments)]
fn witness_for(
    beta: &GenIntSeq,
    gamma: &GenIntSeq,
    k: u64,
    scan: u64,
    count: u64,
    cofinite_from: Option<u64>,
    mass: MassReport,
    note: &str,
) -> Result<StarWitness> {
    let listed = if count <= LIST_LIMIT { Some(forced_set(beta, gamma, k, scan)?) } else { None };
    Ok(StarWitness { k, listed, scanned: scan, cofinite_from, mass, note: note.to_string() })
}

/// Replays a witness up to `depth`: the differences outside the set are at
/// most `K`, and the set's mass within `depth` is at most `K`.
pub fn replay_star(beta: &GenIntSeq, gamma: &GenIntSeq, witness: &StarWitness, depth: u64) -> Result<bool> {
    if let Some(listed) = &witness.listed {
        let upto = depth.min(witness.scanned);
        let expect: Vec<u64> = listed.iter().copied().filter(|&i| i <= upto).collect();
        if forced_set(beta, gamma, witness.k, upto)? != expect {
            return Ok(false);
        }
    }
    star_equiv_at(beta, gamma, witness.k, depth)
}
