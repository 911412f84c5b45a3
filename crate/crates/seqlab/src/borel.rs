//! The reduction `b ↦ φ(b)` from `Ξ` into `S_A`, and the family `b_ε`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::genint::{GenInt, GenIntSeq, IntTail, XiPoint};
use crate::{Result, SeqError};

/// Block `I_k = [p_k, q_k − 1)` followed by the gap `[q_k − 1, p_{k+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Borel2Block {
    pub k: u64,
    pub p: BigUint,
    pub q: BigUint,
    pub next_p: BigUint,
    /// `Σ_{i∈I_k} 4^{−α_i}` as `"num/den"`.
    pub mass: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Borel2Blocks {
    pub blocks: Vec<Borel2Block>,
}

/// Runs scanned per block before giving up.
const RUN_LIMIT: usize = 1 << 22;

fn quarter_power(v: u64) -> Result<BigRational> {
    let e = usize::try_from(2 * v).map_err(|_| SeqError::Construction("exponent out of range".into()))?;
    Ok(BigRational::new(BigInt::one(), BigInt::one() << e))
}

impl Borel2Blocks {
    /// Blocks for the base `α` until `p_k` passes `depth`.
    ///
    /// `I_k` is the shortest run of indices from `p_k` whose mass
    /// `Σ 4^{−α_i}` strictly exceeds `16^k`; `p_{k+1}` is the first index
    /// `j ≥ q_k` with `α_j > k + α_{q_k}`.
    pub fn build(alpha: &GenIntSeq, depth: u64) -> Result<Self> {
        match alpha.tail() {
            Some(IntTail::LogBase { base, .. }) if *base >= 4 => {}
            Some(IntTail::LogBase { base, .. }) => {
                return Err(SeqError::Construction(format!("Σ4^(−α) converges for a log tail of base {base} < 4")))
            }
            Some(IntTail::Linear { .. }) => return Err(SeqError::Construction("Σ4^(−α) converges for a linear tail".into())),
            Some(IntTail::Const { .. }) => return Err(SeqError::Construction("α must tend to infinity".into())),
            None => return Err(SeqError::Construction("α is truncated; divergence of Σ4^(−α) is not certified".into())),
        }
        let mut blocks = Vec::new();
        let mut p = BigUint::one();
        let mut k: u64 = 1;
        loop {
            let target = BigRational::from_integer(BigInt::one() << (4 * k) as usize);
            let mut acc = BigRational::zero();
            let mut last = None;
            for (n, run) in alpha.runs_from(p.clone()).enumerate() {
                if n > RUN_LIMIT {
                    return Err(SeqError::Construction(format!("block {k} not closed after {RUN_LIMIT} runs")));
                }
                let run = run?;
                let GenInt::Fin(v) = run.value else {
                    return Err(SeqError::Construction("α reaches ∞; the mass cannot grow".into()));
                };
                let per = quarter_power(v)?;
                let need = &target - &acc;
                // Entries needed to pass the target strictly.
                let t = (need / &per).floor().to_integer().to_biguint().unwrap_or_default() + 1u32;
                let len = run.end.as_ref().map(|e| e - &run.start);
                if len.as_ref().is_none_or(|l| &t <= l) {
                    acc += &per * BigRational::from_integer(BigInt::from(t.clone()));
                    last = Some(&run.start + &t - 1u32);
                    break;
                }
                let len = len.expect("finite run");
                acc += &per * BigRational::from_integer(BigInt::from(len));
            }
            let e = last.ok_or_else(|| SeqError::Construction(format!("block {k} never reaches mass 16^{k}")))?;
            let q = &e + 2u32;
            let GenInt::Fin(aq) = alpha.get_big(&q)? else {
                return Err(SeqError::Construction("α reaches ∞ before the next block".into()));
            };
            let threshold = GenInt::Fin(aq + k);
            let mut next_p = None;
            for (n, run) in alpha.runs_from(q.clone()).enumerate() {
                if n > RUN_LIMIT {
                    break;
                }
                let run = run?;
                if run.value > threshold {
                    next_p = Some(run.start.max(q.clone()));
                    break;
                }
                if run.end.is_none() {
                    break;
                }
            }
            let next_p = next_p.ok_or_else(|| SeqError::Construction(format!("α never exceeds {threshold} after block {k}")))?;
            let done = next_p > BigUint::from(depth);
            blocks.push(Borel2Block { k, p, q, next_p: next_p.clone(), mass: format!("{}/{}", acc.numer(), acc.denom()) });
            if done {
                return Ok(Borel2Blocks { blocks });
            }
            p = next_p;
            k += 1;
        }
    }

    /// Block holding index `j` and whether `j` lies in `I_k` (else in the gap).
    pub fn locate(&self, j: u64) -> Option<(&Borel2Block, bool)> {
        let jb = BigUint::from(j);
        self.blocks
            .iter()
            .find(|b| b.p <= jb && jb < b.next_p)
            .map(|b| (b, jb + 1u32 < b.q))
    }
}

/// `φ(b)_j`: `α_j + b_k` on `I_k`, and `min{α_j + k, α_{p_{k+1}}}` on the gap after it.
pub fn borel2_phi_with(b: &XiPoint, alpha: &GenIntSeq, blocks: &Borel2Blocks, depth: u64) -> Result<GenIntSeq> {
    let mut out = Vec::with_capacity(depth as usize);
    for j in 1..=depth {
        let (block, inside) = blocks
            .locate(j)
            .ok_or_else(|| SeqError::Construction(format!("index {j} is not covered by the blocks")))?;
        let a = alpha.get(j)?;
        let v = if inside {
            a.add(b.get(block.k)?)
        } else {
            a.add(block.k).min(alpha.get_big(&block.next_p)?)
        };
        out.push(v);
    }
    GenIntSeq::finite(out)
}

pub fn borel2_phi(b: &XiPoint, alpha: &GenIntSeq, depth: u64) -> Result<GenIntSeq> {
    let blocks = Borel2Blocks::build(alpha, depth)?;
    borel2_phi_with(b, alpha, &blocks, depth)
}

/// `sup_{i ≤ depth} |b_i − c_i|`.
pub fn eks_discrepancy(b: &XiPoint, c: &XiPoint, depth: u64) -> Result<u64> {
    let mut m = 0;
    for i in 1..=depth {
        m = m.max(b.get(i)?.abs_diff(c.get(i)?));
    }
    Ok(m)
}

/// Bits `ε(1), ε(2), …`: explicit prefix, then constant.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BitSeq {
    #[serde(default)]
    pub prefix: Vec<bool>,
    #[serde(default)]
    pub tail: bool,
}

impl BitSeq {
    pub fn new(prefix: Vec<bool>, tail: bool) -> Self {
        BitSeq { prefix, tail }
    }

    pub fn get(&self, k: u64) -> bool {
        self.prefix.get((k - 1) as usize).copied().unwrap_or(self.tail)
    }
}

/// A partition of `ℕ` into blocks `I_1, I_2, …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IndexPartition {
    /// `I_k = {2^{k−1}(2m+1) : m ≥ 0}`.
    TwoAdic,
    /// Explicit blocks, which must cover `1..=depth` without overlap.
    Explicit { blocks: Vec<Vec<u64>> },
}

impl IndexPartition {
    /// Block index of every `i ≤ depth`, 1-based.
    fn labels(&self, depth: u64) -> Result<Vec<u64>> {
        match self {
            IndexPartition::TwoAdic => Ok((1..=depth).map(|i| u64::from(i.trailing_zeros()) + 1).collect()),
            IndexPartition::Explicit { blocks } => {
                let mut label = vec![0u64; depth as usize];
                for (k, block) in blocks.iter().enumerate() {
                    for &i in block {
                        if i == 0 {
                            return Err(SeqError::Invalid("indices are 1-based".into()));
                        }
                        if i > depth {
                            continue;
                        }
                        let slot = &mut label[(i - 1) as usize];
                        if *slot != 0 {
                            return Err(SeqError::Invalid(format!("index {i} lies in blocks {} and {}", *slot, k + 1)));
                        }
                        *slot = k as u64 + 1;
                    }
                }
                if let Some(pos) = label.iter().position(|&l| l == 0) {
                    return Err(SeqError::Invalid(format!("index {} is in no block", pos + 1)));
                }
                Ok(label)
            }
        }
    }

    pub fn block_of(&self, i: u64) -> Result<u64> {
        match self {
            IndexPartition::TwoAdic => Ok(u64::from(i.trailing_zeros()) + 1),
            IndexPartition::Explicit { .. } => Ok(self.labels(i)?[(i - 1) as usize]),
        }
    }
}

/// `b_ε(i) = 0` when `i ∈ I_k` with `ε(k) = 0`, else `i − 1`.
pub fn b_epsilon(eps: &BitSeq, partition: &IndexPartition, depth: u64) -> Result<XiPoint> {
    let labels = partition.labels(depth)?;
    let prefix = labels
        .iter()
        .enumerate()
        .map(|(idx, &k)| if eps.get(k) { idx as u64 } else { 0 })
        .collect();
    XiPoint::new(prefix, None)
}

/// Index `q₁` as a decimal string, for reporting.
pub fn cut_to_string(v: &BigUint) -> String {
    v.to_u64().map(|x| x.to_string()).unwrap_or_else(|| v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_four_first_block_ends_past_four_to_the_84() {
        let alpha = GenIntSeq::with_rule(IntTail::LogBase { base: 4, shift: 1 }).unwrap();
        let blocks = Borel2Blocks::build(&alpha, 1000).unwrap();
        assert_eq!(blocks.blocks.len(), 1);
        let q1 = BigUint::from(4u32).pow(84) + 3u32;
        assert_eq!(blocks.blocks[0].q, q1);
    }

    #[test]
    fn two_adic_labels() {
        let l = IndexPartition::TwoAdic.labels(8).unwrap();
        assert_eq!(l, vec![1, 2, 1, 3, 1, 2, 1, 4]);
    }

    #[test]
    fn explicit_partition_must_cover() {
        let p = IndexPartition::Explicit { blocks: vec![vec![1, 3], vec![2]] };
        assert!(p.labels(3).is_ok());
        assert!(p.labels(4).is_err());
        let bad = IndexPartition::Explicit { blocks: vec![vec![1, 2], vec![2]] };
        assert!(bad.labels(2).is_err());
    }
}
