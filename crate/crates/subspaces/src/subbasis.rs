//! Embedding the canonical basis of any `Y ⊂ X^d(α)` into a subsequence of
//! the canonical basis, for the schedule `α_{2i} = a^{−k}` on `[N_k, N_{k+1})`.

use rowcol_cbnorm::cb_norm_general;
use rowcol_linalg::{complete_basis, svd, ComplexMatrix};
use rowcol_xspace::weights::schedule_block;
use rowcol_xspace::{TailRule, WeightSequence};
use serde::{Deserialize, Serialize};

use crate::{Result, SubspaceError, SubspaceFrame};

/// Singular values at or below this are treated as kernel directions.
pub const KERNEL_TOL: f64 = 1e-12;

/// `N_k = ratio^k`, so `N_k > 2N_{k−1}` whenever `ratio ≥ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubbasisSchedule {
    pub a: f64,
    pub ratio: u64,
}

impl SubbasisSchedule {
    pub fn new(a: f64, ratio: u64) -> Result<Self> {
        if !(a > 1.0 && a < 2.0) {
            return Err(SubspaceError::Schedule(format!("a = {a} must lie in (1,2)")));
        }
        if ratio < 3 {
            return Err(SubspaceError::Schedule(format!("ratio {ratio} breaks N_k > 2N_(k-1)")));
        }
        Ok(SubbasisSchedule { a, ratio })
    }

    /// `N_k`; `None` past `u64`.
    pub fn cutpoint(&self, k: u32) -> Option<u64> {
        self.ratio.checked_pow(k)
    }

    pub fn weights(&self) -> WeightSequence {
        WeightSequence::with_rule(vec![], TailRule::Subbasis { a: self.a, ratio: self.ratio })
            .expect("schedule parameters were validated")
    }

    /// `α_j`, 1-based.
    pub fn weight(&self, j: u64) -> f64 {
        if j % 2 == 1 {
            0.0
        } else {
            self.a.powi(-(schedule_block(self.ratio, j / 2) as i32))
        }
    }

    /// Block `k ≥ 1` with `a^{1−k} ≥ s > a^{−k}`, for `0 < s ≤ 1`.
    pub fn value_block(&self, s: f64) -> u32 {
        let mut k = 1u32;
        while s <= self.a.powi(-(k as i32)) {
            k += 1;
        }
        k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbasisEmbedding {
    /// Singular values of `A|_Y`, nonincreasing, then zeros for the kernel.
    pub beta: Vec<f64>,
    /// `M_0 = 1, M_1, …`: `M_k` is the smallest `i` with `β_i ≤ a^{−k}`.
    pub m: Vec<usize>,
    /// `π(i)` for `i = 1, …, dim Y` in the order of `beta`.
    pub pi: Vec<u64>,
    pub t_cb: f64,
    pub t_inv_cb: f64,
    /// `‖T‖cb · ‖T⁻¹‖cb`
    pub distortion: f64,
    pub certified: bool,
}

/// The injection `π` and the distortion of `T ξ_i = e_{π(i)}`.
pub fn subbasis_embed(schedule: &SubbasisSchedule, y: &SubspaceFrame) -> Result<SubbasisEmbedding> {
    if y.ambient() != &schedule.weights() {
        return Err(SubspaceError::Invalid("the frame does not live in the schedule's space".into()));
    }
    let d = y.dim();
    let s = y.restricted_operator();
    let dec = svd(&s)?;
    let rank = dec.spectrum.values().iter().take_while(|&&v| v > KERNEL_TOL).count();
    let mut beta: Vec<f64> = dec.spectrum.values()[..rank].to_vec();
    beta.resize(d, 0.0);
    let eta = complete_basis(&dec.right.columns(0..rank), d - rank);

    let blocks: Vec<u32> = beta[..rank].iter().map(|&b| schedule.value_block(b)).collect();
    let last = blocks.last().copied().unwrap_or(0);
    let mut m = vec![1usize];
    for k in 1..=last {
        m.push(1 + blocks.iter().filter(|&&b| b <= k).count());
    }

    let mut pi = Vec::with_capacity(d);
    let mut offset = 0u64;
    for (idx, &k) in blocks.iter().enumerate() {
        if idx > 0 && blocks[idx - 1] != k {
            offset = 0;
        }
        let lo = schedule.cutpoint(k).ok_or_else(|| SubspaceError::Schedule(format!("N_{k} overflows")))?;
        let hi = schedule.cutpoint(k + 1).ok_or_else(|| SubspaceError::Schedule(format!("N_{} overflows", k + 1)))?;
        if lo + offset >= hi {
            return Err(SubspaceError::Schedule(format!(
                "block {k} holds more than N_{} − N_{k} = {} values",
                k + 1,
                hi - lo
            )));
        }
        pi.push(2 * (lo + offset));
        offset += 1;
    }
    for j in 0..(d - rank) as u64 {
        pi.push(2 * j + 1);
    }

    let target: Vec<f64> = pi.iter().map(|&j| schedule.weight(j)).collect();
    let a_y = s.matmul(&eta);
    let b = ComplexMatrix::diag_real(&target);
    let id = ComplexMatrix::identity(d);
    let fwd = cb_norm_general(&a_y, &b, &id)?;
    let inv = cb_norm_general(&b, &a_y, &id)?;
    Ok(SubbasisEmbedding {
        beta,
        m,
        pi,
        t_cb: fwd.value,
        t_inv_cb: inv.value,
        distortion: fwd.value * inv.value,
        certified: fwd.certified && inv.certified,
    })
}
