use rowcol_xspace::WeightSequence;
use serde::{Deserialize, Serialize};

use crate::{CbNormError, CbNormResult, Method, Result, Witness};

/// Solution of `max Σ b_i s_i` subject to `Σ a_i s_i ≤ 1`, `0 ≤ s_i ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knapsack {
    pub value: f64,
    pub s: Vec<f64>,
}

/// Ratio greedy for the fractional knapsack with unit budget.
///
/// Free items (`a_i = 0`) are taken whole; the rest in decreasing order of
/// `b_i / a_i`, ties broken by index.
pub fn knapsack(a: &[f64], b: &[f64]) -> Knapsack {
    assert_eq!(a.len(), b.len());
    let mut s = vec![0.0; a.len()];
    let mut order = Vec::new();
    for i in 0..a.len() {
        if a[i] == 0.0 {
            s[i] = 1.0;
        } else if b[i] > 0.0 {
            order.push(i);
        }
    }
    order.sort_by(|&i, &j| (b[j] * a[i]).total_cmp(&(b[i] * a[j])).then(i.cmp(&j)));
    let mut budget = 1.0;
    for i in order {
        if budget <= 0.0 {
            break;
        }
        let take = (budget / a[i]).min(1.0);
        s[i] = take;
        budget -= take * a[i];
    }
    let value = b.iter().zip(&s).map(|(b, s)| b * s).sum();
    Knapsack { value, s }
}

/// cb-norm of the formal identity `X^d(α) -> X^d(β)` on the first `depth` coordinates.
pub fn cb_norm_diag_identity(alpha: &WeightSequence, beta: &WeightSequence, depth: u64) -> Result<CbNormResult> {
    if depth == 0 {
        return Err(CbNormError::InvalidInput("empty truncation".into()));
    }
    let a: Vec<f64> = alpha.materialize(depth)?.iter().map(|x| x * x).collect();
    let b: Vec<f64> = beta.materialize(depth)?.iter().map(|x| x * x).collect();
    let k = knapsack(&a, &b);
    let value = k.value.max(1.0).sqrt();
    Ok(CbNormResult {
        value,
        upper_bound: Some(value),
        op_norm: 1.0,
        sup_squared: k.value,
        witness: Witness::Diagonal(k.s.iter().map(|x| x.sqrt()).collect()),
        method: Method::ExactGreedy,
        certified: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractional_item_fills_the_budget() {
        let k = knapsack(&[1.0, 0.25], &[0.25, 0.25]);
        assert_eq!(k.s, vec![0.75, 1.0]);
        assert_eq!(k.value, 7.0 / 16.0);
    }

    #[test]
    fn free_items_are_taken_whole() {
        let k = knapsack(&[0.0, 0.0, 4.0], &[1.0, 1.0, 1.0]);
        assert_eq!(k.s, vec![1.0, 1.0, 0.25]);
        assert_eq!(k.value, 2.25);
    }
}
