//! The trace program `max tr(Mv)` over `0 ⪯ v ⪯ I`, `tr(Gv) ≤ 1`,
//! for Hermitian `M, G ⪰ 0`.

use rand::SeedableRng;
use rayon::prelude::*;
use rowcol_linalg::random::{gaussian_matrix, SeededRng};
use rowcol_linalg::{eigh, ComplexMatrix, HermitianEigen};
use serde::{Deserialize, Serialize};

use crate::{CbNormError, Result};

/// `Re tr(AB)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut t = 0.0;
    for i in 0..n {
        for j in 0..n {
            t += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    t
}

fn hermitian_part(w: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(w.rows(), w.cols(), |i, j| (w[(i, j)] + w[(j, i)].conj()) * 0.5)
}

fn clipped(e: &HermitianEigen) -> ComplexMatrix {
    e.map(|x| x.clamp(0.0, 1.0))
}

/// Frobenius projection of a Hermitian `w` onto the feasible set.
///
/// The projection is `clip_[0,1](w - μG)` for the smallest `μ ≥ 0` meeting the
/// trace constraint; `μ` is found by a safeguarded false-position search.
/// Returns the projection and `μ`.
pub fn project(w: &ComplexMatrix, g: &ComplexMatrix, mu_hint: f64) -> Result<(ComplexMatrix, f64)> {
    let w = hermitian_part(w);
    let at = |mu: f64| -> Result<(ComplexMatrix, f64)> {
        let shifted = if mu == 0.0 { w.clone() } else { w.sub(&g.scale_real(mu)) };
        let v = clipped(&eigh(&shifted)?);
        let h = trace_product(g, &v);
        Ok((v, h))
    };
    let (v0, h0) = at(0.0)?;
    if h0 <= 1.0 {
        return Ok((v0, 0.0));
    }
    // Bracket [lo, hi] with h(lo) > 1 >= h(hi).
    let (mut lo, mut f_lo) = (0.0, h0 - 1.0);
    let mut hi = if mu_hint > 0.0 { mu_hint } else { w.max_abs().max(1.0) / g.max_abs().max(f64::MIN_POSITIVE) };
    let (mut v_hi, mut h_hi) = at(hi)?;
    let mut grow = 0;
    while h_hi > 1.0 {
        lo = hi;
        f_lo = h_hi - 1.0;
        hi *= 2.0;
        (v_hi, h_hi) = at(hi)?;
        grow += 1;
        if grow > 2000 {
            return Err(CbNormError::Precondition("trace constraint cannot be met".into()));
        }
    }
    let mut f_hi = h_hi - 1.0;
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi || f_hi >= -1e-15 {
            break;
        }
        // Illinois variant of false position, with a bisection safeguard.
        let mut mid = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if !(mid > lo && mid < hi) || (mid - lo).min(hi - mid) < 1e-3 * (hi - lo) {
            mid = 0.5 * (lo + hi);
        }
        let (v, h) = at(mid)?;
        let f = h - 1.0;
        if f > 0.0 {
            lo = mid;
            f_lo = f;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = mid;
            f_hi = f;
            v_hi = v;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Ok((v_hi, hi))
}

/// Upper bound `min_λ≥0 λ + tr((M - λG)_+)` on the program value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualBound {
    pub value: f64,
    pub lambda: f64,
}

fn dual_at(m: &ComplexMatrix, g: &ComplexMatrix, lambda: f64) -> Result<f64> {
    let e = eigh(&m.sub(&g.scale_real(lambda)))?;
    Ok(lambda + e.values.iter().map(|x| x.max(0.0)).sum::<f64>())
}

/// Every `λ ≥ 0` gives a valid bound; golden-section search picks a good one.
pub fn dual_bound(m: &ComplexMatrix, g: &ComplexMatrix) -> Result<DualBound> {
    let tr = m.trace().re.max(0.0);
    if tr == 0.0 {
        return Ok(DualBound { value: 0.0, lambda: 0.0 });
    }
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, tr);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (dual_at(m, g, c)?, dual_at(m, g, d)?);
    for _ in 0..120 {
        if b - a <= 1e-15 * tr {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = dual_at(m, g, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = dual_at(m, g, d)?;
        }
    }
    let mut best = DualBound { value: dual_at(m, g, 0.0)?, lambda: 0.0 };
    for (lambda, value) in [(c, fc), (d, fd)] {
        if value < best.value {
            best = DualBound { value, lambda };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientOptions {
    /// Number of starting points: zero, the projection of `M`, then random.
    pub starts: usize,
    pub max_iter: usize,
    pub seed: u64,
    /// Stop once the duality gap is below `gap_tol · max(1, dual)`.
    pub gap_tol: f64,
}

impl Default for GradientOptions {
    fn default() -> Self {
        GradientOptions { starts: 4, max_iter: 400, seed: 0, gap_tol: 1e-13 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientOutcome {
    /// `tr(Mv)` at the best feasible `v` found.
    pub value: f64,
    pub v: ComplexMatrix,
    pub dual: DualBound,
    pub iterations: usize,
    /// Index of the start that produced `v`.
    pub start: usize,
}

fn check_square(m: &ComplexMatrix, g: &ComplexMatrix) -> Result<usize> {
    let n = m.rows();
    if n == 0 || m.shape() != (n, n) || g.shape() != (n, n) {
        return Err(CbNormError::InvalidInput("trace program needs square matrices of one size".into()));
    }
    Ok(n)
}

/// Projected gradient ascent `v <- P(v + ηM/‖M‖)` with a growing step,
/// run from several starts in parallel and merged by maximum.
pub fn projected_gradient(m: &ComplexMatrix, g: &ComplexMatrix, opts: &GradientOptions) -> Result<GradientOutcome> {
    let n = check_square(m, g)?;
    let m = hermitian_part(m);
    let g = hermitian_part(g);
    let dual = dual_bound(&m, &g)?;
    let scale = m.max_abs();
    if scale == 0.0 {
        return Ok(GradientOutcome { value: 0.0, v: ComplexMatrix::zeros(n, n), dual, iterations: 0, start: 0 });
    }
    let mhat = m.scale_real(1.0 / scale);
    let target = dual.value - opts.gap_tol * dual.value.max(1.0);

    let run = |k: usize| -> Result<(f64, ComplexMatrix, usize)> {
        let start = match k {
            0 => ComplexMatrix::zeros(n, n),
            1 => mhat.clone(),
            _ => {
                let mut r = SeededRng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64));
                let x = gaussian_matrix(&mut r, n, n);
                x.matmul(&x.adjoint()).scale_real(1.0 / n as f64)
            }
        };
        let (mut v, mut mu) = project(&start, &g, 0.0)?;
        let mut best = (trace_product(&m, &v), v.clone());
        let mut eta = 1.0;
        let mut ratio = 1.0;
        let mut it = 0;
        while it < opts.max_iter && best.0 < target {
            let (next, next_mu) = project(&v.add(&mhat.scale_real(eta)), &g, mu * ratio)?;
            v = next;
            mu = next_mu;
            let val = trace_product(&m, &v);
            if val > best.0 {
                best = (val, v.clone());
            }
            let grown = (eta * 2.0).min(1e6);
            ratio = grown / eta;
            eta = grown;
            it += 1;
        }
        Ok((best.0, best.1, it))
    };

    let outcomes: Vec<Result<(f64, ComplexMatrix, usize)>> = (0..opts.starts.max(1)).into_par_iter().map(run).collect();
    let mut best: Option<GradientOutcome> = None;
    for (k, o) in outcomes.into_iter().enumerate() {
        let (value, v, iterations) = o?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(GradientOutcome { value, v, dual, iterations, start: k });
        }
    }
    Ok(best.expect("at least one start"))
}

/// Checks `0 ⪯ v ⪯ I` and `tr(Gv) ≤ 1` up to `tol`.
pub fn is_feasible(v: &ComplexMatrix, g: &ComplexMatrix, tol: f64) -> Result<bool> {
    if v.hermitian_defect() > tol {
        return Ok(false);
    }
    let e = eigh(&hermitian_part(v))?;
    let in_box = e.values.iter().all(|&x| x >= -tol && x <= 1.0 + tol);
    Ok(in_box && trace_product(g, v) <= 1.0 + tol)
}
