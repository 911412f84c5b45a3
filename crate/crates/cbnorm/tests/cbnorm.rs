use num_rational::BigRational;
use rand::Rng;
use rowcol_cbnorm::sdp::{dual_bound, is_feasible, projected_gradient, trace_product, GradientOptions};
use rowcol_cbnorm::{
    amplified_from_map, amplified_lower_bound, cb_norm_diag_identity, cb_norm_general, cb_norm_general_with,
    same_basis_check, GeneralOptions, Method, Witness,
};
use rowcol_linalg::random::{gaussian_matrix, rng};
use rowcol_linalg::{c64, matrix_norms, ComplexMatrix};
use rowcol_xspace::WeightSequence;

fn seq(w: &[f64]) -> WeightSequence {
    WeightSequence::finite(w.to_vec()).unwrap()
}

/// Maximum of `Σ b_i s_i` over `Σ a_i s_i ≤ 1`, `s ∈ [0,1]^d`: every vertex of
/// this polytope has at most one fractional coordinate, so scan each subset of
/// saturated coordinates plus one coordinate on a grid of step `1e-3`.
fn grid_oracle(a: &[f64], b: &[f64]) -> f64 {
    let d = a.len();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << d) {
        let used: f64 = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).sum();
        if used > 1.0 {
            continue;
        }
        let gain: f64 = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| b[i]).sum();
        best = best.max(gain);
        for j in (0..d).filter(|j| mask >> j & 1 == 0) {
            for step in 0..=1000 {
                let t = step as f64 * 1e-3;
                if used + t * a[j] <= 1.0 {
                    best = best.max(gain + t * b[j]);
                }
            }
        }
    }
    best
}

#[test]
fn identity_between_equal_weights_is_isometric() {
    let a = seq(&[0.9, 0.5, 0.2, 0.0]);
    let r = cb_norm_diag_identity(&a, &a, 4).unwrap();
    assert_eq!(r.value, 1.0);
    assert!(r.certified);
    assert_eq!(r.method, Method::ExactGreedy);
}

#[test]
fn row_space_into_weighted_space_costs_the_hilbert_schmidt_norm() {
    for k in 1..=9 {
        let ones = seq(&vec![1.0; k]);
        let zeros = seq(&vec![0.0; k]);
        let r = cb_norm_diag_identity(&zeros, &ones, k as u64).unwrap();
        assert!((r.value - (k as f64).sqrt()).abs() < 1e-12);
        assert_eq!(cb_norm_diag_identity(&ones, &zeros, k as u64).unwrap().value, 1.0);
    }
    let mut g = rng(31);
    for _ in 0..50 {
        let d = g.random_range(1..=12);
        let w: Vec<f64> = (0..d).map(|_| g.random::<f64>()).collect();
        let hs = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let r = cb_norm_diag_identity(&seq(&vec![0.0; d]), &seq(&w), d as u64).unwrap();
        assert!((r.value - hs.max(1.0)).abs() < 1e-10);
        assert_eq!(r.witness, Witness::Diagonal(vec![1.0; d]));
    }
}

#[test]
fn two_coordinate_example_matches_grid() {
    let a = [1.0, 0.5];
    let b = [0.5, 0.5];
    let fwd = cb_norm_diag_identity(&seq(&a), &seq(&b), 2).unwrap();
    assert!((fwd.sup_squared - 7.0 / 16.0).abs() < 1e-15);
    assert_eq!(fwd.value, 1.0);
    let rev = cb_norm_diag_identity(&seq(&b), &seq(&a), 2).unwrap();
    assert!((rev.value - 1.25f64.sqrt()).abs() < 1e-15);
    let sq = |v: &[f64]| v.iter().map(|x| x * x).collect::<Vec<_>>();
    assert!((grid_oracle(&sq(&a), &sq(&b)) - 7.0 / 16.0).abs() < 2e-3);
    assert!((grid_oracle(&sq(&b), &sq(&a)) - 1.25).abs() < 2e-3);
}

#[test]
fn empty_truncation_is_invalid() {
    assert!(cb_norm_diag_identity(&seq(&[1.0]), &seq(&[1.0]), 0).is_err());
}

#[test]
fn greedy_grid_and_gradient_agree_on_diagonal_instances() {
    let mut g = rng(32);
    for _ in 0..25 {
        let d = g.random_range(1..=6);
        let a: Vec<f64> = (0..d).map(|_| g.random::<f64>()).collect();
        let b: Vec<f64> = (0..d).map(|_| g.random::<f64>()).collect();
        let greedy = cb_norm_diag_identity(&seq(&a), &seq(&b), d as u64).unwrap();
        let sq = |v: &[f64]| v.iter().map(|x| x * x).collect::<Vec<_>>();
        let grid = grid_oracle(&sq(&a), &sq(&b)).max(1.0).sqrt();
        assert!((greedy.value - grid).abs() <= 2e-3);
        let opts = GeneralOptions { force_optimizer: true, ..Default::default() };
        let ga = ComplexMatrix::diag_real(&a);
        let gb = ComplexMatrix::diag_real(&b);
        let opt = cb_norm_general_with(&ga, &gb, &ComplexMatrix::identity(d), &opts).unwrap();
        assert_eq!(opt.method, Method::Optimizer);
        assert!((opt.value - greedy.value).abs() <= 1e-6, "{} vs {}", opt.value, greedy.value);
        // Dense starting points do not find anything above the diagonal witness.
        assert!((opt.sup_squared - greedy.sup_squared).abs() <= 1e-9);
    }
}

#[test]
fn zero_map_and_row_spaces() {
    let mut g = rng(33);
    let a = ComplexMatrix::diag_real(&[0.7, 0.3, 0.1]);
    let r = cb_norm_general(&a, &a, &ComplexMatrix::zeros(3, 3)).unwrap();
    assert_eq!(r.value, 0.0);
    for _ in 0..10 {
        let t = gaussian_matrix(&mut g, 3, 4);
        let r = cb_norm_general(&ComplexMatrix::zeros(4, 4), &ComplexMatrix::zeros(3, 3), &t).unwrap();
        let op = matrix_norms(&t).unwrap().op_norm;
        assert!((r.value - op).abs() < 1e-12);
    }
}

#[test]
fn diagonal_triples_match_the_greedy_through_both_paths() {
    let mut g = rng(34);
    for _ in 0..20 {
        let d = g.random_range(1..=6);
        let a: Vec<f64> = (0..d).map(|_| g.random::<f64>()).collect();
        let b: Vec<f64> = (0..d).map(|_| g.random::<f64>()).collect();
        let greedy = cb_norm_diag_identity(&seq(&a), &seq(&b), d as u64).unwrap();
        let exact = cb_norm_general(&ComplexMatrix::diag_real(&a), &ComplexMatrix::diag_real(&b), &ComplexMatrix::identity(d))
            .unwrap();
        assert_eq!(exact.method, Method::ExactGreedy);
        assert!((exact.value - greedy.value).abs() <= 1e-6);
    }
}

fn contraction(g: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let m = gaussian_matrix(g, rows, cols);
    let s = m.op_norm();
    m.scale_real(g.random_range(0.3..1.0) / s)
}

#[test]
fn optimizer_is_feasible_and_bracketed_on_dense_maps() {
    let mut g = rng(35);
    for _ in 0..15 {
        let n = g.random_range(2..=4);
        let a = contraction(&mut g, n, n);
        let b = contraction(&mut g, n, n);
        let t = gaussian_matrix(&mut g, n, n);
        let r = cb_norm_general(&a, &b, &t).unwrap();
        assert_eq!(r.method, Method::Optimizer);
        assert!(!r.certified);
        assert!(r.op_norm <= r.value);
        let upper = r.upper_bound.unwrap();
        assert!(r.value <= upper + 1e-12);
        assert!(upper - r.value <= 1e-6 * upper, "gap {} at {}", upper - r.value, upper);

        let u = r.witness.to_matrix();
        assert!(u.op_norm() <= 1.0 + 1e-8);
        assert!(a.matmul(&u).frobenius_norm() <= 1.0 + 1e-8);
        let btu = b.matmul(&t).matmul(&u).frobenius_norm();
        assert!((btu * btu - r.sup_squared).abs() <= 1e-8 * r.sup_squared.max(1.0));

        // Random feasible u never beat the optimizer.
        for _ in 0..200 {
            let mut w = gaussian_matrix(&mut g, n, n);
            let s = w.op_norm().max(a.matmul(&w).frobenius_norm());
            w = w.scale_real(1.0 / s);
            let val = b.matmul(&t).matmul(&w).frobenius_norm().powi(2);
            assert!(val <= r.sup_squared + 1e-9);
        }
    }
}

#[test]
fn projected_gradient_output_is_feasible() {
    let mut g = rng(36);
    let x = gaussian_matrix(&mut g, 3, 3);
    let m = x.adjoint_mul(&x);
    let a = contraction(&mut g, 3, 3);
    let gm = a.adjoint_mul(&a);
    let out = projected_gradient(&m, &gm, &GradientOptions::default()).unwrap();
    assert!(is_feasible(&out.v, &gm, 1e-10).unwrap());
    assert!((trace_product(&m, &out.v) - out.value).abs() < 1e-12);
    let dual = dual_bound(&m, &gm).unwrap();
    assert!(out.value <= dual.value + 1e-12);
}

#[test]
fn cb_norm_dominates_operator_norm() {
    let mut g = rng(37);
    for _ in 0..20 {
        let a = contraction(&mut g, 3, 3);
        let b = contraction(&mut g, 2, 2);
        let t = gaussian_matrix(&mut g, 2, 3);
        let r = cb_norm_general(&a, &b, &t).unwrap();
        assert!(t.op_norm() <= r.value + 1e-12);
    }
}

#[test]
fn composition_of_identities_is_submultiplicative() {
    let mut g = rng(38);
    for _ in 0..100 {
        let d = g.random_range(1..=8) as u64;
        let mk = |g: &mut rand_chacha::ChaCha8Rng| seq(&(0..d).map(|_| g.random::<f64>()).collect::<Vec<_>>());
        let (a, b, c) = (mk(&mut g), mk(&mut g), mk(&mut g));
        let ac = cb_norm_diag_identity(&a, &c, d).unwrap().value;
        let ab = cb_norm_diag_identity(&a, &b, d).unwrap().value;
        let bc = cb_norm_diag_identity(&b, &c, d).unwrap().value;
        assert!(ac <= ab * bc + 1e-8);
    }
}

#[test]
fn deeper_truncations_never_lower_the_value() {
    let a = WeightSequence::not_subbasis(rowcol_xspace::PairVariant::Beta);
    let b = WeightSequence::not_subbasis(rowcol_xspace::PairVariant::Alpha);
    let mut last = 0.0;
    for depth in [1u64, 3, 4, 10, 100, 255, 256, 1000, 5000] {
        let v = cb_norm_diag_identity(&a, &b, depth).unwrap().value;
        assert!(v >= last);
        last = v;
    }
    assert!(last > 1.0);
}

#[test]
fn greedy_witness_satisfies_constraints() {
    let a = [0.9, 0.8, 0.3, 0.0, 0.5];
    let b = [0.1, 0.9, 0.9, 0.4, 0.2];
    let r = cb_norm_diag_identity(&seq(&a), &seq(&b), 5).unwrap();
    let Witness::Diagonal(d) = &r.witness else { panic!("diagonal witness expected") };
    let budget: f64 = d.iter().zip(&a).map(|(u, w)| (u * w).powi(2)).sum();
    assert!(budget <= 1.0 + 1e-8);
    assert!(d.iter().all(|&u| (0.0..=1.0 + 1e-12).contains(&u)));
    let gain: f64 = d.iter().zip(&b).map(|(u, w)| (u * w).powi(2)).sum();
    assert!((gain - r.sup_squared).abs() < 1e-12);
}

#[test]
fn amplification_closed_forms() {
    // |I| = 4^{n²+2n} at n = 2, squared weights 2^{-n²-n} and 2^{-n²}.
    let r = amplified_lower_bound(1 << 16, 2f64.powi(-6), 2f64.powi(-4)).unwrap();
    assert_eq!(r.ratio_sq, BigRational::from_integer(4.into()));
    assert_eq!(r.bound, 2.0);
    let r = amplified_lower_bound(100, 1.0 / 200.0, 1.0 / 50.0).unwrap();
    assert!((r.bound - 2f64.sqrt()).abs() < 1e-12);
    let r = amplified_lower_bound(1, 0.3, 0.3).unwrap();
    assert_eq!(r.bound, 1.0);
    let big = amplified_lower_bound(1 << 50, 2f64.powi(-30), 2f64.powi(-20)).unwrap();
    assert_eq!(big.ratio_sq, BigRational::from_integer((1u64 << 10).into()));
}

#[test]
fn explicit_injection_matches_closed_form() {
    let src = seq(&vec![0.125; 64]);
    let dst = seq(&vec![0.25; 128]);
    let map: Vec<(u64, u64)> = (1..=64).map(|i| (i, 2 * i)).collect();
    let r = amplified_from_map(&src, &dst, &map).unwrap();
    let c = amplified_lower_bound(64, 0.125 * 0.125, 0.25 * 0.25).unwrap();
    assert_eq!(r.ratio_sq, c.ratio_sq);
    assert_eq!(r.bound, 2.0);
    assert!(amplified_from_map(&src, &dst, &[(1, 2), (3, 2)]).is_err());
}

#[test]
fn same_basis_identity_and_signed_permutation() {
    let a = seq(&[0.9, 0.5, 0.5, 0.5, 0.1]);
    let r = same_basis_check(&a, &a, &ComplexMatrix::identity(5), 5).unwrap();
    assert!((r.c - 1.0).abs() < 1e-12);
    assert!((r.id_product - 1.0).abs() < 1e-12);
    assert!(r.bound_holds);

    let b = seq(&[0.9, 0.2, 0.7, 0.3, 0.1]);
    let base = same_basis_check(&a, &b, &ComplexMatrix::identity(5), 5).unwrap();
    let mut p = ComplexMatrix::zeros(5, 5);
    p[(0, 0)] = c64(1.0, 0.0);
    p[(2, 1)] = c64(-1.0, 0.0);
    p[(3, 2)] = c64(1.0, 0.0);
    p[(1, 3)] = c64(-1.0, 0.0);
    p[(4, 4)] = c64(1.0, 0.0);
    let r = same_basis_check(&a, &b, &p, 5).unwrap();
    assert_eq!(r.id_product, base.id_product);
    assert!(r.bound_holds);
}

#[test]
fn singular_map_is_rejected() {
    let a = seq(&[0.5, 0.5]);
    assert!(same_basis_check(&a, &a, &ComplexMatrix::zeros(2, 2), 2).is_err());
}

#[test]
fn random_diagonal_isomorphisms_respect_the_bound() {
    let mut g = rng(39);
    for _ in 0..30 {
        let alpha: Vec<f64> = (0..6).map(|_| g.random::<f64>()).collect();
        let beta: Vec<f64> = (0..6).map(|_| g.random::<f64>()).collect();
        let d: Vec<_> = (0..6).map(|_| c64(g.random_range(0.5..2.0) * if g.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0)).collect();
        let r = same_basis_check(&seq(&alpha), &seq(&beta), &ComplexMatrix::diag(&d), 6).unwrap();
        assert!(r.bound_holds && r.factor_bounds_hold);
    }
}

#[test]
fn dense_isomorphisms_respect_the_bound() {
    let mut g = rng(40);
    for _ in 0..10 {
        let alpha: Vec<f64> = (0..4).map(|_| g.random::<f64>()).collect();
        let beta: Vec<f64> = (0..4).map(|_| g.random::<f64>()).collect();
        let u = gaussian_matrix(&mut g, 4, 4);
        let r = same_basis_check(&seq(&alpha), &seq(&beta), &u, 4).unwrap();
        assert!(r.bound_holds && r.factor_bounds_hold);
    }
}
