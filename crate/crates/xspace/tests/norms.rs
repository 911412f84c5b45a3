use proptest::prelude::*;
use rand::Rng;
use rowcol_linalg::random::rng;
use rowcol_linalg::{c64, Complex64, ComplexMatrix};
use rowcol_xspace::{
    concrete_rep_norm, scale_check, split_bounds, xd_norm, Coefficient, MatElement, SpacePartition, WeightSequence,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn random_weights<R: Rng>(g: &mut R, m: usize) -> WeightSequence {
    WeightSequence::finite((0..m).map(|_| g.random::<f64>()).collect()).unwrap()
}

#[test]
fn scalar_coefficient_below_one() {
    let alpha = WeightSequence::finite(vec![0.5]).unwrap();
    let x = MatElement::from_e(1, vec![(1, ComplexMatrix::identity(1))]).unwrap();
    assert_eq!(xd_norm(&alpha, &x).unwrap(), 1.0);
    assert_eq!(concrete_rep_norm(&alpha, &x).unwrap(), 1.0);
}

#[test]
fn column_of_matrix_units_matches_closed_form() {
    for k in 1..=8usize {
        for &w in &[0.0, 0.1, 0.5, 2f64.powf(-1.5), 1.0] {
            let alpha = WeightSequence::finite(vec![w; k]).unwrap();
            let x = MatElement::column_pattern(k, 1);
            let expect = (1f64).max(k as f64 * w * w).sqrt();
            assert!(close(xd_norm(&alpha, &x).unwrap(), expect, 1e-12), "k={k} w={w}");
            assert!(close(concrete_rep_norm(&alpha, &x).unwrap(), expect, 1e-12), "k={k} w={w}");
        }
    }
}

#[test]
fn two_units_with_unequal_weights() {
    let alpha = WeightSequence::finite(vec![1.0, 0.5]).unwrap();
    let x = MatElement::from_e(2, vec![(1, ComplexMatrix::unit(2, 2, 0, 0)), (2, ComplexMatrix::unit(2, 2, 1, 0))]).unwrap();
    let oracle = concrete_rep_norm(&alpha, &x).unwrap();
    assert!(close(oracle, 1.25f64.sqrt(), 1e-12));
    assert!(close(xd_norm(&alpha, &x).unwrap(), oracle, 1e-8));
}

#[test]
fn zero_element_and_pure_row_vector() {
    let alpha = WeightSequence::finite(vec![1.0]).unwrap();
    assert_eq!(xd_norm(&alpha, &MatElement::zero(3)).unwrap(), 0.0);
    assert_eq!(concrete_rep_norm(&alpha, &MatElement::zero(3)).unwrap(), 0.0);
    let b = MatElement::new(1, vec![], vec![Coefficient { index: 1, matrix: ComplexMatrix::identity(1) }]).unwrap();
    assert_eq!(xd_norm(&alpha, &b).unwrap(), 1.0);
    assert_eq!(concrete_rep_norm(&alpha, &b).unwrap(), 1.0);
}

#[test]
fn index_beyond_truncation_is_a_range_error() {
    let alpha = WeightSequence::truncated(vec![1.0, 0.5]).unwrap();
    let x = MatElement::from_e(1, vec![(3, ComplexMatrix::identity(1))]).unwrap();
    assert!(xd_norm(&alpha, &x).is_err());
    assert!(concrete_rep_norm(&alpha, &x).is_err());
}

#[test]
fn formula_agrees_with_concrete_operators_on_random_instances() {
    let mut g = rng(20);
    for _ in 0..200 {
        let n = g.random_range(1..=4);
        let m = g.random_range(1..=5);
        let alpha = random_weights(&mut g, m);
        let e: Vec<u64> = (1..=m as u64).filter(|_| g.random_bool(0.7)).collect();
        let f: Vec<u64> = (1..=m as u64).filter(|_| g.random_bool(0.4)).collect();
        let x = MatElement::random(&mut g, n, &e, &f).unwrap();
        let a = xd_norm(&alpha, &x).unwrap();
        let b = concrete_rep_norm(&alpha, &x).unwrap();
        assert!(close(a, b, 1e-8), "{a} vs {b}");
    }
}

#[test]
fn trivial_partition_is_tight() {
    let mut g = rng(3);
    let alpha = random_weights(&mut g, 4);
    let x = MatElement::random(&mut g, 3, &[1, 2, 3, 4], &[2]).unwrap();
    let part = SpacePartition::contiguous(&[4]).unwrap();
    let s = split_bounds(&alpha, &x, &part).unwrap();
    assert_eq!(s.lower, s.whole);
    assert_eq!(s.upper, s.whole);
}

#[test]
fn support_on_one_block_gives_equality() {
    let mut g = rng(4);
    let alpha = random_weights(&mut g, 6);
    let x = MatElement::random(&mut g, 2, &[3, 4], &[3]).unwrap();
    let part = SpacePartition::contiguous(&[2, 2, 2]).unwrap();
    let s = split_bounds(&alpha, &x, &part).unwrap();
    assert!(close(s.lower, s.whole, 1e-14));
}

#[test]
fn two_block_sandwich_with_slack() {
    let mut g = rng(5);
    let mut strict = 0;
    for _ in 0..50 {
        let alpha = random_weights(&mut g, 4);
        let x = MatElement::random(&mut g, 2, &[1, 2, 3, 4], &[1, 4]).unwrap();
        let part = SpacePartition::new(vec![vec![1, 3], vec![2, 4]]).unwrap();
        let s = split_bounds(&alpha, &x, &part).unwrap();
        assert!(s.lower <= s.whole * (1.0 + 1e-10));
        assert!(s.whole <= s.upper * (1.0 + 1e-10));
        if s.lower < s.whole && s.whole < s.upper {
            strict += 1;
        }
    }
    assert!(strict > 0);
}

#[test]
fn uncovered_index_is_reported() {
    let alpha = WeightSequence::finite(vec![1.0; 3]).unwrap();
    let x = MatElement::from_e(1, vec![(3, ComplexMatrix::identity(1))]).unwrap();
    let part = SpacePartition::contiguous(&[1, 1]).unwrap();
    assert!(split_bounds(&alpha, &x, &part).is_err());
}

#[test]
fn scaling_by_one_is_identity() {
    let alpha = WeightSequence::finite(vec![0.9, 0.4, 0.1]).unwrap();
    let s = scale_check(&alpha, 1.0, 3, 30, 1).unwrap();
    assert!(close(s.max_ratio, 1.0, 1e-12));
    assert!(close(s.min_ratio, 1.0, 1e-12));
}

#[test]
fn scaling_leaves_row_part_alone() {
    let alpha = WeightSequence::finite(vec![1.0]).unwrap();
    let half = alpha.scaled(0.5, 1).unwrap();
    let x = MatElement::new(2, vec![], vec![Coefficient { index: 1, matrix: ComplexMatrix::identity(2) }]).unwrap();
    assert_eq!(xd_norm(&alpha, &x).unwrap() / xd_norm(&half, &x).unwrap(), 1.0);
}

#[test]
fn column_pattern_ratio_tends_to_inverse_scale() {
    // ‖x‖² = max{1, k} against max{1, k/4}.
    let mut last = 0.0;
    for k in [1usize, 2, 4, 8, 16, 32] {
        let alpha = WeightSequence::finite(vec![1.0; k]).unwrap();
        let half = alpha.scaled(0.5, k as u64).unwrap();
        let x = MatElement::column_pattern(k, 1);
        let r = xd_norm(&alpha, &x).unwrap() / xd_norm(&half, &x).unwrap();
        let expect = (k as f64).sqrt() / (1f64).max(k as f64 / 4.0).sqrt();
        assert!(close(r, expect, 1e-12));
        assert!(r <= 2.0 + 1e-12 && r >= last);
        last = r;
    }
    assert!(close(last, 2.0, 1e-12));
}

#[test]
fn random_scaling_ratios_stay_in_range() {
    let mut g = rng(6);
    for &lambda in &[0.9, 0.5, 0.1] {
        let alpha = random_weights(&mut g, 5);
        let s = scale_check(&alpha, lambda, 5, 100, 11).unwrap();
        assert!(s.min_ratio >= 1.0 - 1e-12);
        assert!(s.max_ratio <= 1.0 / lambda + 1e-12);
    }
    assert!(scale_check(&WeightSequence::finite(vec![1.0]).unwrap(), 0.0, 1, 1, 0).is_err());
}

fn phases(g: &mut impl Rng, m: usize) -> Vec<Complex64> {
    (0..m).map(|_| Complex64::from_polar(1.0, g.random::<f64>() * std::f64::consts::TAU)).collect()
}

#[test]
fn direct_sum_norm_is_the_max() {
    let mut g = rng(7);
    for _ in 0..50 {
        let alpha = random_weights(&mut g, 5);
        let (nx, ny) = (g.random_range(1..=3), g.random_range(1..=3));
        let x = MatElement::random(&mut g, nx, &[1, 2, 5], &[1]).unwrap();
        let y = MatElement::random(&mut g, ny, &[2, 3, 4], &[2, 3]).unwrap();
        let s = xd_norm(&alpha, &x.direct_sum(&y)).unwrap();
        let expect = xd_norm(&alpha, &x).unwrap().max(xd_norm(&alpha, &y).unwrap());
        assert!(close(s, expect, 1e-10));
    }
}

#[test]
fn unimodular_scaling_of_coefficients_is_invisible() {
    let mut g = rng(8);
    for _ in 0..50 {
        let alpha = random_weights(&mut g, 5);
        let x = MatElement::random(&mut g, 3, &[1, 2, 3, 4, 5], &[2]).unwrap();
        let ph = phases(&mut g, 5);
        let y = x.scale_e(|i| ph[(i - 1) as usize]);
        assert!(close(xd_norm(&alpha, &x).unwrap(), xd_norm(&alpha, &y).unwrap(), 1e-10));
        let signs = x.scale_e(|i| if i % 2 == 0 { c64(-1.0, 0.0) } else { c64(1.0, 0.0) });
        assert!(close(xd_norm(&alpha, &x).unwrap(), xd_norm(&alpha, &signs).unwrap(), 1e-10));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn larger_weights_give_larger_norms(seed in 0u64..1000, bumps in proptest::collection::vec(0.0f64..1.0, 4)) {
        let mut g = rng(seed);
        let base: Vec<f64> = (0..4).map(|_| g.random::<f64>()).collect();
        let bigger: Vec<f64> = base.iter().zip(&bumps).map(|(a, b)| a + (1.0 - a) * b).collect();
        let x = MatElement::random(&mut g, 2, &[1, 2, 3, 4], &[]).unwrap();
        let lo = xd_norm(&WeightSequence::finite(base).unwrap(), &x).unwrap();
        let hi = xd_norm(&WeightSequence::finite(bigger).unwrap(), &x).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn element_json_round_trip(seed in 0u64..1000) {
        let mut g = rng(seed);
        let x = MatElement::random(&mut g, 2, &[1, 4], &[3]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        let back: MatElement = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(x, back);
    }
}
