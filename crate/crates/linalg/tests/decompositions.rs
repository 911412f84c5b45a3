use approx::assert_relative_eq;
use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use rowcol_linalg::random::{gaussian_matrix, rng, unitary};
use rowcol_linalg::{c64, eigh, matrix_norms, orthonormalize, projector, svd, ComplexMatrix};

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

#[test]
fn identity_spectrum() {
    let s = svd(&ComplexMatrix::identity(2)).unwrap();
    assert_eq!(s.spectrum.values(), &[1.0, 1.0]);
}

#[test]
fn diagonal_spectrum_is_sorted() {
    let s = svd(&ComplexMatrix::diag_real(&[1.0, 3.0, 2.0])).unwrap();
    assert_eq!(s.spectrum.values(), &[3.0, 2.0, 1.0]);
}

#[test]
fn random_spectrum_matches_eigenvalues_of_gram() {
    let m = gaussian_matrix(&mut rng(11), 4, 3);
    let s = svd(&m).unwrap();
    let gram = to_nalgebra(&m).adjoint() * to_nalgebra(&m);
    let mut eig: Vec<f64> = nalgebra::SymmetricEigen::new(gram).eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    for (a, b) in s.spectrum.values().iter().zip(&eig) {
        assert_relative_eq!(*a, *b, epsilon = 1e-9);
    }
}

#[test]
fn diagonal_norms() {
    let n = matrix_norms(&ComplexMatrix::diag_real(&[1.0, 0.5])).unwrap();
    assert_eq!(n.op_norm, 1.0);
    assert_relative_eq!(n.hs_norm, 1.25f64.sqrt(), epsilon = 1e-15);
}

#[test]
fn zero_matrix_norms() {
    let n = matrix_norms(&ComplexMatrix::zeros(3, 2)).unwrap();
    assert_eq!((n.op_norm, n.hs_norm), (0.0, 0.0));
}

#[test]
fn hs_norm_equals_entrywise_norm() {
    let m = gaussian_matrix(&mut rng(5), 5, 5);
    let direct: f64 = m.entries().iter().map(|z| z.re * z.re + z.im * z.im).sum::<f64>().sqrt();
    assert_relative_eq!(matrix_norms(&m).unwrap().hs_norm, direct, max_relative = 1e-12);
}

#[test]
fn orthonormal_frame_is_unchanged() {
    let u = unitary(&mut rng(3), 4).columns(0..3);
    let q = orthonormalize(&u).unwrap();
    assert!(q.sub(&u).max_abs() < 1e-12);
}

#[test]
fn random_frame_keeps_span() {
    let f = gaussian_matrix(&mut rng(9), 6, 3);
    let q = orthonormalize(&f).unwrap();
    assert!(q.adjoint_mul(&q).sub(&ComplexMatrix::identity(3)).max_abs() < 1e-10);
    // Projector onto span(f) computed independently as f (f*f)^{-1} f*.
    let ff = f.adjoint_mul(&f).inverse().unwrap();
    let p_direct = f.matmul(&ff).matmul(&f.adjoint());
    assert!(projector(&q).sub(&p_direct).max_abs() < 1e-10);
}

#[test]
fn eigh_matches_nalgebra() {
    let g = gaussian_matrix(&mut rng(21), 5, 5);
    let h = g.add(&g.adjoint());
    let ours = eigh(&h).unwrap();
    let mut theirs: Vec<f64> = nalgebra::SymmetricEigen::new(to_nalgebra(&h)).eigenvalues.iter().copied().collect();
    theirs.sort_by(|a, b| b.total_cmp(a));
    for (a, b) in ours.values.iter().zip(&theirs) {
        assert_relative_eq!(*a, *b, epsilon = 1e-11);
    }
    assert!(ours.reconstruct().sub(&h).max_abs() < 1e-11);
}

#[test]
fn purely_imaginary_entries() {
    let m = ComplexMatrix::new(2, 2, vec![c64(0.0, 2.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -1.0)]).unwrap();
    assert_eq!(svd(&m).unwrap().spectrum.values(), &[2.0, 1.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7) {
        let m = gaussian_matrix(&mut rng(seed), rows, cols);
        let s = svd(&m).unwrap();
        let scale = s.spectrum.largest();
        prop_assert!(s.reconstruct().sub(&m).op_norm() <= 1e-10 * scale.max(1e-300));
        let k = rows.min(cols);
        prop_assert!(s.left.adjoint_mul(&s.left).sub(&ComplexMatrix::identity(k)).max_abs() < 1e-10);
        prop_assert!(s.right.adjoint_mul(&s.right).sub(&ComplexMatrix::identity(k)).max_abs() < 1e-10);
    }

    #[test]
    fn norms_are_unitarily_invariant(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let m = gaussian_matrix(&mut r, n, n);
        let w1 = unitary(&mut r, n);
        let w2 = unitary(&mut r, n);
        let a = matrix_norms(&m).unwrap();
        let b = matrix_norms(&w1.matmul(&m).matmul(&w2)).unwrap();
        prop_assert!((a.op_norm - b.op_norm).abs() <= 1e-10 * a.op_norm.max(1.0));
        prop_assert!((a.hs_norm - b.hs_norm).abs() <= 1e-10 * a.hs_norm.max(1.0));
        prop_assert!(a.op_norm <= a.hs_norm + 1e-15);
    }

    #[test]
    fn adjoint_has_same_operator_norm(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let m = gaussian_matrix(&mut rng(seed), rows, cols);
        let a = m.op_norm();
        let b = m.adjoint().op_norm();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn rank_deficient_matrices_still_reconstruct(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let u = gaussian_matrix(&mut r, n, 1);
        let v = gaussian_matrix(&mut r, 1, n);
        let m = u.matmul(&v);
        let s = svd(&m).unwrap();
        prop_assert!(s.reconstruct().sub(&m).max_abs() <= 1e-10 * s.spectrum.largest());
        prop_assert!(s.spectrum.get(2) <= 1e-12 * s.spectrum.largest());
        prop_assert!(s.left.adjoint_mul(&s.left).sub(&ComplexMatrix::identity(n)).max_abs() < 1e-10);
    }
}
