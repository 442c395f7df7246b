mod common;

use common::oracle;
use mpsprep::approx::{mask_region, poly_mps, Grid};
use mpsprep::circuit::{extract_circuit, validate_circuit};
use mpsprep::linalg::{null_space_completion, singular_values, Matrix};
use mpsprep::mps::{add, overlap, tt_round, Form};
use mpsprep::sim::{fidelity, run, StateVector};
use mpsprep::{Mps, TruncationPolicy};
use proptest::prelude::*;

fn matrix_strategy(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-1.0f64..1.0, r * c).prop_map(move |d| Matrix::from_row_major(r, c, d).unwrap())
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn singular_values_match_jacobi(m in matrix_strategy(12)) {
        let ours = singular_values(&m).unwrap();
        let theirs = oracle::jacobi_singular_values(&m.to_rows());
        prop_assert_eq!(ours.len(), theirs.len());
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn addition_is_linear(n in 1usize..8, seed in 0u64..1000) {
        let a = Mps::random(n, 3, seed).unwrap();
        let b = Mps::random(n, 2, seed + 7).unwrap();
        let sum = add(&a, &b).unwrap().to_statevector().unwrap();
        let expected: Vec<f64> = a.to_statevector().unwrap().iter()
            .zip(b.to_statevector().unwrap()).map(|(x, y)| x + y).collect();
        prop_assert!(close(&sum, &expected, 1e-12));
    }

    #[test]
    fn gauge_changes_preserve_amplitudes(n in 1usize..9, chi in 1usize..5, seed in 0u64..1000) {
        let m = Mps::random(n, chi, seed).unwrap();
        let v = m.to_statevector().unwrap();
        for form in [Form::Left, Form::Right, Form::Mixed(n / 2)] {
            let c = m.canonicalize(form);
            prop_assert!(close(&c.to_statevector().unwrap(), &v, 1e-10));
            prop_assert!(c.isometry_error() <= 1e-10);
        }
        let r = tt_round(&m, TruncationPolicy::default()).unwrap();
        prop_assert!(close(&r.to_statevector().unwrap(), &v, 1e-10));
    }

    #[test]
    fn overlap_matches_dense(n in 1usize..8, seed in 0u64..1000) {
        let a = Mps::random(n, 3, seed).unwrap();
        let b = Mps::random(n, 4, seed + 1).unwrap();
        let dense = oracle::dot(&a.to_statevector().unwrap(), &b.to_statevector().unwrap());
        prop_assert!((overlap(&a, &b).unwrap() - dense).abs() <= 1e-10 * dense.abs().max(1.0));
    }

    #[test]
    fn completion_yields_orthogonal_square(cols in 2usize..9, rows in 1usize..8, seed in 0u64..1000) {
        prop_assume!(rows < cols);
        let data: Vec<f64> = (0..rows * cols).map(|i| ((i as f64 + 1.0) * (seed as f64 + 0.37)).sin()).collect();
        let (q, _) = mpsprep::linalg::qr_orthonormalize(&Matrix::from_row_major(rows, cols, data).unwrap().transpose()).unwrap();
        let basis = q.transpose();
        let fill = null_space_completion(&basis).unwrap();
        let mut all = basis.to_rows();
        all.extend(fill.to_rows());
        let square = Matrix::from_rows(&all).unwrap();
        prop_assert!(square.row_orthonormality_error() <= 1e-12);
    }

    #[test]
    fn extraction_is_exact(n in 1usize..11, seed in 0u64..10_000) {
        let m = Mps::random(n, 2, seed).unwrap().normalize().unwrap();
        let c = extract_circuit(&m).unwrap();
        prop_assert!(validate_circuit(&c).is_valid());
        let out = run(&c).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-10);
        let f = oracle::dot(out.amplitudes(), &m.to_statevector().unwrap()).abs();
        prop_assert!(f >= 1.0 - 1e-8);
    }

    #[test]
    fn fidelity_symmetric_and_bounded(a in prop::collection::vec(-1.0f64..1.0, 8), b in prop::collection::vec(-1.0f64..1.0, 8)) {
        prop_assume!(a.iter().any(|x| x.abs() > 1e-3) && b.iter().any(|x| x.abs() > 1e-3));
        let a = StateVector::new(oracle::normalize(&a)).unwrap();
        let b = StateVector::new(oracle::normalize(&b)).unwrap();
        let ab = fidelity(&a, &b).unwrap();
        prop_assert_eq!(ab, fidelity(&b, &a).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn polynomial_encoding_exact(coeffs in prop::collection::vec(-3.0f64..3.0, 1..7), n in 1usize..13,
                                 a in -2.0f64..2.0, len in 0.1f64..4.0) {
        let g = Grid::new(n, a, a + len).unwrap();
        let m = poly_mps(&coeffs, &g).unwrap();
        prop_assert!(m.max_bond() <= coeffs.len());
        for (k, v) in m.to_statevector().unwrap().iter().enumerate() {
            let x = oracle::grid_point(a, a + len, n, k);
            let scale = oracle::poly_eval_scale(&coeffs, x).max(1e-300);
            prop_assert!((v - oracle::poly_eval_direct(&coeffs, x)).abs() <= 1e-11 * scale);
        }
    }

    #[test]
    fn masks_partition(n in 1usize..11, k in 0usize..5, seed in 0u64..100) {
        prop_assume!(k <= n);
        let coeffs = [0.3 + seed as f64 * 0.01, -1.0, 0.5];
        let base = poly_mps(&coeffs, &Grid::new(n, -1.0, 1.0).unwrap()).unwrap();
        let total = (0..1usize << k)
            .map(|j| mask_region(&base, j, k).unwrap())
            .reduce(|x, y| add(&x, &y).unwrap())
            .unwrap();
        prop_assert!(close(&total.to_statevector().unwrap(), &base.to_statevector().unwrap(), 1e-12));
    }
}
