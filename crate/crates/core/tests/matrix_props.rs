use proptest::prelude::*;
use putzer_logm::matrix::{mat_poly_eval, mat_solve, Matrix};
use putzer_logm::spectral::{characteristic_polynomial, minimal_polynomial, DEFAULT_POLY_TOL};

fn square(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-10.0f64..10.0, n * n)
        .prop_map(move |data| Matrix::from_row_major(n, data).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(a in square(5), b in square(5), c in square(5)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        let scale = a.norm_inf() * b.norm_inf() * c.norm_inf();
        for (x, y) in left.as_slice().iter().zip(right.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn solve_residual_is_small(g in square(6), b in square(6)) {
        // Diagonal dominance keeps the condition number well below 1e6.
        let a = g.shifted(70.0);
        let x = mat_solve(&a, &b).unwrap();
        let r = a.mul(&x).unwrap().sub(&b).unwrap().norm_inf();
        prop_assert!(r <= 1e-10 * b.norm_inf());
    }

    #[test]
    fn annihilating_polynomials_vanish(a in square(4)) {
        let scale = a.norm_inf().powi(4);
        let c = characteristic_polynomial(&a);
        prop_assert!(mat_poly_eval(c.coeffs(), &a).max_abs() <= 1e-8 * scale);
        let m = minimal_polynomial(&a, DEFAULT_POLY_TOL).unwrap();
        let scale = a.norm_inf().powi(m.degree() as i32);
        prop_assert!(mat_poly_eval(m.coeffs(), &a).max_abs() <= 1e-8 * scale);
    }
}

#[test]
fn inverse_times_matrix_is_identity() {
    let a = Matrix::from_rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, -1.0], [0.5, -1.0, 5.0]]).unwrap();
    let inv = mat_solve(&a, &Matrix::identity(3)).unwrap();
    let e = a.mul(&inv).unwrap().sub(&Matrix::identity(3)).unwrap();
    assert!(e.max_abs() < 1e-14);
}
