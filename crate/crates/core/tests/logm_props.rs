mod common;

use common::*;
use putzer_logm::matrix::{linear_combination, Matrix};
use putzer_logm::oracles::{expm, solve_putzer_ivp, DEFAULT_RTOL};
use putzer_logm::putzer_log::{eval_log_curve, logm, plan, Options};
use putzer_logm::spectral::{eigenvalues, PolyKind, DEFAULT_CLUSTER_TOL};
use rand::RngExt;

fn assert_in_strip(l: &Matrix) {
    let spec = eigenvalues(l, DEFAULT_CLUSTER_TOL).unwrap();
    for (_, im) in spec.expanded() {
        assert!(im.abs() < core::f64::consts::PI - 1e-9, "eigenvalue with Im = {im}");
    }
}

#[test]
fn exponential_of_logarithm_round_trips() {
    let mut r = rng(505);
    for i in 0..100 {
        let n = 2 + i % 7;
        let a = random_diagonalizable(&mut r, n);
        let l = logm(&a, &Options::default()).unwrap();
        let e = expm(&l.value).unwrap().sub(&a).unwrap().norm_inf();
        assert!(e <= 1e-8 * a.norm_inf(), "fixture {i}: {e:e}");
        assert!(l.residual.unwrap() <= 1e-8);
        assert_in_strip(&l.value);
    }
}

#[test]
fn logarithm_commutes_with_its_argument() {
    let mut r = rng(606);
    for i in 0..40 {
        let n = 2 + i % 7;
        let a = random_diagonalizable(&mut r, n);
        let l = logm(&a, &Options::default()).unwrap().value;
        let c = l.mul(&a).unwrap().sub(&a.mul(&l).unwrap()).unwrap().norm_inf();
        assert!(c <= 1e-8 * a.norm_inf() * l.norm_inf(), "fixture {i}: {c:e}");
    }
}

#[test]
fn polynomial_kind_does_not_change_the_result() {
    let mut r = rng(707);
    let char_opts = Options {
        kind: PolyKind::Characteristic,
        ..Options::default()
    };
    for i in 0..40 {
        let n = 2 + i % 7;
        let a = random_repeated_separated(&mut r, n, 1.0);
        let m = logm(&a, &Options::default()).unwrap().value;
        let c = logm(&a, &char_opts).unwrap().value;
        let d = m.sub(&c).unwrap().max_abs();
        assert!(d <= 1e-7 * m.norm_inf(), "fixture {i}: {d:e}");
        assert_in_strip(&m);
    }
}

#[test]
fn curve_agrees_with_ode_solution() {
    let mut r = rng(808);
    for i in 0..20 {
        let n = 2 + i % 5;
        let a = random_diagonalizable(&mut r, n);
        let p = plan(&a, &Options::default()).unwrap();
        let d = p.domain();
        let (lo, hi) = (d.lo.max(-0.5), d.hi.min(1.0));
        for _ in 0..5 {
            let t = lo + (hi - lo) * r.random_range(0.02..0.98);
            let curve = eval_log_curve(&p, t).unwrap().value;
            let x = solve_putzer_ivp(p.polynomial(), t, DEFAULT_RTOL).unwrap();
            let ode = linear_combination(x.final_state(), &a.powers(x.final_state().len())).unwrap();
            let diff = curve.sub(&ode).unwrap().max_abs();
            assert!(diff <= 1e-7 * curve.norm_inf().max(1.0), "fixture {i}, t = {t}: {diff:e}");
        }
    }
}

#[test]
fn symmetric_positive_definite_input_gives_symmetric_logarithm() {
    let mut r = rng(909);
    for i in 0..30 {
        let n = 2 + i % 7;
        let g: Vec<f64> = (0..n * n).map(|_| r.random_range(-1.0..1.0)).collect();
        let g = Matrix::from_row_major(n, g).unwrap();
        let a = g.transpose().mul(&g).unwrap().shifted(0.5);
        let l = logm(&a, &Options::default()).unwrap().value;
        let asym = l.sub(&l.transpose()).unwrap().max_abs();
        assert!(asym <= 1e-9, "fixture {i}: {asym:e}");
    }
}
