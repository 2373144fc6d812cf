mod common;

use common::*;
use proptest::prelude::*;
use putzer_logm::poly;
use putzer_logm::spectral::{
    characteristic_polynomial, companion_matrix, domain_interval, eigenvalues, factor_reciprocal,
    minimal_polynomial, reciprocal_polynomial, AnnihilatingPolynomial, PolyKind,
    DEFAULT_CLUSTER_TOL, DEFAULT_POLY_TOL,
};
use rand::RngExt;

#[test]
fn minimal_equals_characteristic_for_distinct_eigenvalues() {
    let mut r = rng(101);
    for i in 0..40 {
        let n = 3 + i % 4;
        let a = random_diagonalizable(&mut r, n);
        let c = characteristic_polynomial(&a);
        let m = minimal_polynomial(&a, DEFAULT_POLY_TOL).unwrap();
        assert_eq!(m.degree(), n, "fixture {i}");
        let scale = c.coeffs().iter().fold(1.0f64, |s, x| s.max(x.abs()));
        for (x, y) in c.coeffs().iter().zip(m.coeffs()) {
            assert!((x - y).abs() <= 1e-8 * scale, "fixture {i}: {x} vs {y}");
        }
    }
}

fn stable_polynomial() -> impl Strategy<Value = Vec<f64>> {
    // Roots in the left half plane with modulus at most 3, as (re, im) with im = 0 for real.
    prop::collection::vec((-3.0f64..-0.1, 0.0f64..2.0, prop::bool::ANY), 1..=6).prop_map(|roots| {
        let mut p = vec![1.0];
        let mut deg = 0;
        for (re, im, pair) in roots {
            if pair && deg + 2 <= 6 {
                p = poly::mul(&p, &[re * re + im * im, -2.0 * re, 1.0]);
                deg += 2;
            } else if deg < 6 {
                p = poly::mul(&p, &[-re, 1.0]);
                deg += 1;
            }
        }
        // Ascending monic coefficients to c_1..c_k.
        p.iter().rev().skip(1).copied().collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn characteristic_of_companion_recovers_polynomial(c in stable_polynomial()) {
        let p = AnnihilatingPolynomial::new(c.clone(), PolyKind::Characteristic).unwrap();
        let back = characteristic_polynomial(&companion_matrix(&p));
        for (x, y) in back.coeffs().iter().zip(&c) {
            prop_assert!((x - y).abs() <= 1e-8, "{:?} vs {:?}", back.coeffs(), c);
        }
    }
}

#[test]
fn domain_interval_matches_real_eigenvalues() {
    let mut r = rng(202);
    for i in 0..30 {
        let n = 2 + i % 6;
        let mut eigs = random_eigs(&mut r, n, true);
        // Mix in negative eigenvalues so both endpoints are exercised.
        for e in eigs.iter_mut() {
            if let Eig::Real(v) = e {
                if r.random_bool(0.5) {
                    *v = -*v;
                }
            }
        }
        let a = conjugate(&block_diag(&eigs), &mut r);
        let spec = eigenvalues(&a, DEFAULT_CLUSTER_TOL).unwrap();
        let d = domain_interval(&spec);
        let reals: Vec<f64> = spec.real.iter().map(|e| e.value).collect();
        let min_factor = |t: f64| reals.iter().map(|l| 1.0 - l * t).fold(f64::INFINITY, f64::min);
        let lo = d.lo.max(-5.0);
        let hi = d.hi.min(5.0);
        for j in 0..100 {
            let t = lo + (hi - lo) * (j as f64 + 0.5) / 100.0;
            assert!(d.contains(t));
            assert!(min_factor(t) > 0.0, "fixture {i}, t = {t}");
        }
        if d.hi.is_finite() {
            assert!(min_factor(d.hi + 1e-6) <= 0.0);
            assert!(!d.contains(d.hi + 1e-6));
        }
        if d.lo.is_finite() {
            assert!(min_factor(d.lo - 1e-6) <= 0.0);
            assert!(!d.contains(d.lo - 1e-6));
        }
    }
}

#[test]
fn factorization_reconstructs_reciprocal_polynomial() {
    let mut r = rng(303);
    for i in 0..60 {
        let n = 2 + i % 7;
        let a = if i % 2 == 0 {
            random_diagonalizable(&mut r, n)
        } else {
            random_repeated_separated(&mut r, n, 1.0)
        };
        let spec = eigenvalues(&a, DEFAULT_CLUSTER_TOL).unwrap();
        for p in [
            characteristic_polynomial(&a),
            minimal_polynomial(&a, DEFAULT_POLY_TOL).unwrap(),
        ] {
            let q = reciprocal_polynomial(&p);
            let f = factor_reciprocal(&q, &spec).unwrap();
            let e = f.expand();
            let scale = q.iter().fold(0.0f64, |s, x| s.max(x.abs()));
            let len = q.len().max(e.len());
            for j in 0..len {
                let x = q.get(j).copied().unwrap_or(0.0);
                let y = e.get(j).copied().unwrap_or(0.0);
                assert!((x - y).abs() <= 1e-8 * scale, "fixture {i}: {q:?} vs {e:?}");
            }
        }
    }
}
