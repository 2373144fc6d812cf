//! Seeded random fixtures shared by the integration suites.
#![allow(dead_code)]

use putzer_logm::matrix::{mat_solve, Matrix};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One eigenvalue `re + i·im` (with `im >= 0`) and whether it is a pair.
#[derive(Debug, Clone, Copy)]
pub enum Eig {
    Real(f64),
    Pair(f64, f64),
}

/// Eigenvalues with `Re > 0.1` and modulus at most 10, filling dimension `n`.
pub fn random_eigs(r: &mut ChaCha8Rng, n: usize, allow_complex: bool) -> Vec<Eig> {
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        if allow_complex && left >= 2 && r.random_bool(0.4) {
            let re: f64 = r.random_range(0.1..9.9);
            let max_im = (100.0 - re * re).sqrt();
            let im = r.random_range(0.1..max_im.max(0.11));
            out.push(Eig::Pair(re, im));
            left -= 2;
        } else {
            out.push(Eig::Real(r.random_range(0.1..10.0)));
            left -= 1;
        }
    }
    out
}

/// Block-diagonal real form of the eigenvalues.
pub fn block_diag(eigs: &[Eig]) -> Matrix {
    let n: usize = eigs
        .iter()
        .map(|e| match e {
            Eig::Real(_) => 1,
            Eig::Pair(..) => 2,
        })
        .sum();
    let mut d = Matrix::zeros(n);
    let mut i = 0;
    for e in eigs {
        match *e {
            Eig::Real(v) => {
                d[(i, i)] = v;
                i += 1;
            }
            Eig::Pair(re, im) => {
                d[(i, i)] = re;
                d[(i + 1, i + 1)] = re;
                d[(i, i + 1)] = im;
                d[(i + 1, i)] = -im;
                i += 2;
            }
        }
    }
    d
}

/// A well-conditioned similarity `I + (0.4/√n) G` with `G` uniform in [-1, 1].
pub fn random_similarity(r: &mut ChaCha8Rng, n: usize) -> (Matrix, Matrix) {
    let scale = 0.4 / (n as f64).sqrt();
    let data: Vec<f64> = (0..n * n)
        .map(|idx| {
            let g: f64 = r.random_range(-1.0..1.0);
            if idx / n == idx % n {
                1.0 + scale * g
            } else {
                scale * g
            }
        })
        .collect();
    let v = Matrix::from_row_major(n, data).unwrap();
    let vinv = mat_solve(&v, &Matrix::identity(n)).unwrap();
    (v, vinv)
}

pub fn conjugate(d: &Matrix, r: &mut ChaCha8Rng) -> Matrix {
    let (v, vinv) = random_similarity(r, d.dim());
    v.mul(d).unwrap().mul(&vinv).unwrap()
}

/// Random diagonalizable matrix with the eigenvalue constraints above.
pub fn random_diagonalizable(r: &mut ChaCha8Rng, n: usize) -> Matrix {
    let eigs = random_eigs(r, n, true);
    conjugate(&block_diag(&eigs), r)
}

/// Diagonalizable matrix of dimension `n` with at least one repeated eigenvalue.
pub fn random_repeated(r: &mut ChaCha8Rng, n: usize) -> Matrix {
    assert!(n >= 2);
    let distinct = r.random_range(1..n);
    let mut eigs = random_eigs(r, distinct, false);
    while eigs.len() < n {
        let pick = eigs[r.random_range(0..distinct)];
        eigs.push(pick);
    }
    conjugate(&block_diag(&eigs), r)
}

/// Like [`random_repeated`], with distinct eigenvalues at least `gap` apart.
pub fn random_repeated_separated(r: &mut ChaCha8Rng, n: usize, gap: f64) -> Matrix {
    assert!(n >= 2);
    let distinct = r.random_range(1..n);
    let mut values: Vec<f64> = Vec::with_capacity(distinct);
    while values.len() < distinct {
        let v: f64 = r.random_range(0.1..10.0);
        if values.iter().all(|w| (v - w).abs() >= gap) {
            values.push(v);
        }
    }
    let mut eigs: Vec<Eig> = values.iter().map(|&v| Eig::Real(v)).collect();
    while eigs.len() < n {
        let pick = eigs[r.random_range(0..distinct)];
        eigs.push(pick);
    }
    conjugate(&block_diag(&eigs), r)
}

pub fn example_a() -> Matrix {
    Matrix::from_rows(&[[7.0, 4.0, -4.0], [4.0, 7.0, -4.0], [-1.0, -1.0, 4.0]]).unwrap()
}
