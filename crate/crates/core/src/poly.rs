//! Dense real polynomials stored with ascending coefficients (`c[j]` multiplies `s^j`).

use alloc::vec;
use alloc::vec::Vec;

/// Horner evaluation of an ascending coefficient slice.
pub fn eval(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn pow(a: &[f64], e: usize) -> Vec<f64> {
    (0..e).fold(vec![1.0], |acc, _| mul(&acc, a))
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|&x| x * k).collect()
}

pub fn derivative(a: &[f64]) -> Vec<f64> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| c * j as f64)
        .collect()
}

/// Degree ignoring exact-zero leading coefficients; `None` for the zero polynomial.
pub fn degree(a: &[f64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0.0)
}

/// Drops exact-zero leading coefficients.
pub fn trimmed(a: &[f64]) -> Vec<f64> {
    match degree(a) {
        Some(d) => a[..=d].to_vec(),
        None => Vec::new(),
    }
}

/// Long division `a = quotient * b + remainder` with `deg remainder < deg b`.
///
/// `b` must have a nonzero leading coefficient after trimming.
pub fn div_rem(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let b = trimmed(b);
    let db = b.len() - 1;
    let lead = b[db];
    let mut rem = trimmed(a);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0.0; rem.len() - db];
    for i in (0..quot.len()).rev() {
        let q = rem[i + db] / lead;
        quot[i] = q;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] -= q * bj;
        }
        rem[i + db] = 0.0;
    }
    rem.truncate(db);
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_expansion() {
        // 1 + 13s + 22s^2 at s = 0.5
        assert_eq!(eval(&[1.0, 13.0, 22.0], 0.5), 1.0 + 6.5 + 5.5);
    }

    #[test]
    fn product_of_linear_factors() {
        // (1 + 2s)(1 + 11s) = 1 + 13s + 22s^2
        assert_eq!(mul(&[1.0, 2.0], &[1.0, 11.0]), vec![1.0, 13.0, 22.0]);
        assert_eq!(pow(&[1.0, 1.0], 3), vec![1.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn long_division() {
        // s^3 + 2s + 5 = (s^2 + 1)(s) + (s + 5)
        let (q, r) = div_rem(&[5.0, 2.0, 0.0, 1.0], &[1.0, 0.0, 1.0]);
        assert_eq!(q, vec![0.0, 1.0]);
        assert_eq!(r, vec![5.0, 1.0]);
        let (q, r) = div_rem(&[3.0], &[1.0, 1.0]);
        assert!(q.is_empty());
        assert_eq!(r, vec![3.0]);
    }

    #[test]
    fn derivative_and_degree() {
        assert_eq!(derivative(&[1.0, 13.0, 22.0]), vec![13.0, 44.0]);
        assert_eq!(degree(&[1.0, 0.0, 0.0]), Some(0));
        assert_eq!(degree(&[0.0]), None);
    }
}
