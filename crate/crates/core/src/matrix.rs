//! Dense real square matrices and the handful of kernels the logarithm needs.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Relative pivot threshold below which LU declares a matrix singular.
pub const PIVOT_TOL: f64 = 1e-13;

/// An `n × n` real matrix in row-major storage. Entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive"));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn check_dim(&self, other: &Matrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { n: self.n, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { n: self.n, data })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scaled(&self, k: f64) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    /// `self + k * I`.
    pub fn shifted(&self, k: f64) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] += k;
        }
        out
    }

    /// `I - t * self`, the matrix whose logarithm the curve formula produces.
    pub fn identity_minus_scaled(&self, t: f64) -> Matrix {
        self.scaled(-t).shifted(1.0)
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `I, A, …, A^{count-1}` by repeated multiplication.
    pub fn powers(&self, count: usize) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(Matrix::identity(self.n));
        for j in 1..count {
            let next = out[j - 1].mul(self).expect("same dimension");
            out.push(next);
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        &mut self.data[i * self.n + j]
    }
}

/// Evaluates the monic polynomial `A^k + c_1 A^{k-1} + … + c_k I` by Horner's scheme.
pub fn mat_poly_eval(coeffs: &[f64], a: &Matrix) -> Matrix {
    let mut acc = Matrix::identity(a.dim());
    for &c in coeffs {
        acc = acc.mul(a).expect("same dimension").shifted(c);
    }
    acc
}

/// `Σ scalars[i] · powers[i]`.
pub fn linear_combination(scalars: &[f64], powers: &[Matrix]) -> Result<Matrix> {
    if scalars.len() != powers.len() {
        return Err(Error::DimensionMismatch {
            expected: powers.len(),
            found: scalars.len(),
        });
    }
    let Some(first) = powers.first() else {
        return Err(Error::InvalidArgument("empty linear combination"));
    };
    let n = first.dim();
    let mut out = Matrix::zeros(n);
    for (&f, p) in scalars.iter().zip(powers) {
        out.check_dim(p)?;
        for (o, x) in out.data.iter_mut().zip(&p.data) {
            *o += f * x;
        }
    }
    Ok(out)
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors `a`; a pivot at or below `PIVOT_TOL` times the largest entry of
    /// its original column is reported as singular.
    pub fn factor(a: &Matrix) -> Result<Self> {
        let n = a.n;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let col_scale: Vec<f64> = (0..n)
            .map(|j| (0..n).fold(0.0, |m: f64, i| m.max(a.data[i * n + j].abs())))
            .collect();

        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag.is_nan() || pmag <= PIVOT_TOL * col_scale[k] || pmag == 0.0 {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for j in (k + 1)..n {
                        lu[i * n + j] -= factor * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }
}

/// Solves `a · X = b` column by column.
pub fn mat_solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.check_dim(b)?;
    let lu = Lu::factor(a)?;
    let n = a.n;
    let mut out = Matrix::zeros(n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        for i in 0..n {
            col[i] = b[(i, j)];
        }
        let x = lu.solve_vec(&col)?;
        for i in 0..n {
            out[(i, j)] = x[i];
        }
    }
    Ok(out)
}

/// Least-squares solution of `columns · x ≈ rhs` by Householder QR.
///
/// Returns the coefficients and the 2-norm of the residual. Columns must all
/// have the length of `rhs` and there must be no more columns than rows.
pub fn least_squares(columns: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = rhs.len();
    let k = columns.len();
    if k > m {
        return Err(Error::InvalidArgument("underdetermined least-squares system"));
    }
    if let Some(bad) = columns.iter().find(|c| c.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: bad.len(),
        });
    }
    let mut cols: Vec<Vec<f64>> = columns.to_vec();
    let mut b = rhs.to_vec();
    let mut diag = vec![0.0; k];

    for j in 0..k {
        let norm = libm::sqrt(cols[j][j..].iter().map(|x| x * x).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::Singular { pivot: j });
        }
        let alpha = if cols[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = cols[j][j..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        diag[j] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        let reflect = |x: &mut [f64]| {
            let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (xi, vi) in x.iter_mut().zip(&v) {
                *xi -= f * vi;
            }
        };
        for col in cols.iter_mut().skip(j + 1) {
            reflect(&mut col[j..]);
        }
        reflect(&mut b[j..]);
    }

    let scale = diag.iter().fold(0.0, |m: f64, d| m.max(d.abs()));
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        if diag[i].abs() <= 1e-15 * scale {
            return Err(Error::Singular { pivot: i });
        }
        let s: f64 = ((i + 1)..k).map(|j| cols[j][i] * x[j]).sum();
        x[i] = (b[i] - s) / diag[i];
    }
    let residual = libm::sqrt(b[k..].iter().map(|x| x * x).sum::<f64>());
    Ok((x, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn example_a() -> Matrix {
        m(&[&[7.0, 4.0, -4.0], &[4.0, 7.0, -4.0], &[-1.0, -1.0, 4.0]])
    }

    #[test]
    fn rejects_non_finite_and_ragged() {
        assert_eq!(
            Matrix::from_rows(&[[1.0, f64::NAN], [0.0, 1.0]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        );
        assert!(matches!(
            Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn addition() {
        let i2 = Matrix::identity(2);
        assert_eq!(i2.add(&i2).unwrap(), Matrix::from_diag(&[2.0, 2.0]));
        let a = example_a();
        assert_eq!(a.add(&Matrix::zeros(3)).unwrap(), a);
        let s = m(&[&[1.0, 2.0], &[3.0, 4.0]])
            .add(&m(&[&[4.0, 3.0], &[2.0, 1.0]]))
            .unwrap();
        assert_eq!(s, m(&[&[5.0, 5.0], &[5.0, 5.0]]));
        assert!(matches!(i2.add(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn multiplication() {
        let a = example_a();
        assert_eq!(Matrix::identity(3).mul(&a).unwrap(), a);
        let inv = mat_solve(&a, &Matrix::identity(3)).unwrap();
        let prod = a.mul(&inv).unwrap();
        assert!(prod.sub(&Matrix::identity(3)).unwrap().max_abs() < 1e-14);
        assert!(a.mul(&Matrix::identity(2)).is_err());
    }

    #[test]
    fn companion_square_satisfies_cayley_hamilton() {
        // C for λ² + 13λ + 22: C² = -13 C - 22 I
        let c = m(&[&[0.0, -22.0], &[1.0, -13.0]]);
        let lhs = c.mul(&c).unwrap();
        let rhs = c.scaled(-13.0).shifted(-22.0);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_eval_annihilates_example() {
        let b = example_a().identity_minus_scaled(1.0);
        let r = mat_poly_eval(&[13.0, 22.0], &b);
        assert!(r.max_abs() <= 1e-10);
        assert_eq!(mat_poly_eval(&[-1.0], &Matrix::identity(3)), Matrix::zeros(3));
        let a = example_a();
        assert_eq!(mat_poly_eval(&[0.0], &a), a);
    }

    #[test]
    fn linear_combination_cases() {
        let b = example_a().identity_minus_scaled(1.0);
        let powers = b.powers(2);
        assert_eq!(
            linear_combination(&[0.0, 0.0], &powers).unwrap(),
            Matrix::zeros(3)
        );
        assert_eq!(
            linear_combination(&[1.0], &[Matrix::identity(4)]).unwrap(),
            Matrix::identity(4)
        );
        assert!(linear_combination(&[1.0], &powers).is_err());
    }

    #[test]
    fn solve_simple_systems() {
        let b = example_a();
        assert_eq!(mat_solve(&Matrix::identity(3), &b).unwrap(), b);
        let half = mat_solve(&Matrix::from_diag(&[2.0, 2.0]), &Matrix::identity(2)).unwrap();
        assert_eq!(half, Matrix::from_diag(&[0.5, 0.5]));
    }

    #[test]
    fn solve_reports_singular_pivot() {
        let s = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert_eq!(Lu::factor(&s).unwrap_err(), Error::Singular { pivot: 1 });
        assert_eq!(
            Lu::factor(&Matrix::zeros(2)).unwrap_err(),
            Error::Singular { pivot: 0 }
        );
    }

    #[test]
    fn companion_solve_gives_integrand_values() {
        // (I - C s) x' = -C e1 with C the companion of λ² + 13λ + 22; the
        // solution is the integrand vector (22 s, -1) / (1 + 13 s + 22 s²).
        let c = m(&[&[0.0, -22.0], &[1.0, -13.0]]);
        let s = 0.1;
        let lu = Lu::factor(&c.identity_minus_scaled(s)).unwrap();
        let x = lu.solve_vec(&[0.0, -1.0]).unwrap();
        let q = 1.0 + 13.0 * s + 22.0 * s * s;
        assert!((x[0] - 22.0 * s / q).abs() < 1e-15);
        assert!((x[1] + 1.0 / q).abs() < 1e-15);
    }

    #[test]
    fn least_squares_exact_fit() {
        // rhs = 2 * col0 - 3 * col1
        let c0 = vec![1.0, 0.0, 1.0, 2.0];
        let c1 = vec![0.0, 1.0, 1.0, -1.0];
        let rhs: Vec<f64> = c0.iter().zip(&c1).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        let (x, res) = least_squares(&[c0, c1], &rhs).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14 && (x[1] + 3.0).abs() < 1e-14);
        assert!(res < 1e-14);
    }
}
