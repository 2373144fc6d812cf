//! Annihilating polynomials, eigenvalues, the companion matrix, the reciprocal
//! polynomial `q(s) = s^k p(1/s)` with its real factorization, and the interval
//! of admissible curve parameters.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{EigenList, Endpoint, Error, Result};
use crate::matrix::{least_squares, mat_poly_eval, Matrix};
use crate::poly;

/// Default relative residual for accepting a minimal-polynomial degree.
pub const DEFAULT_POLY_TOL: f64 = 1e-9;
/// Default relative radius for merging eigenvalues into one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
/// Largest factorization mismatch tolerated before reporting inconsistency.
pub const FACTOR_TOL: f64 = 1e-6;

const QR_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyKind {
    Characteristic,
    Minimal,
}

/// A monic `p(λ) = λ^k + c_1 λ^{k-1} + … + c_k` with `p(A) = 0` for its source matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilatingPolynomial {
    coeffs: Vec<f64>,
    kind: PolyKind,
    fell_back: bool,
}

impl AnnihilatingPolynomial {
    /// Wraps `c_1..c_k`. The caller vouches that the polynomial annihilates
    /// whatever matrix it is used with.
    pub fn new(coeffs: Vec<f64>, kind: PolyKind) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("annihilating polynomial needs degree >= 1"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite polynomial coefficient"));
        }
        Ok(Self {
            coeffs,
            kind,
            fell_back: false,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_1..c_k`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn kind(&self) -> PolyKind {
        self.kind
    }

    /// True when a minimal polynomial was requested but no degree below `n`
    /// passed the residual test, so the characteristic polynomial was used.
    pub fn fell_back(&self) -> bool {
        self.fell_back
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(1.0, |acc, &c| acc * x + c)
    }

    /// `‖p(A)‖∞ / ‖A‖∞^k` (unnormalized when `A = 0`).
    pub fn residual(&self, a: &Matrix) -> f64 {
        let r = mat_poly_eval(&self.coeffs, a).norm_inf();
        let scale = libm::pow(a.norm_inf(), self.degree() as f64);
        if scale > 0.0 {
            r / scale
        } else {
            r
        }
    }
}

/// Faddeev–LeVerrier recurrence, run on `A / ‖A‖∞` and rescaled.
pub fn characteristic_polynomial(a: &Matrix) -> AnnihilatingPolynomial {
    let n = a.dim();
    let scale = positive_scale(a.norm_inf());
    let a_hat = a.scaled(1.0 / scale);
    let mut coeffs = Vec::with_capacity(n);
    let mut m = Matrix::identity(n);
    let mut factor = 1.0;
    for j in 1..=n {
        let am = a_hat.mul(&m).expect("same dimension");
        let c = -am.trace() / j as f64;
        factor *= scale;
        coeffs.push(c * factor);
        m = am.shifted(c);
    }
    AnnihilatingPolynomial {
        coeffs,
        kind: PolyKind::Characteristic,
        fell_back: false,
    }
}

/// Lowest-degree monic polynomial whose residual `‖p(A)‖∞ ≤ tol · ‖A‖∞^k`.
///
/// Each candidate degree is fitted by least squares on the vectorized powers
/// of `A / ‖A‖∞`. If no degree below `n` passes, the characteristic polynomial
/// is returned with [`AnnihilatingPolynomial::fell_back`] set.
pub fn minimal_polynomial(a: &Matrix, tol: f64) -> Result<AnnihilatingPolynomial> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("minimal polynomial tolerance must be positive"));
    }
    let n = a.dim();
    let scale = positive_scale(a.norm_inf());
    let a_hat = a.scaled(1.0 / scale);
    let powers = a_hat.powers(n);

    for k in 1..n {
        // columns ordered to match c_1..c_k: A^{k-1}, …, A, I
        let columns: Vec<Vec<f64>> = (0..k)
            .map(|j| powers[k - 1 - j].as_slice().to_vec())
            .collect();
        let top = powers[k - 1].mul(&a_hat).expect("same dimension");
        let rhs: Vec<f64> = top.as_slice().iter().map(|x| -x).collect();
        let Ok((c_hat, _)) = least_squares(&columns, &rhs) else {
            continue;
        };
        if mat_poly_eval(&c_hat, &a_hat).norm_inf() <= tol {
            let mut factor = 1.0;
            let coeffs = c_hat
                .iter()
                .map(|c| {
                    factor *= scale;
                    c * factor
                })
                .collect();
            return Ok(AnnihilatingPolynomial {
                coeffs,
                kind: PolyKind::Minimal,
                fell_back: false,
            });
        }
    }
    let mut p = characteristic_polynomial(a);
    p.fell_back = n > 1;
    if n == 1 {
        p.kind = PolyKind::Minimal;
    }
    Ok(p)
}

/// The companion matrix: identity on the subdiagonal, `(-c_k, …, -c_1)` in the last column.
pub fn companion_matrix(p: &AnnihilatingPolynomial) -> Matrix {
    let k = p.degree();
    let mut c = Matrix::zeros(k);
    for i in 1..k {
        c[(i, i - 1)] = 1.0;
    }
    for i in 0..k {
        c[(i, k - 1)] = -p.coeffs[k - 1 - i];
    }
    c
}

/// `q(s) = 1 + c_1 s + … + c_k s^k`, ascending.
pub fn reciprocal_polynomial(p: &AnnihilatingPolynomial) -> Vec<f64> {
    let mut q = Vec::with_capacity(p.degree() + 1);
    q.push(1.0);
    q.extend_from_slice(&p.coeffs);
    q
}

fn positive_scale(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEigenvalue {
    pub value: f64,
    pub multiplicity: usize,
}

/// One member `re + i·im` (with `im > 0`) of a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Clustered eigenvalues of a real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub real: Vec<RealEigenvalue>,
    pub complex: Vec<ComplexPair>,
    /// Unclustered QR output as `(re, im)`.
    pub raw: Vec<(f64, f64)>,
    /// Absolute radius used for snapping and clustering.
    pub cluster_radius: f64,
}

impl Spectrum {
    /// Sum of multiplicities, pairs counted twice.
    pub fn total_multiplicity(&self) -> usize {
        self.real.iter().map(|e| e.multiplicity).sum::<usize>()
            + 2 * self.complex.iter().map(|e| e.multiplicity).sum::<usize>()
    }

    /// Every eigenvalue with multiplicity, as `(re, im)`, conjugates included.
    pub fn expanded(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for e in &self.real {
            out.extend(core::iter::repeat_n((e.value, 0.0), e.multiplicity));
        }
        for e in &self.complex {
            for _ in 0..e.multiplicity {
                out.push((e.re, e.im));
                out.push((e.re, -e.im));
            }
        }
        out
    }
}

/// Eigenvalues by Householder reduction to Hessenberg form and Francis
/// double-shift QR.
///
/// Values within `tol · ‖A‖∞` of the real axis are snapped to it, values
/// that close to zero become exactly zero, and values within the same
/// radius of each other are merged into one cluster with a multiplicity.
pub fn eigenvalues(a: &Matrix, tol: f64) -> Result<Spectrum> {
    let radius = tol * a.norm_inf();
    let mut raw = hessenberg_qr(a)?;
    raw.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));

    let mut real: Vec<(f64, usize)> = Vec::new();
    let mut complex: Vec<(f64, f64, usize)> = Vec::new();
    let mut reals_seen: Vec<f64> = Vec::new();
    let mut upper_seen: Vec<(f64, f64)> = Vec::new();
    for &(re, im) in &raw {
        if libm::hypot(re, im) <= radius {
            reals_seen.push(0.0);
        } else if im.abs() <= radius {
            reals_seen.push(re);
        } else if im > 0.0 {
            upper_seen.push((re, im));
        }
    }
    for x in reals_seen {
        cluster_into(&mut real, x, |(v, m), x| {
            if (*v - x).abs() <= radius {
                *v = (*v * *m as f64 + x) / (*m + 1) as f64;
                *m += 1;
                true
            } else {
                false
            }
        }, |x| (x, 1));
    }
    for z in upper_seen {
        cluster_into(&mut complex, z, |(re, im, m), z| {
            if libm::hypot(*re - z.0, *im - z.1) <= radius {
                let w = *m as f64;
                *re = (*re * w + z.0) / (w + 1.0);
                *im = (*im * w + z.1) / (w + 1.0);
                *m += 1;
                true
            } else {
                false
            }
        }, |z| (z.0, z.1, 1));
    }
    for (v, _) in real.iter_mut() {
        if v.abs() <= radius {
            *v = 0.0;
        }
    }
    real.sort_by(|x, y| x.0.total_cmp(&y.0));
    complex.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));

    Ok(Spectrum {
        real: real
            .into_iter()
            .map(|(value, multiplicity)| RealEigenvalue {
                value,
                multiplicity,
            })
            .collect(),
        complex: complex
            .into_iter()
            .map(|(re, im, multiplicity)| ComplexPair {
                re,
                im,
                multiplicity,
            })
            .collect(),
        raw,
        cluster_radius: radius,
    })
}

fn cluster_into<C, X: Copy>(
    clusters: &mut Vec<C>,
    x: X,
    mut join: impl FnMut(&mut C, X) -> bool,
    start: impl Fn(X) -> C,
) {
    for c in clusters.iter_mut() {
        if join(c, x) {
            return;
        }
    }
    clusters.push(start(x));
}

/// All eigenvalues as unclustered `(re, im)` pairs.
fn hessenberg_qr(a: &Matrix) -> Result<Vec<(f64, f64)>> {
    let n = a.dim();
    let mut h: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    reduce_to_hessenberg(&mut h);
    francis_qr(h)
}

#[allow(clippy::needless_range_loop)]
fn reduce_to_hessenberg(h: &mut [Vec<f64>]) {
    let n = h.len();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = libm::sqrt(hh);
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let f: f64 = (m..=high).rev().map(|i| ort[i] * h[i][j]).sum::<f64>() / hh;
            for i in m..=high {
                h[i][j] -= f * ort[i];
            }
        }
        for row in h.iter_mut() {
            let f: f64 = (m..=high).rev().map(|j| ort[j] * row[j]).sum::<f64>() / hh;
            for j in m..=high {
                row[j] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[m][m - 1] = scale * g;
    }
}

/// Eigenvalues of an upper Hessenberg matrix (EISPACK `hqr` lineage).
#[allow(clippy::many_single_char_names, clippy::needless_range_loop, unused_assignments)]
fn francis_qr(mut h: Vec<Vec<f64>>) -> Result<Vec<(f64, f64)>> {
    let nn = h.len();
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];
    let eps = f64::EPSILON;
    let low: isize = 0;
    let mut n: isize = nn as isize - 1;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i][j].abs();
        }
    }

    let mut iter = 0usize;
    while n >= low {
        let nu = n as usize;
        let mut l = n;
        while l > low {
            let lu = l as usize;
            s = h[lu - 1][lu - 1].abs() + h[lu][lu].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[lu][lu - 1].abs() <= eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            h[nu][nu] += exshift;
            d[nu] = h[nu][nu];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            let w = h[nu][nu - 1] * h[nu - 1][nu];
            p = (h[nu - 1][nu - 1] - h[nu][nu]) / 2.0;
            q = p * p + w;
            z = libm::sqrt(q.abs());
            h[nu][nu] += exshift;
            h[nu - 1][nu - 1] += exshift;
            let x = h[nu][nu];
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
            } else {
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            let mut x = h[nu][nu];
            let mut y = 0.0;
            let mut w = 0.0;
            if l < n {
                y = h[nu - 1][nu - 1];
                w = h[nu][nu - 1] * h[nu - 1][nu];
            }
            if iter == 10 {
                exshift += x;
                for i in (low as usize)..=nu {
                    h[i][i] -= x;
                }
                s = h[nu][nu - 1].abs() + h[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = libm::sqrt(s);
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in (low as usize)..=nu {
                        h[i][i] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            if iter > QR_MAX_ITER {
                return Err(Error::NoConvergence {
                    row: nu,
                    col: nu - 1,
                    iterations: iter - 1,
                });
            }

            let mut m = n - 2;
            while m >= l {
                let mu = m as usize;
                z = h[mu][mu];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[mu + 1][mu] + h[mu][mu + 1];
                q = h[mu + 1][mu + 1] - z - r - s;
                r = h[mu + 2][mu + 1];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[mu][mu - 1].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[mu - 1][mu - 1].abs() + z.abs() + h[mu + 1][mu + 1].abs()))
                {
                    break;
                }
                m -= 1;
            }
            let mu = m as usize;
            for i in (mu + 2)..=nu {
                h[i][i - 2] = 0.0;
                if i > mu + 2 {
                    h[i][i - 3] = 0.0;
                }
            }

            for k in mu..nu {
                let notlast = k != nu - 1;
                if k != mu {
                    p = h[k][k - 1];
                    q = h[k + 1][k - 1];
                    r = if notlast { h[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = libm::sqrt(p * p + q * q + r * r);
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mu {
                        h[k][k - 1] = -s * x;
                    } else if l != m {
                        h[k][k - 1] = -h[k][k - 1];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        let mut pp = h[k][j] + q * h[k + 1][j];
                        if notlast {
                            pp += r * h[k + 2][j];
                            h[k + 2][j] -= pp * z;
                        }
                        h[k][j] -= pp * x;
                        h[k + 1][j] -= pp * y;
                    }
                    for row in h.iter_mut().take(nu.min(k + 3) + 1) {
                        let mut pp = x * row[k] + y * row[k + 1];
                        if notlast {
                            pp += z * row[k + 2];
                            row[k + 2] -= pp * r;
                        }
                        row[k] -= pp;
                        row[k + 1] -= pp * q;
                    }
                }
            }
        }
    }
    Ok(d.into_iter().zip(e).collect())
}

/// The open interval of `t` with `1 - λ t > 0` for every real eigenvalue `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainInterval {
    pub lo: f64,
    pub hi: f64,
}

impl DomainInterval {
    pub const ALL: DomainInterval = DomainInterval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// Interval induced by a set of real rates `λ`: zero rates impose nothing.
    pub fn from_real_rates(rates: impl IntoIterator<Item = f64>) -> Self {
        let mut d = Self::ALL;
        for lambda in rates {
            if lambda > 0.0 {
                d.hi = d.hi.min(1.0 / lambda);
            } else if lambda < 0.0 {
                d.lo = d.lo.max(1.0 / lambda);
            }
        }
        d
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo < t && t < self.hi
    }

    pub fn check(&self, t: f64) -> Result<()> {
        if t.is_nan() || t <= self.lo {
            Err(Error::OutsideDomain {
                t,
                endpoint: Endpoint::Lower(self.lo),
            })
        } else if t >= self.hi {
            Err(Error::OutsideDomain {
                t,
                endpoint: Endpoint::Upper(self.hi),
            })
        } else {
            Ok(())
        }
    }

    /// `[a, b] ∩ (lo, hi)` is nonempty and `[0, t]` lies inside for both ends.
    pub fn contains_segment(&self, a: f64, b: f64) -> bool {
        self.contains(a) && self.contains(b)
    }
}

/// Admissible curve parameters for a matrix with the given spectrum.
/// Complex pairs never put an eigenvalue of `I - A t` on the real axis.
pub fn domain_interval(spec: &Spectrum) -> DomainInterval {
    DomainInterval::from_real_rates(spec.real.iter().map(|e| e.value))
}

/// Linear factor `1 - rate · s` of `q`; its root is `1 / rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFactor {
    pub rate: f64,
}

impl LinearFactor {
    pub fn root(&self) -> f64 {
        1.0 / self.rate
    }

    /// `[1, -rate]`.
    pub fn coeffs(&self) -> [f64; 2] {
        [1.0, -self.rate]
    }

    pub fn eval(&self, s: f64) -> f64 {
        1.0 - self.rate * s
    }
}

/// Irreducible factor `(1 - μ s)(1 - μ̄ s) = 1 - 2 re s + (re² + im²) s²`
/// for the eigenvalue pair `μ = re ± i·im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFactor {
    pub re: f64,
    pub im: f64,
}

impl QuadraticFactor {
    pub fn modulus_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Ascending coefficients `[1, -2 re, |μ|²]`.
    pub fn coeffs(&self) -> [f64; 3] {
        [1.0, -2.0 * self.re, self.modulus_sq()]
    }

    /// Monic form `s² + b s + c` as `(b, c)`.
    pub fn monic(&self) -> (f64, f64) {
        let m = self.modulus_sq();
        (-2.0 * self.re / m, 1.0 / m)
    }

    pub fn eval(&self, s: f64) -> f64 {
        let [c0, c1, c2] = self.coeffs();
        c0 + s * (c1 + s * c2)
    }
}

/// `q(s)` written as a product of real factors with unit constant term.
///
/// `constant` is the leading coefficient of `q` when it is rewritten in
/// monic form, `q(s) = constant · ∏ (s - r)^m · ∏ (s² + b s + c)^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealFactorization {
    pub constant: f64,
    pub linear: Vec<(LinearFactor, usize)>,
    pub quadratic: Vec<(QuadraticFactor, usize)>,
    /// Multiplicity of the zero root of `p`; `q` has degree `k - zero_roots`.
    pub zero_roots: usize,
}

impl RealFactorization {
    pub fn degree(&self) -> usize {
        self.linear.iter().map(|(_, m)| m).sum::<usize>()
            + 2 * self.quadratic.iter().map(|(_, m)| m).sum::<usize>()
    }

    /// Expanded ascending coefficients of the product (constant term 1).
    pub fn expand(&self) -> Vec<f64> {
        let mut out = vec![1.0];
        for (f, m) in &self.linear {
            out = poly::mul(&out, &poly::pow(&f.coeffs(), *m));
        }
        for (f, m) in &self.quadratic {
            out = poly::mul(&out, &poly::pow(&f.coeffs(), *m));
        }
        out
    }

    pub fn eval(&self, s: f64) -> f64 {
        let mut v = 1.0;
        for (f, m) in &self.linear {
            v *= libm::pow(f.eval(s), *m as f64);
        }
        for (f, m) in &self.quadratic {
            v *= libm::pow(f.eval(s), *m as f64);
        }
        v
    }

    /// `c_1..c_k` of the polynomial this factorization represents, zero roots included.
    pub fn polynomial_coeffs(&self) -> Vec<f64> {
        let mut q = self.expand();
        q.resize(self.degree() + self.zero_roots + 1, 0.0);
        q.remove(0);
        q
    }

    /// Parameters `t` for which no real factor vanishes on `[0, t]`.
    pub fn domain(&self) -> DomainInterval {
        DomainInterval::from_real_rates(self.linear.iter().map(|(f, _)| f.rate))
    }
}

/// Factors `q` over the reals using the eigenvalues it came from.
///
/// Each nonzero real eigenvalue `λ` gives `1 - λ s`, each complex pair gives
/// the irreducible quadratic `(1 - λ s)(1 - λ̄ s)`, and zero eigenvalues give
/// nothing. Multiplicities in `p` may be smaller than the algebraic ones
/// (minimal polynomials); they are chosen, between 1 and the algebraic
/// multiplicity, to reproduce `q` best.
pub fn factor_reciprocal(q: &[f64], spec: &Spectrum) -> Result<RealFactorization> {
    if q.is_empty() {
        return Err(Error::InvalidArgument("empty reciprocal polynomial"));
    }
    let k = q.len() - 1;
    let zero_mult = spec
        .real
        .iter()
        .filter(|e| e.value == 0.0)
        .map(|e| e.multiplicity)
        .sum::<usize>();
    let nonzero_real: Vec<RealEigenvalue> =
        spec.real.iter().copied().filter(|e| e.value != 0.0).collect();

    // (weight in degree, max multiplicity) per cluster
    let mut slots: Vec<(usize, usize)> = nonzero_real.iter().map(|e| (1, e.multiplicity)).collect();
    slots.extend(spec.complex.iter().map(|e| (2, e.multiplicity)));
    let zero_range = if zero_mult > 0 { 1..=zero_mult } else { 0..=0 };

    let qmax = q.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut best: Option<(f64, RealFactorization)> = None;
    let mut choice = vec![0usize; slots.len()];
    for zero_roots in zero_range {
        let Some(target) = k.checked_sub(zero_roots) else {
            continue;
        };
        enumerate_multiplicities(&slots, target, 0, &mut choice, &mut |ch| {
            let fact = RealFactorization {
                constant: 0.0,
                linear: nonzero_real
                    .iter()
                    .zip(ch)
                    .map(|(e, &m)| (LinearFactor { rate: e.value }, m))
                    .collect(),
                quadratic: spec
                    .complex
                    .iter()
                    .zip(&ch[nonzero_real.len()..])
                    .map(|(e, &m)| (QuadraticFactor { re: e.re, im: e.im }, m))
                    .collect(),
                zero_roots,
            };
            let mut expanded = fact.expand();
            expanded.resize(k + 1, 0.0);
            let err = expanded
                .iter()
                .zip(q)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
                / qmax;
            if best.as_ref().is_none_or(|(e, _)| err < *e) {
                best = Some((err, fact));
            }
        });
    }

    let Some((residual, mut fact)) = best else {
        return Err(Error::InconsistentFactorization {
            residual: f64::INFINITY,
        });
    };
    if residual.is_nan() || residual > FACTOR_TOL {
        return Err(Error::InconsistentFactorization { residual });
    }
    fact.linear.sort_by(|a, b| a.0.root().total_cmp(&b.0.root()));
    let expanded = fact.expand();
    fact.constant = expanded[expanded.len() - 1];
    Ok(fact)
}

fn enumerate_multiplicities(
    slots: &[(usize, usize)],
    remaining: usize,
    idx: usize,
    choice: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if idx == slots.len() {
        if remaining == 0 {
            visit(choice);
        }
        return;
    }
    let min_rest: usize = slots[idx + 1..].iter().map(|(w, _)| w).sum();
    let (weight, max) = slots[idx];
    for m in 1..=max {
        let used = weight * m;
        if used + min_rest > remaining {
            break;
        }
        choice[idx] = m;
        enumerate_multiplicities(slots, remaining - used, idx + 1, choice, visit);
    }
}

/// Eigenvalues on the closed negative real axis, within an absolute band.
pub fn negative_axis_eigenvalues(spec: &Spectrum, band: f64) -> EigenList {
    EigenList(
        spec.raw
            .iter()
            .copied()
            .filter(|&(re, im)| im.abs() <= band && re <= band)
            .collect(),
    )
}
