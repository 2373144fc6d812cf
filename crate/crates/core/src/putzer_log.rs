//! Assembly of the logarithm from the closed-form coefficient functions.
//!
//! A [`PutzerPlan`] does the spectral and symbolic work for one matrix `A`
//! once. Evaluating the plan at `t` is then a cheap linear combination of the
//! cached powers `I, A, …, A^{k-1}` and yields `log(I - A t)`.
//!
//! [`logm`] plans on `B = I - A`, since `I - B t = (1 - t) I + t A` walks the
//! segment from `I` to `A` and reaches `A` at `t = 1`.

use alloc::vec::Vec;

use crate::closed_form::{antiderivative, build_integrands, ClosedFormFunction, RationalIntegrand};
use crate::error::{Error, Result};
use crate::matrix::{linear_combination, Matrix};
use crate::oracles::expm;
use crate::spectral::{
    characteristic_polynomial, domain_interval, eigenvalues, factor_reciprocal,
    minimal_polynomial, negative_axis_eigenvalues, reciprocal_polynomial, AnnihilatingPolynomial,
    DomainInterval, PolyKind, RealFactorization, Spectrum, DEFAULT_CLUSTER_TOL, DEFAULT_POLY_TOL,
};

/// Tunables shared by the library entry points and the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub kind: PolyKind,
    /// Relative residual for accepting a minimal-polynomial degree.
    pub poly_tol: f64,
    /// Relative radius for snapping and clustering eigenvalues.
    pub cluster_tol: f64,
    /// Relative band around the closed negative real axis that is rejected.
    pub axis_tol: f64,
    /// Compute `‖exp(X) - (I - A t)‖` for every result.
    pub residual: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            kind: PolyKind::Minimal,
            poly_tol: DEFAULT_POLY_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            axis_tol: 1e-9,
            residual: true,
        }
    }
}

/// Everything needed to evaluate `log(I - A t)` for many `t`.
#[derive(Debug, Clone)]
pub struct PutzerPlan {
    matrix: Matrix,
    polynomial: AnnihilatingPolynomial,
    spectrum: Spectrum,
    factorization: RealFactorization,
    integrands: Vec<RationalIntegrand>,
    functions: Vec<ClosedFormFunction>,
    domain: DomainInterval,
    powers: Vec<Matrix>,
    compute_residual: bool,
}

/// `log(I - A t)` together with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct LogResult {
    pub value: Matrix,
    pub t: f64,
    /// `‖exp(value) - (I - A t)‖∞ / ‖I - A t‖∞`, when requested.
    pub residual: Option<f64>,
    /// `‖p(A)‖∞ / ‖A‖∞^k` for the polynomial behind the plan.
    pub polynomial_residual: f64,
}

impl PutzerPlan {
    pub fn new(a: &Matrix, opts: &Options) -> Result<Self> {
        let spectrum = eigenvalues(a, opts.cluster_tol)?;
        let polynomial = match opts.kind {
            PolyKind::Characteristic => characteristic_polynomial(a),
            PolyKind::Minimal => minimal_polynomial(a, opts.poly_tol)?,
        };
        let factorization = factor_reciprocal(&reciprocal_polynomial(&polynomial), &spectrum)?;
        let integrands = build_integrands(&polynomial, &factorization)?;
        let functions = integrands
            .iter()
            .map(antiderivative)
            .collect::<Result<Vec<_>>>()?;
        let domain = domain_interval(&spectrum);
        let powers = a.powers(polynomial.degree());
        Ok(Self {
            matrix: a.clone(),
            polynomial,
            spectrum,
            factorization,
            integrands,
            functions,
            domain,
            powers,
            compute_residual: opts.residual,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn polynomial(&self) -> &AnnihilatingPolynomial {
        &self.polynomial
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn factorization(&self) -> &RealFactorization {
        &self.factorization
    }

    pub fn integrands(&self) -> &[RationalIntegrand] {
        &self.integrands
    }

    pub fn functions(&self) -> &[ClosedFormFunction] {
        &self.functions
    }

    pub fn domain(&self) -> DomainInterval {
        self.domain
    }

    /// `(f_1(t), …, f_k(t))`.
    pub fn coefficients(&self, t: f64) -> Result<Vec<f64>> {
        self.domain.check(t)?;
        self.functions.iter().map(|f| f.evaluate(t)).collect()
    }

    /// `log(I - A t) = Σ f_i(t) A^{i-1}`.
    pub fn eval(&self, t: f64) -> Result<LogResult> {
        let coeffs = self.coefficients(t)?;
        let value = linear_combination(&coeffs, &self.powers)?;
        let residual = if self.compute_residual {
            let target = self.matrix.identity_minus_scaled(t);
            let diff = expm(&value)?.sub(&target)?;
            Some(diff.norm_inf() / target.norm_inf())
        } else {
            None
        };
        Ok(LogResult {
            value,
            t,
            residual,
            polynomial_residual: self.polynomial.residual(&self.matrix),
        })
    }
}

pub fn plan(a: &Matrix, opts: &Options) -> Result<PutzerPlan> {
    PutzerPlan::new(a, opts)
}

pub fn eval_log_curve(plan: &PutzerPlan, t: f64) -> Result<LogResult> {
    plan.eval(t)
}

/// Rejects matrices with eigenvalues in the band around `(-∞, 0]`.
pub fn check_principal(a: &Matrix, opts: &Options) -> Result<()> {
    let spec = eigenvalues(a, opts.cluster_tol)?;
    let band = opts.axis_tol * a.norm_inf();
    let bad = negative_axis_eigenvalues(&spec, band);
    if bad.0.is_empty() {
        Ok(())
    } else {
        Err(Error::PrincipalLogUndefined { eigenvalues: bad })
    }
}

/// Plan on `I - A`, whose curve passes through `A` at `t = 1`.
pub fn segment_plan(a: &Matrix, opts: &Options) -> Result<PutzerPlan> {
    PutzerPlan::new(&a.identity_minus_scaled(1.0), opts)
}

/// The principal logarithm of `a`.
pub fn logm(a: &Matrix, opts: &Options) -> Result<LogResult> {
    check_principal(a, opts)?;
    let plan = segment_plan(a, opts)?;
    plan.domain().check(1.0)?;
    plan.eval(1.0)
}

/// `log((1 - t) I + t A)` at every requested `t`, sharing one plan.
pub fn segment_samples(a: &Matrix, ts: &[f64], opts: &Options) -> Result<Vec<LogResult>> {
    let plan = segment_plan(a, opts)?;
    ts.iter().map(|&t| plan.eval(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Endpoint;

    fn example_a() -> Matrix {
        Matrix::from_rows(&[[7.0, 4.0, -4.0], [4.0, 7.0, -4.0], [-1.0, -1.0, 4.0]]).unwrap()
    }

    fn example_log() -> Matrix {
        let b = example_a().identity_minus_scaled(1.0);
        let ln4 = libm::log(0.25);
        let f1 = libm::log(3.0) + 2.0 / 9.0 * ln4;
        let f2 = ln4 / 9.0;
        linear_combination(&[f1, f2], &b.powers(2)).unwrap()
    }

    fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
        a.sub(b).unwrap().max_abs()
    }

    #[test]
    fn plan_for_worked_example() {
        let plan = segment_plan(&example_a(), &Options::default()).unwrap();
        assert_eq!(plan.polynomial().degree(), 2);
        assert_eq!(plan.functions().len(), 2);
        let d = plan.domain();
        assert_eq!(d.hi, f64::INFINITY);
        assert!((d.lo + 1.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn plan_for_identity_and_zero() {
        let plan = PutzerPlan::new(&Matrix::identity(3), &Options::default()).unwrap();
        assert_eq!(plan.polynomial().degree(), 1);
        assert_eq!(plan.domain(), DomainInterval { lo: f64::NEG_INFINITY, hi: 1.0 });
        let r = plan.eval(0.5).unwrap();
        let expect = Matrix::identity(3).scaled(libm::log(0.5));
        assert!(max_diff(&r.value, &expect) < 1e-15);

        let plan = PutzerPlan::new(&Matrix::zeros(2), &Options::default()).unwrap();
        assert_eq!(plan.polynomial().degree(), 1);
        assert!(plan.functions()[0].is_zero());
        assert_eq!(plan.eval(3.0).unwrap().value, Matrix::zeros(2));
    }

    #[test]
    fn curve_at_zero_is_zero() {
        let plan = PutzerPlan::new(&example_a(), &Options::default()).unwrap();
        assert_eq!(plan.eval(0.0).unwrap().value, Matrix::zeros(3));
    }

    #[test]
    fn curve_scalar() {
        let plan = PutzerPlan::new(&Matrix::from_diag(&[4.0]), &Options::default()).unwrap();
        let r = plan.eval(0.2).unwrap();
        assert!((r.value[(0, 0)] - libm::log(0.2)).abs() < 1e-15);
        assert!(r.residual.unwrap() < 1e-14);
    }

    #[test]
    fn curve_domain_error_names_endpoint() {
        let plan = PutzerPlan::new(&example_a(), &Options::default()).unwrap();
        let err = plan.eval(1.0 / 12.0 + 1e-6).unwrap_err();
        assert!(matches!(
            err,
            Error::OutsideDomain { endpoint: Endpoint::Upper(hi), .. } if (hi - 1.0 / 12.0).abs() < 1e-14
        ));
        assert!(plan.eval(1.0 / 12.0 - 1e-3).is_ok());
    }

    #[test]
    fn logm_worked_example() {
        let r = logm(&example_a(), &Options::default()).unwrap();
        assert!(max_diff(&r.value, &example_log()) < 1e-12);
        assert!(r.residual.unwrap() < 1e-12);
        assert!(r.polynomial_residual < 1e-14);
    }

    #[test]
    fn logm_identity_and_diagonal() {
        let r = logm(&Matrix::identity(4), &Options::default()).unwrap();
        assert!(r.value.max_abs() < 1e-15);
        let e = libm::exp(1.0);
        let r = logm(&Matrix::from_diag(&[e, e * e]), &Options::default()).unwrap();
        assert!(max_diff(&r.value, &Matrix::from_diag(&[1.0, 2.0])) < 1e-14);
    }

    #[test]
    fn logm_rejects_negative_axis() {
        let err = logm(&Matrix::from_diag(&[-1.0]), &Options::default()).unwrap_err();
        match err {
            Error::PrincipalLogUndefined { eigenvalues } => assert_eq!(eigenvalues.0, [(-1.0, 0.0)]),
            other => panic!("unexpected {other:?}"),
        }
        let singular = Matrix::from_diag(&[0.0, 2.0]);
        assert!(matches!(
            logm(&singular, &Options::default()),
            Err(Error::PrincipalLogUndefined { .. })
        ));
    }

    #[test]
    fn segment_samples_examples() {
        let a = example_a();
        let opts = Options::default();
        let r = segment_samples(&a, &[0.0], &opts).unwrap();
        assert_eq!(r[0].value, Matrix::zeros(3));
        let r = segment_samples(&a, &[1.0], &opts).unwrap();
        assert!(max_diff(&r[0].value, &example_log()) < 1e-12);
        let t = 0.5;
        let f1 = 11.0 / 9.0 * libm::log(1.0 + 2.0 * t) - 2.0 / 9.0 * libm::log(1.0 + 11.0 * t);
        let f2 = libm::log((1.0 + 2.0 * t) / (1.0 + 11.0 * t)) / 9.0;
        let b = a.identity_minus_scaled(1.0);
        let expect = linear_combination(&[f1, f2], &b.powers(2)).unwrap();
        let r = segment_samples(&a, &[t], &opts).unwrap();
        assert!(max_diff(&r[0].value, &expect) < 1e-12);
    }

    #[test]
    fn residual_can_be_skipped() {
        let opts = Options {
            residual: false,
            ..Options::default()
        };
        assert_eq!(logm(&example_a(), &opts).unwrap().residual, None);
    }
}
