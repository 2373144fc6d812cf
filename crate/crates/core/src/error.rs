use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Which end of the admissible interval a parameter violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Lower(f64),
    Upper(f64),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Lower(v) => write!(f, "lower endpoint {v}"),
            Endpoint::Upper(v) => write!(f, "upper endpoint {v}"),
        }
    }
}

/// Eigenvalues listed in an error, as `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenList(pub Vec<(f64, f64)>);

impl fmt::Display for EigenList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (re, im)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if *im == 0.0 {
                write!(f, "{re}")?;
            } else if *im > 0.0 {
                write!(f, "{re}+{im}i")?;
            } else {
                write!(f, "{re}-{}i", -im)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is singular: pivot {pivot} below tolerance")]
    Singular { pivot: usize },

    #[error("QR iteration did not converge: subdiagonal entry ({row}, {col}) stuck after {iterations} iterations")]
    NoConvergence {
        row: usize,
        col: usize,
        iterations: usize,
    },

    #[error("spectrum and polynomial disagree: reconstruction residual {residual:e}")]
    InconsistentFactorization { residual: f64 },

    #[error("partial-fraction coefficient system is singular at pivot {pivot}; factorization does not match the denominator")]
    SingularPartialFractions { pivot: usize },

    #[error("t = {t} lies outside the admissible interval ({endpoint} violated)")]
    OutsideDomain { t: f64, endpoint: Endpoint },

    #[error("principal logarithm undefined: eigenvalues on the closed negative real axis: {eigenvalues}")]
    PrincipalLogUndefined { eigenvalues: EigenList },

    #[error("step size underflow in ODE integration at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("Mercator series did not converge: last term norm {last_term_norm:e}")]
    SeriesDiverged { last_term_norm: f64 },

    #[error("matrix exponential overflow: norm {norm:e} exceeds scaling range")]
    ExpOverflow { norm: f64 },

    #[error("quadrature subdivision limit reached; worst interval [{lo}, {hi}] with error estimate {error:e}")]
    QuadratureLimit { lo: f64, hi: f64, error: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
