//! Principal matrix logarithm by an explicit polynomial formula.
//!
//! For a real matrix `A` and an annihilating polynomial
//! `p(λ) = λ^k + c_1 λ^{k-1} + … + c_k`, the logarithm of every matrix on the
//! curve `I - A t` is a fixed linear combination of `I, A, …, A^{k-1}`:
//!
//! ```text
//! log(I - A t) = f_1(t) I + f_2(t) A + … + f_k(t) A^{k-1}
//! ```
//!
//! where each `f_i` is the integral over `[0, t]` of a rational function whose
//! denominator is the reciprocal polynomial `q(s) = 1 + c_1 s + … + c_k s^k`.
//! This crate builds those integrals in closed form (partial fractions plus
//! Hermite reduction) and assembles the logarithm from them. Independent
//! numerical oracles (an ODE integrator, adaptive quadrature, a Mercator
//! series and a scaling-and-squaring exponential) are provided for
//! verification.
//!
//! ```
//! use putzer_logm::{logm, Matrix, Options};
//!
//! let a = Matrix::from_rows(&[[7.0, 4.0, -4.0], [4.0, 7.0, -4.0], [-1.0, -1.0, 4.0]]).unwrap();
//! let log = logm(&a, &Options::default()).unwrap();
//! assert!(log.residual.unwrap() < 1e-12);
//! ```
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod closed_form;
mod error;
pub mod matrix;
pub mod oracles;
pub mod poly;
pub mod putzer_log;
pub mod spectral;

pub use closed_form::{ClosedFormFunction, RationalIntegrand, RenderStyle, Term};
pub use error::{EigenList, Endpoint, Error, Result};
pub use matrix::Matrix;
pub use putzer_log::{logm, segment_samples, LogResult, Options, PutzerPlan};
pub use spectral::{
    AnnihilatingPolynomial, DomainInterval, PolyKind, RealFactorization, Spectrum,
};
