//! Closed-form coefficient functions.
//!
//! Each coefficient `f_i(t)` is `∫_0^t N_i(s) / q(s) ds` for a fixed numerator
//! `N_i` and the reciprocal polynomial `q`. The integrand is split into real
//! partial fractions over the factors of `q`, repeated quadratic factors are
//! peeled off by Hermite reduction, and what remains integrates to
//! logarithms and arctangents.
//!
//! Linear factors are kept in the form `1 - μ s` (rather than `s - 1/μ`), so a
//! logarithmic term reads `coef · ln|1 - μ s|` and vanishes at `s = 0`. The
//! two forms differ only by an additive constant.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::matrix::{Lu, Matrix};
use crate::poly;
use crate::spectral::{
    AnnihilatingPolynomial, DomainInterval, LinearFactor, QuadraticFactor, RealFactorization,
};

/// `N(s) / q(s)` for one coefficient function.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalIntegrand {
    /// 1-based position `i` of the coefficient function.
    pub index: usize,
    /// Ascending coefficients of `N`.
    pub numerator: Vec<f64>,
    pub denominator: RealFactorization,
}

impl RationalIntegrand {
    pub fn eval(&self, s: f64) -> f64 {
        poly::eval(&self.numerator, s) / self.denominator.eval(s)
    }
}

/// The `k` integrands of the coefficient functions.
///
/// With `c_0 = 1` the numerators are `c_k s^{k-1}` for `i = 1`, and
/// `-(s^{i-2} + c_1 s^{i-1} + … + c_{k-i} s^{k-2})` for `2 ≤ i ≤ k`. For
/// `k = 1` the single numerator is `c_1`, so that `f_1(t) = ln(1 + c_1 t)`.
///
/// The coefficients are taken from the factorization (re-expanded), which
/// keeps numerators and denominator consistent with each other.
pub fn build_integrands(
    p: &AnnihilatingPolynomial,
    fact: &RealFactorization,
) -> Result<Vec<RationalIntegrand>> {
    let k = p.degree();
    let c = fact.polynomial_coeffs();
    if c.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: c.len(),
        });
    }
    let coeff = |m: usize| if m == 0 { 1.0 } else { c[m - 1] };
    let mut out = Vec::with_capacity(k);
    for i in 1..=k {
        let numerator = if k == 1 {
            vec![c[0]]
        } else if i == 1 {
            let mut n = vec![0.0; k];
            n[k - 1] = coeff(k);
            n
        } else {
            let mut n = vec![0.0; k - 1];
            for m in 0..=(k - i) {
                n[m + i - 2] = -coeff(m);
            }
            n
        };
        out.push(RationalIntegrand {
            index: i,
            numerator,
            denominator: fact.clone(),
        });
    }
    Ok(out)
}

/// One elementary fraction of a real partial-fraction decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fraction {
    /// `coef / (1 - μ s)^power`
    Linear {
        coef: f64,
        factor: LinearFactor,
        power: usize,
    },
    /// `(num[0] + num[1] s) / Q(s)^power`
    Quadratic {
        num: [f64; 2],
        factor: QuadraticFactor,
        power: usize,
    },
}

impl Fraction {
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Fraction::Linear { coef, factor, power } => coef / powi(factor.eval(s), power),
            Fraction::Quadratic { num, factor, power } => {
                (num[0] + num[1] * s) / powi(factor.eval(s), power)
            }
        }
    }
}

/// Polynomial part plus elementary fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub polynomial: Vec<f64>,
    pub fractions: Vec<Fraction>,
}

impl PartialFractions {
    pub fn eval(&self, s: f64) -> f64 {
        poly::eval(&self.polynomial, s) + self.fractions.iter().map(|f| f.eval(s)).sum::<f64>()
    }
}

fn powi(x: f64, e: usize) -> f64 {
    libm::pow(x, e as f64)
}

/// Splits `N / q` into a polynomial part and fractions over the factors of `q`.
///
/// After long division the remainder is matched coefficient by coefficient
/// against `Σ a_j · q / F_j^e`, a square linear system solved by pivoted LU.
pub fn partial_fractions(r: &RationalIntegrand) -> Result<PartialFractions> {
    let fact = &r.denominator;
    let q = fact.expand();
    let d = fact.degree();
    let (polynomial, rem) = if d == 0 {
        (poly::trimmed(&r.numerator), Vec::new())
    } else {
        poly::div_rem(&r.numerator, &q)
    };
    if d == 0 || rem.iter().all(|&x| x == 0.0) {
        return Ok(PartialFractions {
            polynomial,
            fractions: Vec::new(),
        });
    }

    // Basis polynomials q / F^e, one column per unknown.
    let linear_pows: Vec<Vec<Vec<f64>>> = fact
        .linear
        .iter()
        .map(|(f, m)| (0..=*m).map(|e| poly::pow(&f.coeffs(), e)).collect())
        .collect();
    let quad_pows: Vec<Vec<Vec<f64>>> = fact
        .quadratic
        .iter()
        .map(|(f, m)| (0..=*m).map(|e| poly::pow(&f.coeffs(), e)).collect())
        .collect();
    let cofactor = |skip_lin: Option<(usize, usize)>, skip_quad: Option<(usize, usize)>| {
        let mut out = vec![1.0];
        for (j, (_, m)) in fact.linear.iter().enumerate() {
            let e = match skip_lin {
                Some((jj, e)) if jj == j => m - e,
                _ => *m,
            };
            out = poly::mul(&out, &linear_pows[j][e]);
        }
        for (j, (_, m)) in fact.quadratic.iter().enumerate() {
            let e = match skip_quad {
                Some((jj, e)) if jj == j => m - e,
                _ => *m,
            };
            out = poly::mul(&out, &quad_pows[j][e]);
        }
        out
    };

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut labels: Vec<Fraction> = Vec::with_capacity(d);
    for (j, (f, m)) in fact.linear.iter().enumerate() {
        for e in 1..=*m {
            columns.push(cofactor(Some((j, e)), None));
            labels.push(Fraction::Linear {
                coef: 0.0,
                factor: *f,
                power: e,
            });
        }
    }
    for (j, (f, m)) in fact.quadratic.iter().enumerate() {
        for e in 1..=*m {
            let base = cofactor(None, Some((j, e)));
            let shifted = poly::mul(&base, &[0.0, 1.0]);
            columns.push(base);
            columns.push(shifted);
            let frac = Fraction::Quadratic {
                num: [0.0, 0.0],
                factor: *f,
                power: e,
            };
            labels.push(frac);
            labels.push(frac);
        }
    }

    // Equilibrate columns and rows before factoring.
    let col_scale: Vec<f64> = columns
        .iter()
        .map(|c| nonzero(c.iter().fold(0.0f64, |m, x| m.max(x.abs()))))
        .collect();
    let mut entries = vec![0.0; d * d];
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate().take(d) {
            entries[i * d + j] = v / col_scale[j];
        }
    }
    let mut rhs = rem.clone();
    rhs.resize(d, 0.0);
    for i in 0..d {
        let row_scale = nonzero(entries[i * d..(i + 1) * d].iter().fold(0.0f64, |m, x| m.max(x.abs())));
        for v in &mut entries[i * d..(i + 1) * d] {
            *v /= row_scale;
        }
        rhs[i] /= row_scale;
    }
    let system = Matrix::from_row_major(d, entries)?;
    let lu = Lu::factor(&system).map_err(|e| match e {
        Error::Singular { pivot } => Error::SingularPartialFractions { pivot },
        other => other,
    })?;
    let x: Vec<f64> = lu
        .solve_vec(&rhs)?
        .iter()
        .zip(&col_scale)
        .map(|(v, s)| v / s)
        .collect();

    let mut fractions = Vec::with_capacity(labels.len());
    let mut j = 0;
    while j < labels.len() {
        match labels[j] {
            Fraction::Linear { factor, power, .. } => {
                fractions.push(Fraction::Linear {
                    coef: x[j],
                    factor,
                    power,
                });
                j += 1;
            }
            Fraction::Quadratic { factor, power, .. } => {
                fractions.push(Fraction::Quadratic {
                    num: [x[j], x[j + 1]],
                    factor,
                    power,
                });
                j += 2;
            }
        }
    }
    Ok(PartialFractions {
        polynomial,
        fractions,
    })
}

fn nonzero(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        1.0
    }
}

/// One additive piece of a closed-form antiderivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    /// `coef · ln|1 - μ s|`
    Log { coef: f64, factor: LinearFactor },
    /// `coef · ln Q(s)`
    QuadLog { coef: f64, factor: QuadraticFactor },
    /// `coef · atan((2 s + b) / √(4c - b²))` for the monic form `s² + b s + c` of `Q`
    Atan { coef: f64, factor: QuadraticFactor },
    /// `coef / (1 - μ s)^power`
    Rational {
        coef: f64,
        factor: LinearFactor,
        power: usize,
    },
    /// `(num[0] + num[1] s) / Q(s)^power`
    QuadRational {
        num: [f64; 2],
        factor: QuadraticFactor,
        power: usize,
    },
    /// `coef · s^power`
    Poly { coef: f64, power: usize },
}

fn atan_arg(f: &QuadraticFactor, s: f64) -> f64 {
    (f.modulus_sq() * s - f.re) / f.im
}

/// `ln(1 + x)` without cancellation near `x = 0`.
fn ln_1p_abs(x: f64) -> f64 {
    if x.abs() < 0.5 {
        libm::log1p(x)
    } else {
        libm::log((1.0 + x).abs())
    }
}

impl Term {
    /// Value of the term as written.
    pub fn eval(&self, s: f64) -> f64 {
        match *self {
            Term::Log { coef, factor } => coef * libm::log(factor.eval(s).abs()),
            Term::QuadLog { coef, factor } => coef * libm::log(factor.eval(s)),
            Term::Atan { coef, factor } => coef * libm::atan(atan_arg(&factor, s)),
            Term::Rational { coef, factor, power } => coef / powi(factor.eval(s), power),
            Term::QuadRational { num, factor, power } => {
                (num[0] + num[1] * s) / powi(factor.eval(s), power)
            }
            Term::Poly { coef, power } => coef * powi(s, power),
        }
    }

    /// `eval(s) - eval(0)`, computed without forming the two values separately
    /// where that would cancel.
    pub fn eval_from_zero(&self, s: f64) -> f64 {
        match *self {
            Term::Log { coef, factor } => coef * ln_1p_abs(-factor.rate * s),
            Term::QuadLog { coef, factor } => {
                let [_, c1, c2] = factor.coeffs();
                coef * ln_1p_abs(s * (c1 + s * c2))
            }
            Term::Atan { coef, factor } => {
                coef * (libm::atan(atan_arg(&factor, s)) - libm::atan(atan_arg(&factor, 0.0)))
            }
            Term::Rational { coef, factor, power } => {
                coef * (1.0 / powi(factor.eval(s), power) - 1.0)
            }
            Term::QuadRational { num, factor, power } => {
                (num[0] + num[1] * s) / powi(factor.eval(s), power) - num[0]
            }
            Term::Poly { coef, power } => coef * powi(s, power),
        }
    }

    fn order_key(&self) -> (u8, f64) {
        match self {
            Term::Log { factor, .. } => (0, factor.root()),
            Term::QuadLog { .. } => (1, 0.0),
            Term::Atan { .. } => (2, 0.0),
            Term::Rational { factor, .. } => (3, factor.root()),
            Term::QuadRational { .. } => (4, 0.0),
            Term::Poly { power, .. } => (5, *power as f64),
        }
    }
}

/// A coefficient function `f_i`: a sum of terms plus the constant that makes
/// it vanish at `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormFunction {
    pub terms: Vec<Term>,
    pub constant: f64,
    /// Parameters at which the function is defined.
    pub domain: DomainInterval,
}

impl ClosedFormFunction {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            constant: 0.0,
            domain: DomainInterval::ALL,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant == 0.0
    }

    /// `f(t)`; `f(0)` is exactly zero.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.domain.check(t)?;
        Ok(self.terms.iter().map(|term| term.eval_from_zero(t)).sum())
    }

    pub fn render(&self, style: RenderStyle) -> String {
        render(self, style)
    }
}

/// Antiderivatives of the fractions, anchored so the result vanishes at zero.
///
/// Repeated quadratic factors go through Hermite reduction: for `A / Q^e`
/// with `e ≥ 2` solve `B Q' + C Q = A`, emit the rational part
/// `-B / ((e-1) Q^{e-1})` and carry `(C + B'/(e-1)) / Q^{e-1}` down one power.
pub fn integrate_elementary(
    pf: &PartialFractions,
    domain: DomainInterval,
) -> Result<ClosedFormFunction> {
    let mut terms = Vec::new();
    for (j, &c) in pf.polynomial.iter().enumerate() {
        if c != 0.0 {
            terms.push(Term::Poly {
                coef: c / (j + 1) as f64,
                power: j + 1,
            });
        }
    }

    let mut quad_groups: Vec<(QuadraticFactor, Vec<[f64; 2]>)> = Vec::new();
    for frac in &pf.fractions {
        match *frac {
            Fraction::Linear { coef, factor, power } => {
                let mu = factor.rate;
                if power == 1 {
                    terms.push(Term::Log {
                        coef: -coef / mu,
                        factor,
                    });
                } else {
                    terms.push(Term::Rational {
                        coef: coef / (mu * (power - 1) as f64),
                        factor,
                        power: power - 1,
                    });
                }
            }
            Fraction::Quadratic { num, factor, power } => {
                let idx = match quad_groups.iter().position(|(f, _)| *f == factor) {
                    Some(i) => i,
                    None => {
                        quad_groups.push((factor, Vec::new()));
                        quad_groups.len() - 1
                    }
                };
                let nums = &mut quad_groups[idx].1;
                if nums.len() < power {
                    nums.resize(power, [0.0, 0.0]);
                }
                nums[power - 1][0] += num[0];
                nums[power - 1][1] += num[1];
            }
        }
    }

    for (factor, mut nums) in quad_groups {
        let [q0, q1, q2] = factor.coeffs();
        for e in (2..=nums.len()).rev() {
            let [u, v] = nums[e - 1];
            // unknowns (b0, b1, c0) of B = b0 + b1 s and C = c0
            let system = Matrix::from_rows(&[[q1, 0.0, q0], [2.0 * q2, q1, q1], [0.0, 2.0 * q2, q2]])?;
            let sol = Lu::factor(&system)?.solve_vec(&[u, v, 0.0])?;
            let (b0, b1, c0) = (sol[0], sol[1], sol[2]);
            let em1 = (e - 1) as f64;
            terms.push(Term::QuadRational {
                num: [-b0 / em1, -b1 / em1],
                factor,
                power: e - 1,
            });
            nums[e - 2][0] += c0 + b1 / em1;
        }
        let [u, v] = nums[0];
        let m = factor.modulus_sq();
        if v != 0.0 {
            terms.push(Term::QuadLog {
                coef: v / (2.0 * m),
                factor,
            });
        }
        let atan_coef = (u + v * factor.re / m) / factor.im;
        if atan_coef != 0.0 {
            terms.push(Term::Atan {
                coef: atan_coef,
                factor,
            });
        }
    }

    terms.sort_by(|a, b| {
        let (ka, ra) = a.order_key();
        let (kb, rb) = b.order_key();
        ka.cmp(&kb).then(ra.total_cmp(&rb))
    });
    let constant = -terms.iter().map(|t| t.eval(0.0)).sum::<f64>();
    Ok(ClosedFormFunction {
        terms,
        constant,
        domain,
    })
}

/// Partial fractions followed by termwise integration.
pub fn antiderivative(r: &RationalIntegrand) -> Result<ClosedFormFunction> {
    let pf = partial_fractions(r)?;
    integrate_elementary(&pf, r.denominator.domain())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    Plain,
    Latex,
}

/// Formats with 12 significant digits, trimming trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return String::from("0");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        String::from(s.trim_end_matches('0').trim_end_matches('.'))
    } else {
        String::from(s)
    }
}

/// Coefficient form: always carries a decimal point (`1.0`, `0.25`).
fn format_coef(x: f64) -> String {
    let s = format_sig(x);
    if s.contains(['.', 'e']) {
        s
    } else {
        format!("{s}.0")
    }
}

fn render_poly(coeffs: &[f64], style: RenderStyle) -> String {
    render_polynomial(coeffs, "t", style)
}

/// Renders the ascending coefficients `Σ c_j x^j` in the variable `var`.
pub fn render_polynomial(coeffs: &[f64], var: &str, style: RenderStyle) -> String {
    let mut out = String::new();
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let neg = c < 0.0;
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let var = match (j, style) {
            (0, _) => String::new(),
            (1, _) => String::from(var),
            (_, RenderStyle::Plain) => format!("{var}^{j}"),
            (_, RenderStyle::Latex) => format!("{var}^{{{j}}}"),
        };
        if j == 0 {
            out.push_str(&format_sig(mag));
        } else if mag == 1.0 {
            out.push_str(&var);
        } else {
            out.push_str(&format_sig(mag));
            if style == RenderStyle::Plain {
                out.push('*');
            }
            out.push_str(&var);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn render_power(base: &str, power: usize, style: RenderStyle) -> String {
    match (style, power) {
        (RenderStyle::Plain, 1) => format!("({base})"),
        (RenderStyle::Plain, _) => format!("({base})^{power}"),
        (RenderStyle::Latex, 1) => format!("\\left({base}\\right)"),
        (RenderStyle::Latex, _) => format!("\\left({base}\\right)^{{{power}}}"),
    }
}

/// Splits a term into its sign and the body printed after that sign.
fn render_term(term: &Term, style: RenderStyle) -> (bool, String) {
    let latex = style == RenderStyle::Latex;
    let mul = if latex { "" } else { "*" };
    let (ln, atan) = if latex {
        ("\\ln", "\\arctan")
    } else {
        ("ln", "atan")
    };
    let wrap = |s: &str| {
        if latex {
            format!("\\left({s}\\right)")
        } else {
            format!("({s})")
        }
    };
    match *term {
        Term::Log { coef, factor } => (
            coef < 0.0,
            format!(
                "{}{mul}{ln}{}",
                format_coef(coef.abs()),
                wrap(&render_poly(&factor.coeffs(), style))
            ),
        ),
        Term::QuadLog { coef, factor } => (
            coef < 0.0,
            format!(
                "{}{mul}{ln}{}",
                format_coef(coef.abs()),
                wrap(&render_poly(&factor.coeffs(), style))
            ),
        ),
        Term::Atan { coef, factor } => {
            let slope = factor.modulus_sq() / factor.im;
            let offset = -factor.re / factor.im;
            (
                coef < 0.0,
                format!(
                    "{}{mul}{atan}{}",
                    format_coef(coef.abs()),
                    wrap(&render_poly(&[offset, slope], style))
                ),
            )
        }
        Term::Rational { coef, factor, power } => {
            let den = render_power(&render_poly(&factor.coeffs(), style), power, style);
            let body = if latex {
                format!("\\frac{{{}}}{{{den}}}", format_coef(coef.abs()))
            } else {
                format!("{}/{den}", format_coef(coef.abs()))
            };
            (coef < 0.0, body)
        }
        Term::QuadRational { num, factor, power } => {
            let den = render_power(&render_poly(&factor.coeffs(), style), power, style);
            let numer = render_poly(&num, style);
            let body = if latex {
                format!("\\frac{{{numer}}}{{{den}}}")
            } else {
                format!("({numer})/{den}")
            };
            (false, body)
        }
        Term::Poly { coef, power } => {
            let var = match (power, latex) {
                (1, _) => String::from("t"),
                (_, false) => format!("t^{power}"),
                (_, true) => format!("t^{{{power}}}"),
            };
            (coef < 0.0, format!("{}{mul}{var}", format_coef(coef.abs())))
        }
    }
}

/// Deterministic text form: log terms by root, quadratic logs, arctangents,
/// rational terms, polynomial terms, then the constant if nonzero.
pub fn render(f: &ClosedFormFunction, style: RenderStyle) -> String {
    let mut pieces: Vec<(bool, String)> = f.terms.iter().map(|t| render_term(t, style)).collect();
    let constant = f.constant;
    if constant != 0.0 {
        pieces.push((constant < 0.0, format_coef(constant.abs())));
    }
    if pieces.is_empty() {
        return String::from("0");
    }
    let mut out = String::new();
    for (i, (neg, body)) in pieces.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let _ = write!(out, "{body}");
    }
    out
}
