//! Independent numerical checks for the closed-form route.
//!
//! None of these share code with the partial-fraction path: the ODE solver
//! integrates the companion-matrix system directly, the quadrature samples the
//! integrands, and the series logarithm and exponential work on the matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::closed_form::RationalIntegrand;
use crate::error::{Error, Result};
use crate::matrix::{Lu, Matrix};
use crate::spectral::{companion_matrix, AnnihilatingPolynomial};

pub const DEFAULT_RTOL: f64 = 1e-10;
const MAX_ODE_STEPS: usize = 1_000_000;
const MAX_QUAD_INTERVALS: usize = 2000;

/// Integration grid of the coefficient ODE; `grid[0]` is `(0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub grid: Vec<(f64, Vec<f64>)>,
    /// Relative tolerance the step control targeted.
    pub tolerance: f64,
}

impl OdeSolution {
    pub fn final_state(&self) -> &[f64] {
        &self.grid.last().expect("grid is never empty").1
    }
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `(I - C t) x'(t) = -C e_1`, `x(0) = 0`, from `0` to `t_end` with
/// an adaptive Dormand–Prince pair. `C` is the companion matrix of `p`; for
/// `k ≥ 2` the right-hand side is `-e_2`.
///
/// The right-hand side does not depend on `x`, so the stages only need
/// `(I - C t)^{-1}` at the stage abscissae, each through an LU solve.
pub fn solve_putzer_ivp(p: &AnnihilatingPolynomial, t_end: f64, rtol: f64) -> Result<OdeSolution> {
    if rtol.is_nan() || rtol <= 0.0 || !t_end.is_finite() {
        return Err(Error::InvalidArgument("ODE needs positive rtol and finite t_end"));
    }
    let c = companion_matrix(p);
    let k = p.degree();
    let forcing: Vec<f64> = (0..k).map(|i| -c[(i, 0)]).collect();
    let rhs = |t: f64| -> Result<Vec<f64>> {
        Lu::factor(&c.identity_minus_scaled(t))
            .and_then(|lu| lu.solve_vec(&forcing))
            .map_err(|_| Error::StepSizeUnderflow { t })
    };

    let mut t = 0.0;
    let mut x = vec![0.0; k];
    let mut grid = vec![(t, x.clone())];
    if t_end == 0.0 {
        return Ok(OdeSolution {
            grid,
            tolerance: rtol,
        });
    }
    let dir = t_end.signum();
    let atol = rtol;
    let mut h = dir * (t_end.abs() * 1e-3).min(1e-2);
    let mut stages = vec![vec![0.0; k]; 7];
    let mut steps = 0;
    while (t_end - t) * dir > 0.0 {
        steps += 1;
        if steps > MAX_ODE_STEPS {
            return Err(Error::StepSizeUnderflow { t });
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }
        let mut ok = true;
        for (s, stage) in stages.iter_mut().enumerate() {
            match rhs(t + DP_C[s] * h) {
                Ok(v) => *stage = v,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            h *= 0.25;
            continue;
        }
        let mut x_new = x.clone();
        let mut err = 0.0f64;
        for i in 0..k {
            let mut hi5 = 0.0;
            let mut hi4 = 0.0;
            for s in 0..7 {
                hi5 += DP_B5[s] * stages[s][i];
                hi4 += DP_B4[s] * stages[s][i];
            }
            x_new[i] = x[i] + h * hi5;
            let scale = atol + rtol * x[i].abs().max(x_new[i].abs());
            err = err.max((h * (hi5 - hi4)).abs() / scale);
        }
        if err <= 1.0 {
            t += h;
            x = x_new;
            grid.push((t, x.clone()));
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
        };
        if !factor.is_finite() {
            h *= 0.2;
        } else {
            h *= factor;
        }
    }
    Ok(OdeSolution {
        grid,
        tolerance: rtol,
    })
}

/// `log(I - A t) = -Σ (A t)^m / m`, valid for `‖A t‖∞ < 0.9`.
pub fn series_log(a: &Matrix, t: f64, terms_cap: usize) -> Result<Matrix> {
    let x = a.scaled(t);
    let norm = x.norm_inf();
    if norm.is_nan() || norm >= 0.9 {
        return Err(Error::InvalidArgument("Mercator series requires ||A t|| < 0.9"));
    }
    let n = a.dim();
    let mut sum = Matrix::zeros(n);
    let mut power = x.clone();
    let mut last = 0.0;
    for m in 1..=terms_cap {
        let term = power.scaled(1.0 / m as f64);
        last = term.norm_inf();
        sum = sum.add(&term)?;
        if last <= 1e-14 * sum.norm_inf() || last == 0.0 {
            return Ok(sum.scaled(-1.0));
        }
        power = power.mul(&x)?;
    }
    Err(Error::SeriesDiverged {
        last_term_norm: last,
    })
}

/// Scaling and squaring around a degree-13 Taylor polynomial.
pub fn expm(x: &Matrix) -> Result<Matrix> {
    let n = x.dim();
    let norm = x.norm_inf();
    let mut squarings = 0i32;
    if norm > 0.5 {
        squarings = libm::ceil(libm::log2(norm / 0.5)) as i32;
    }
    if !norm.is_finite() || squarings > 1000 {
        return Err(Error::ExpOverflow { norm });
    }
    let y = x.scaled(libm::exp2(-f64::from(squarings)));
    let mut e = Matrix::identity(n);
    for j in (1..=13).rev() {
        e = y.mul(&e)?.scaled(1.0 / f64::from(j)).shifted(1.0);
    }
    for _ in 0..squarings {
        e = e.mul(&e)?;
        if !e.as_slice().iter().all(|v| v.is_finite()) {
            return Err(Error::ExpOverflow { norm });
        }
    }
    Ok(e)
}

// Gauss–Kronrod 7/15 nodes on [-1, 1] (non-negative half).
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_KRONROD: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// weights of the embedded Gauss rule, at GK_NODES[1], [3], [5], [7]
const GK_GAUSS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kron = GK_KRONROD[7] * fc;
    let mut gauss = GK_GAUSS[3] * fc;
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let pair = f(mid - dx) + f(mid + dx);
        kron += GK_KRONROD[j] * pair;
        if j % 2 == 1 {
            gauss += GK_GAUSS[j / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// `∫_0^t f(s) ds` by globally adaptive Gauss–Kronrod 7/15.
pub fn adaptive_quad(f: impl Fn(f64) -> f64, t: f64, rtol: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut intervals = vec![{
        let (v, e) = gauss_kronrod(&f, 0.0, t);
        (0.0, t, v, e)
    }];
    loop {
        let total: f64 = intervals.iter().map(|iv| iv.2).sum();
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if err <= rtol * total.abs().max(1.0) {
            return Ok(total);
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        if intervals.len() >= MAX_QUAD_INTERVALS {
            let (lo, hi, _, error) = intervals[worst];
            return Err(Error::QuadratureLimit { lo, hi, error });
        }
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        for (a, b) in [(lo, mid), (mid, hi)] {
            let (v, e) = gauss_kronrod(&f, a, b);
            intervals.push((a, b, v, e));
        }
    }
}

/// Numerical value of `∫_0^t r(s) ds`. The endpoints of the admissible
/// interval are never sampled because Gauss–Kronrod nodes are interior.
pub fn quad_integrand(r: &RationalIntegrand, t: f64, rtol: f64) -> Result<f64> {
    r.denominator.domain().check(t)?;
    adaptive_quad(|s| r.eval(s), t, rtol)
}
