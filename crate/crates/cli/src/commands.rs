use std::io::{Read, Write};
use std::path::Path;

use putzer_logm::closed_form::format_sig;
use putzer_logm::matrix::linear_combination;
use putzer_logm::oracles::{expm, quad_integrand, series_log, solve_putzer_ivp, DEFAULT_RTOL};
use putzer_logm::putzer_log::{check_principal, plan, segment_plan};
use putzer_logm::spectral::reciprocal_polynomial;
use putzer_logm::{DomainInterval, LogResult, Matrix, PutzerPlan, RenderStyle};
use serde_json::{json, Value};

use crate::format::*;
use crate::input::read_matrix;
use crate::{Cli, Command, Failure, Flags, EXIT_OK, EXIT_PRECONDITION, EXIT_VERIFICATION};

/// Distance kept from an open endpoint of the admissible interval.
const ENDPOINT_MARGIN: f64 = 1e-6;
/// Number of points in the `check` grid.
const CHECK_POINTS: usize = 9;
/// Largest ‖B t‖∞ for which the series oracle is run.
const SERIES_RADIUS: f64 = 0.9;

pub fn execute(
    cli: &Cli,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let f = &cli.flags;
    if !(f.tol > 0.0 && f.tol.is_finite()) {
        return Err(Failure::input("--tol must be a positive number"));
    }
    match &cli.command {
        Command::Logm { input } => logm(f, &load(input.as_deref(), stdin)?, out, err),
        Command::Curve {
            input,
            t_start,
            t_end,
            samples,
        } => {
            if !(t_start.is_finite() && t_end.is_finite()) {
                return Err(Failure::input("--t-start and --t-end must be finite"));
            }
            if *samples == 0 {
                return Err(Failure::input("--samples must be at least 1"));
            }
            if t_start > t_end || (*samples > 1 && t_start == t_end) {
                return Err(Failure::input("--t-start must be below --t-end"));
            }
            let a = load(input.as_deref(), stdin)?;
            curve(f, &a, *t_start, *t_end, *samples, out, err)
        }
        Command::Formula { input, raw } => formula(f, &load(input.as_deref(), stdin)?, *raw, out),
        Command::Check { input, rtol } => {
            if !(*rtol > 0.0 && rtol.is_finite()) {
                return Err(Failure::input("--rtol must be a positive number"));
            }
            check(f, &load(input.as_deref(), stdin)?, *rtol, out, err)
        }
    }
}

fn load(path: Option<&Path>, stdin: &mut dyn Read) -> Result<Matrix, Failure> {
    Ok(read_matrix(path, stdin)?)
}

fn style(f: &Flags) -> RenderStyle {
    if f.latex {
        RenderStyle::Latex
    } else {
        RenderStyle::Plain
    }
}

fn residual_json(r: &LogResult) -> Value {
    r.residual.map_or(Value::Null, |x| json!(x))
}

fn diagnostics(p: &PutzerPlan, r: Option<&LogResult>, err: &mut dyn Write) -> Result<(), Failure> {
    let poly = p.polynomial();
    writeln!(
        err,
        "polynomial: {}, degree {}{}",
        kind_name(poly),
        poly.degree(),
        if poly.fell_back() {
            " (minimal polynomial test failed, fell back)"
        } else {
            ""
        }
    )?;
    writeln!(err, "p(λ) = {}", p_text(poly, RenderStyle::Plain))?;
    writeln!(err, "D = {}", domain_text(p.domain(), RenderStyle::Plain))?;
    if let Some(r) = r {
        writeln!(err, "polynomial residual: {}", format_sig(r.polynomial_residual))?;
        match r.residual {
            Some(x) => writeln!(err, "residual: {}", format_sig(x))?,
            None => writeln!(err, "residual: skipped")?,
        }
    }
    Ok(())
}

fn logm(f: &Flags, a: &Matrix, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let opts = f.options();
    check_principal(a, &opts)?;
    let p = segment_plan(a, &opts)?;
    let r = p.eval(1.0)?;
    if f.json {
        let doc = json!({
            "value": matrix_json(&r.value),
            "t": r.t,
            "residual": residual_json(&r),
            "polynomial": polynomial_json(p.polynomial()),
            "domain": domain_json(p.domain()),
        });
        writeln!(out, "{doc}")?;
    } else {
        write!(out, "{}", matrix_block(&r.value))?;
    }
    if f.verbose {
        diagnostics(&p, Some(&r), err)?;
    }
    Ok(EXIT_OK)
}

/// `[start, end] ∩ D`, kept `ENDPOINT_MARGIN` away from open endpoints.
fn clip(d: DomainInterval, start: f64, end: f64) -> Option<(f64, f64)> {
    let lo = if d.lo.is_finite() {
        start.max(d.lo + ENDPOINT_MARGIN * d.lo.abs().max(1.0))
    } else {
        start
    };
    let hi = if d.hi.is_finite() {
        end.min(d.hi - ENDPOINT_MARGIN * d.hi.abs().max(1.0))
    } else {
        end
    };
    (lo <= hi).then_some((lo, hi))
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|j| {
            if j + 1 == count {
                hi
            } else {
                lo + (hi - lo) * j as f64 / (count - 1) as f64
            }
        })
        .collect()
}

fn curve(
    f: &Flags,
    a: &Matrix,
    start: f64,
    end: f64,
    samples: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let p = segment_plan(a, &f.options())?;
    let d = p.domain();
    let Some((lo, hi)) = clip(d, start, end) else {
        return Err(Failure {
            code: EXIT_PRECONDITION,
            message: format!(
                "requested range [{}, {}] does not meet the admissible interval D = {}",
                format_sig(start),
                format_sig(end),
                domain_text(d, RenderStyle::Plain)
            ),
        });
    };
    if samples > 1 && lo == hi {
        return Err(Failure {
            code: EXIT_PRECONDITION,
            message: format!(
                "requested range meets the admissible interval D = {} in a single point",
                domain_text(d, RenderStyle::Plain)
            ),
        });
    }
    if (lo, hi) != (start, end) {
        writeln!(
            err,
            "warning: requested range [{}, {}] truncated to [{}, {}]; admissible interval D = {}",
            format_sig(start),
            format_sig(end),
            format_sig(lo),
            format_sig(hi),
            domain_text(d, RenderStyle::Plain)
        )?;
    }
    let results = linspace(lo, hi, samples)
        .into_iter()
        .map(|t| p.eval(t))
        .collect::<Result<Vec<_>, _>>()?;
    let n = a.dim();
    if f.json {
        let rows: Vec<Value> = results
            .iter()
            .map(|r| json!({ "t": r.t, "value": matrix_json(&r.value), "residual": residual_json(r) }))
            .collect();
        let doc = json!({
            "polynomial": polynomial_json(p.polynomial()),
            "domain": domain_json(d),
            "samples": rows,
        });
        writeln!(out, "{doc}")?;
    } else {
        let mut header = vec![String::from("t")];
        for i in 0..n {
            for j in 0..n {
                header.push(if n > 10 {
                    format!("x{i}_{j}")
                } else {
                    format!("x{i}{j}")
                });
            }
        }
        writeln!(out, "{}", header.join(","))?;
        for r in &results {
            let mut row = vec![format_sig(r.t)];
            row.extend(r.value.as_slice().iter().map(|&x| format_sig(x)));
            writeln!(out, "{}", row.join(","))?;
        }
    }
    if f.verbose {
        diagnostics(&p, None, err)?;
        let worst = results.iter().filter_map(|r| r.residual).fold(0.0f64, f64::max);
        if f.options().residual {
            writeln!(err, "largest residual: {}", format_sig(worst))?;
        }
    }
    Ok(EXIT_OK)
}

fn formula(f: &Flags, a: &Matrix, raw: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let opts = f.options();
    let p = if raw { plan(a, &opts)? } else { segment_plan(a, &opts)? };
    let st = style(f);
    let q = reciprocal_polynomial(p.polynomial());
    let rendered: Vec<String> = p.functions().iter().map(|g| g.render(st)).collect();
    if f.json {
        let doc = json!({
            "matrix": if raw { "A" } else { "I - A" },
            "polynomial": polynomial_json(p.polynomial()),
            "reciprocal": q,
            "domain": domain_json(p.domain()),
            "functions": rendered,
        });
        writeln!(out, "{doc}")?;
        return Ok(EXIT_OK);
    }
    let k = rendered.len();
    let (lhs, base) = match (raw, st) {
        (true, RenderStyle::Plain) => ("log(I - tA)", "A"),
        (false, RenderStyle::Plain) => ("log((1-t)I + tA)", "B"),
        (true, RenderStyle::Latex) => ("\\log(I - tA)", "A"),
        (false, RenderStyle::Latex) => ("\\log((1-t)I + tA)", "B"),
    };
    let mut expansion = Vec::with_capacity(k);
    for i in 1..=k {
        let f_i = match st {
            RenderStyle::Plain => format!("f{i}(t)"),
            RenderStyle::Latex => format!("f_{{{i}}}(t)"),
        };
        expansion.push(match (i, st) {
            (1, _) => format!("{f_i} I"),
            (2, _) => format!("{f_i} {base}"),
            (_, RenderStyle::Plain) => format!("{f_i} {base}^{}", i - 1),
            (_, RenderStyle::Latex) => format!("{f_i} {base}^{{{}}}", i - 1),
        });
    }
    let (p_var, q_var) = match st {
        RenderStyle::Plain => ("p(λ)", "q(s)"),
        RenderStyle::Latex => ("p(\\lambda)", "q(s)"),
    };
    write!(out, "{lhs} = {}", expansion.join(" + "))?;
    if raw {
        writeln!(out)?;
    } else {
        writeln!(out, ", B = I - A")?;
    }
    writeln!(out, "{p_var} = {}", p_text(p.polynomial(), st))?;
    writeln!(out, "{q_var} = {}", q_text(&q, st))?;
    writeln!(out, "D = {}", domain_text(p.domain(), st))?;
    for (i, r) in rendered.iter().enumerate() {
        match st {
            RenderStyle::Plain => writeln!(out, "f{}(t) = {r}", i + 1)?,
            RenderStyle::Latex => writeln!(out, "f_{{{}}}(t) = {r}", i + 1)?,
        }
    }
    Ok(EXIT_OK)
}

/// Result of one oracle over the grid.
struct OracleReport {
    name: &'static str,
    points: usize,
    worst: f64,
    error: Option<String>,
}

impl OracleReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            points: 0,
            worst: 0.0,
            error: None,
        }
    }

    fn record(&mut self, d: f64) {
        self.points += 1;
        if d.is_nan() || d > self.worst {
            self.worst = d;
        }
    }

    fn fail(&mut self, e: impl ToString) {
        if self.error.is_none() {
            self.error = Some(e.to_string());
        }
    }

    fn passed(&self, rtol: f64) -> bool {
        self.error.is_none() && self.worst <= rtol
    }
}

fn rel(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(1.0)
}

/// Nine points across `D ∩ [-1, 1]`, pulled 1% of the width inside open endpoints.
fn check_grid(d: DomainInterval) -> Vec<f64> {
    let lo = d.lo.max(-1.0);
    let hi = d.hi.min(1.0);
    let w = hi - lo;
    let a = if d.lo > -1.0 { lo + 0.01 * w } else { lo };
    let b = if d.hi < 1.0 { hi - 0.01 * w } else { hi };
    linspace(a, b, CHECK_POINTS)
}

fn check(
    f: &Flags,
    a: &Matrix,
    rtol: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let p = segment_plan(a, &f.options())?;
    let b = p.matrix();
    let grid = check_grid(p.domain());
    let k = p.polynomial().degree();
    let mut ode = OracleReport::new("ode");
    let mut quad = OracleReport::new("quadrature");
    let mut series = OracleReport::new("series");
    let mut exp = OracleReport::new("exponential");
    let powers = b.powers(k);
    for &t in &grid {
        let closed = p.coefficients(t)?;
        let value = linear_combination(&closed, &powers)?;
        match solve_putzer_ivp(p.polynomial(), t, DEFAULT_RTOL) {
            Ok(sol) => {
                let d = closed
                    .iter()
                    .zip(sol.final_state())
                    .map(|(c, x)| rel(*c, *x))
                    .fold(0.0, f64::max);
                ode.record(d);
            }
            Err(e) => ode.fail(format!("t = {}: {e}", format_sig(t))),
        }
        let mut worst = 0.0f64;
        let mut failed = false;
        for (ig, c) in p.integrands().iter().zip(&closed) {
            match quad_integrand(ig, t, DEFAULT_RTOL) {
                Ok(v) => worst = worst.max(rel(*c, v)),
                Err(e) => {
                    quad.fail(format!("t = {}: {e}", format_sig(t)));
                    failed = true;
                    break;
                }
            }
        }
        if !failed {
            quad.record(worst);
        }
        if b.norm_inf() * t.abs() < SERIES_RADIUS {
            match series_log(b, t, 10_000) {
                Ok(s) => series.record(value.sub(&s)?.max_abs() / s.max_abs().max(1.0)),
                Err(e) => series.fail(format!("t = {}: {e}", format_sig(t))),
            }
        }
        match expm(&value) {
            Ok(e) => {
                let target = b.identity_minus_scaled(t);
                exp.record(e.sub(&target)?.norm_inf() / target.norm_inf());
            }
            Err(e) => exp.fail(format!("t = {}: {e}", format_sig(t))),
        }
        if f.verbose {
            let coeffs: Vec<String> = closed.iter().map(|&c| format_sig(c)).collect();
            writeln!(err, "t = {}: f = [{}]", format_sig(t), coeffs.join(", "))?;
        }
    }
    let reports = [ode, quad, series, exp];
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.points > 0 || r.error.is_some())
        .filter(|r| !r.passed(rtol))
        .map(|r| r.name)
        .collect();
    if f.json {
        let oracles: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "points": r.points,
                    "max_discrepancy": if r.points > 0 { json!(r.worst) } else { Value::Null },
                    "passed": r.points == 0 && r.error.is_none() || r.passed(rtol),
                    "error": r.error,
                })
            })
            .collect();
        let doc = json!({
            "grid": grid,
            "domain": domain_json(p.domain()),
            "rtol": rtol,
            "polynomial": polynomial_json(p.polynomial()),
            "oracles": oracles,
            "passed": failed.is_empty(),
        });
        writeln!(out, "{doc}")?;
    } else {
        writeln!(
            out,
            "{} points in [{}, {}], D = {}, rtol = {}",
            grid.len(),
            format_sig(grid[0]),
            format_sig(grid[grid.len() - 1]),
            domain_text(p.domain(), RenderStyle::Plain),
            format_sig(rtol)
        )?;
        writeln!(out, "{:<12} {:>6}  {:<20} status", "oracle", "points", "max discrepancy")?;
        for r in &reports {
            let (worst, status) = match (&r.error, r.points) {
                (Some(e), _) => (String::from("-"), format!("FAILED ({e})")),
                (None, 0) => (String::from("-"), String::from("not applicable")),
                (None, _) if r.passed(rtol) => (format_sig(r.worst), String::from("ok")),
                (None, _) => (format_sig(r.worst), String::from("FAILED")),
            };
            writeln!(out, "{:<12} {:>6}  {:<20} {status}", r.name, r.points, worst)?;
        }
    }
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "verification failed: {}", failed.join(", "))?;
        Ok(EXIT_VERIFICATION)
    }
}
