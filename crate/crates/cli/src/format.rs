//! Text and JSON rendering shared by the subcommands.

use putzer_logm::closed_form::{format_sig, render_polynomial};
use putzer_logm::{AnnihilatingPolynomial, DomainInterval, Matrix, PolyKind, RenderStyle};
use serde_json::{json, Value};

/// Rows of right-aligned entries at 12 significant digits.
pub fn matrix_block(m: &Matrix) -> String {
    let n = m.dim();
    let cells: Vec<String> = m.as_slice().iter().map(|&x| format_sig(x)).collect();
    let width = cells.iter().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<String> = cells[i * n..(i + 1) * n]
            .iter()
            .map(|c| format!("{c:>width$}"))
            .collect();
        out.push_str(&row.join("  "));
        out.push('\n');
    }
    out
}

pub fn matrix_json(m: &Matrix) -> Value {
    let n = m.dim();
    Value::from((0..n).map(|i| m.row(i).to_vec()).collect::<Vec<_>>())
}

/// Finite endpoints as numbers, infinite ones as `null`.
pub fn domain_json(d: DomainInterval) -> Value {
    let end = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
    json!({ "lo": end(d.lo), "hi": end(d.hi) })
}

pub fn kind_name(p: &AnnihilatingPolynomial) -> &'static str {
    match p.kind() {
        PolyKind::Minimal => "minimal",
        PolyKind::Characteristic => "characteristic",
    }
}

pub fn polynomial_json(p: &AnnihilatingPolynomial) -> Value {
    json!({
        "kind": kind_name(p),
        "fell_back": p.fell_back(),
        "degree": p.degree(),
        "coefficients": p.coeffs(),
    })
}

pub fn domain_text(d: DomainInterval, style: RenderStyle) -> String {
    let end = |x: f64| match (x.is_finite(), style) {
        (true, _) => format_sig(x),
        (false, RenderStyle::Plain) => String::from(if x > 0.0 { "inf" } else { "-inf" }),
        (false, RenderStyle::Latex) => String::from(if x > 0.0 { "\\infty" } else { "-\\infty" }),
    };
    format!("({}, {})", end(d.lo), end(d.hi))
}

/// Joins monomials in the given order with spaced signs.
fn join_monomials(coeffs: &[f64], order: impl Iterator<Item = usize>, var: &str, style: RenderStyle) -> String {
    let mut out = String::new();
    for j in order {
        let c = coeffs[j];
        if c == 0.0 {
            continue;
        }
        let mut mono = vec![0.0; j + 1];
        mono[j] = c.abs();
        let body = render_polynomial(&mono, var, style);
        match (out.is_empty(), c < 0.0) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (false, neg) => {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `λ^k + c_1 λ^{k-1} + … + c_k`, highest power first.
pub fn p_text(p: &AnnihilatingPolynomial, style: RenderStyle) -> String {
    let k = p.degree();
    let mut asc = vec![0.0; k + 1];
    asc[k] = 1.0;
    for (j, &c) in p.coeffs().iter().enumerate() {
        asc[k - 1 - j] = c;
    }
    let var = match style {
        RenderStyle::Plain => "λ",
        RenderStyle::Latex => "\\lambda",
    };
    join_monomials(&asc, (0..=k).rev(), var, style)
}

/// `1 + c_1 s + … + c_k s^k`, lowest power first.
pub fn q_text(q: &[f64], style: RenderStyle) -> String {
    join_monomials(q, 0..q.len(), "s", style)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_read_naturally() {
        let p = AnnihilatingPolynomial::new(vec![13.0, 22.0], PolyKind::Minimal).unwrap();
        assert_eq!(p_text(&p, RenderStyle::Plain), "λ^2 + 13*λ + 22");
        assert_eq!(p_text(&p, RenderStyle::Latex), "\\lambda^{2} + 13\\lambda + 22");
        assert_eq!(q_text(&[1.0, -1.0], RenderStyle::Plain), "1 - s");
        assert_eq!(q_text(&[1.0, 0.0, 0.0], RenderStyle::Plain), "1");
    }

    #[test]
    fn matrix_block_aligns_columns() {
        let m = Matrix::from_rows(&[[1.0, -0.5], [10.0, 2.0]]).unwrap();
        assert_eq!(matrix_block(&m), "   1  -0.5\n  10     2\n");
    }

    #[test]
    fn unbounded_domain() {
        assert_eq!(domain_text(DomainInterval::ALL, RenderStyle::Plain), "(-inf, inf)");
        assert_eq!(domain_json(DomainInterval::ALL), json!({"lo": null, "hi": null}));
    }
}
