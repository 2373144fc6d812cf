//! Matrix file formats.
//!
//! Plain text: the first line holds `n`, followed by `n` lines of `n`
//! whitespace-separated numbers. Blank lines are ignored.
//!
//! JSON: an object `{"n": 3, "entries": [...]}` with the entries in row-major
//! order.

use std::io::Read;
use std::path::Path;

use putzer_logm::Matrix;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {source_name}: {error}")]
    Io {
        source_name: String,
        error: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}, field {field}: {message}")]
    Field {
        line: usize,
        field: usize,
        message: String,
    },
    #[error("JSON input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("dimension mismatch: n = {n} needs {expected} entries, found {found}")]
    Count {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("empty input")]
    Empty,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    n: usize,
    entries: Vec<f64>,
}

/// Reads a matrix from `path`, or from `stdin` when `path` is `None` or `-`.
pub fn read_matrix(path: Option<&Path>, stdin: &mut dyn Read) -> Result<Matrix, InputError> {
    let text = match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|error| InputError::Io {
                source_name: p.display().to_string(),
                error,
            })?
        }
        _ => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|error| InputError::Io {
                    source_name: String::from("standard input"),
                    error,
                })?;
            text
        }
    };
    parse_matrix(&text)
}

/// Parses either format, chosen by the first non-blank character.
pub fn parse_matrix(text: &str) -> Result<Matrix, InputError> {
    match text.trim_start().chars().next() {
        None => Err(InputError::Empty),
        Some('{') => parse_json(text),
        Some(_) => parse_plain(text),
    }
}

fn parse_json(text: &str) -> Result<Matrix, InputError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    if file.n == 0 {
        return Err(InputError::Parse {
            line: 1,
            message: String::from("n must be positive"),
        });
    }
    let expected = file.n * file.n;
    if file.entries.len() != expected {
        return Err(InputError::Count {
            n: file.n,
            expected,
            found: file.entries.len(),
        });
    }
    Ok(Matrix::from_row_major(file.n, file.entries).expect("entry count checked"))
}

fn parse_plain(text: &str) -> Result<Matrix, InputError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or(InputError::Empty)?;
    let n: usize = header.parse().map_err(|_| InputError::Parse {
        line: first,
        message: format!("expected the dimension n, found '{header}'"),
    })?;
    if n == 0 {
        return Err(InputError::Parse {
            line: first,
            message: String::from("n must be positive"),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    let mut last_line = first;
    for row in 0..n {
        let Some((line, content)) = lines.next() else {
            return Err(InputError::Count {
                n,
                expected: n * n,
                found: data.len(),
            });
        };
        last_line = line;
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != n {
            return Err(InputError::Parse {
                line,
                message: format!("row {} has {} entries, expected {n}", row + 1, fields.len()),
            });
        }
        for (j, field) in fields.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| InputError::Field {
                line,
                field: j + 1,
                message: format!("invalid number '{field}'"),
            })?;
            if !v.is_finite() {
                return Err(InputError::Field {
                    line,
                    field: j + 1,
                    message: format!("entry '{field}' is not finite"),
                });
            }
            data.push(v);
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(InputError::Parse {
            line,
            message: format!("unexpected content after the {n} rows ending on line {last_line}"),
        });
    }
    Ok(Matrix::from_row_major(n, data).expect("entry count checked"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_text_matrix() {
        let a = parse_matrix("3\n7 4 -4\n4 7 -4\n-1 -1 4\n").unwrap();
        assert_eq!(a.as_slice(), &[7.0, 4.0, -4.0, 4.0, 7.0, -4.0, -1.0, -1.0, 4.0]);
        let b = parse_matrix("1\n5\n").unwrap();
        assert_eq!(b.as_slice(), &[5.0]);
    }

    #[test]
    fn short_row_reports_its_line() {
        let e = parse_matrix("2\n1 2\n3\n").unwrap_err();
        assert!(matches!(e, InputError::Parse { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("row 2"));
    }

    #[test]
    fn bad_field_reports_its_position() {
        let e = parse_matrix("2\n1 2\n3 x\n").unwrap_err();
        assert!(matches!(e, InputError::Field { line: 3, field: 2, .. }), "{e}");
        let e = parse_matrix("1\nnan\n").unwrap_err();
        assert!(matches!(e, InputError::Field { line: 2, field: 1, .. }), "{e}");
    }

    #[test]
    fn missing_and_extra_rows() {
        assert!(matches!(
            parse_matrix("3\n1 2 3\n").unwrap_err(),
            InputError::Count { expected: 9, found: 3, .. }
        ));
        assert!(matches!(
            parse_matrix("1\n1\n2\n").unwrap_err(),
            InputError::Parse { line: 3, .. }
        ));
        assert!(matches!(parse_matrix("  \n"), Err(InputError::Empty)));
        assert!(matches!(parse_matrix("x\n"), Err(InputError::Parse { line: 1, .. })));
    }

    #[test]
    fn json_matrix() {
        let a = parse_matrix(r#"{"n": 2, "entries": [1, 2, 3, 4.5]}"#).unwrap();
        assert_eq!(a.as_slice(), &[1.0, 2.0, 3.0, 4.5]);
        assert!(matches!(
            parse_matrix(r#"{"n": 2, "entries": [1, 2, 3]}"#).unwrap_err(),
            InputError::Count { expected: 4, found: 3, .. }
        ));
        let e = parse_matrix("{\"n\": 2,\n \"entries\": [1, 2, \"x\", 4]}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }
}
