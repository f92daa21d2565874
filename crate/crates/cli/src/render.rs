//! JSON values and plain-text tables for command output.

use serde_json::Value;
use walkmat::json::int_value;
use walkmat::{ExactMatrix, IntPolynomial, Rational};

/// Integers as JSON numbers (strings past 53 bits); fractions as `"p/q"`.
pub fn rational(x: &Rational) -> Value {
    if x.is_integer() {
        int_value(&x.to_integer())
    } else {
        Value::String(x.to_string())
    }
}

pub fn matrix(m: &ExactMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(rational).collect())).collect())
}

/// Coefficients in ascending degree.
pub fn poly(p: &IntPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(int_value).collect())
}

/// Right-aligned columns, with an optional trailing label column.
pub fn table(m: &ExactMatrix, labels: Option<&[String]>) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| {
            let mut row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
            if let Some(l) = labels {
                row.push(l[i].clone());
            }
            row
        })
        .collect();
    let cols = cells.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols).map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn labels(one_based: &[usize]) -> Vec<String> {
    one_based.iter().map(|v| format!("v{v}")).collect()
}
