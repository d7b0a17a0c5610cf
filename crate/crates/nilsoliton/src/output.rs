//! Deterministic machine output.
//!
//! JSON reports print every real at 17 significant digits through a custom
//! serde_json formatter, so identical inputs (and seeds) give byte-identical
//! output across runs.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::ser::Formatter;
use std::io;

struct SigDigits17;

impl Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        // 1 leading + 16 fractional digits = 17 significant digits
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to a JSON string with 17-significant-digit reals.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json writes utf-8"))
}

/// Matrix as rows of numbers (row-major), for reports.
pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn vector_list(v: &DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

/// Compact human-readable matrix for the text reports.
pub fn format_matrix(m: &DMatrix<f64>, indent: &str) -> String {
    let mut s = String::new();
    for i in 0..m.nrows() {
        s.push_str(indent);
        for j in 0..m.ncols() {
            s.push_str(&format!("{:>12.6} ", m[(i, j)]));
        }
        s.push('\n');
    }
    s
}

pub fn format_vector(v: &DVector<f64>) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_floats() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: f64,
        }
        let s = to_json_string(&S { a: 1.0, b: -0.07192051808952724 }).unwrap();
        assert_eq!(s, r#"{"a":1.0000000000000000e0,"b":-7.1920518089527240e-2}"#);
    }

    #[test]
    fn output_is_reproducible() {
        let v = vec![0.1 + 0.2, 1.0 / 3.0, 2.0f64.sqrt()];
        assert_eq!(to_json_string(&v).unwrap(), to_json_string(&v.clone()).unwrap());
    }
}
