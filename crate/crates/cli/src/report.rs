//! Report values: exact quantities as strings, floats rounded to 15
//! significant digits.

use blaschke::arith::GR;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::CliError;

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// A float as JSON; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(sig15(x))
    } else {
        Value::Null
    }
}

pub fn cnum(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn cpair(p: (Complex64, Complex64)) -> Value {
    json!([cnum(p.0), cnum(p.1)])
}

pub fn exact(x: &GR) -> Value {
    json!(x.to_string())
}

pub fn cell(x: f64) -> String {
    if x.is_finite() {
        sig15(x).to_string()
    } else {
        "NaN".into()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    /// Tabular view for `--format csv`, when the command has one.
    pub table: Option<Table>,
}

impl Report {
    pub fn render(&self, format: &str) -> Result<String, CliError> {
        match format {
            "csv" => match &self.table {
                Some(t) => t.to_csv(),
                None => Err(CliError::Validation {
                    code: "UnknownFormat".into(),
                    message: "this command has no csv output".into(),
                }),
            },
            _ => Ok(serde_json::to_string_pretty(&self.json).expect("report serializes") + "\n"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig15(std::f64::consts::PI), 3.14159265358979);
        assert_eq!(sig15(0.1 + 0.2), 0.3);
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(cell(2.0), "2");
    }

    #[test]
    fn csv_table() {
        let mut t = Table::new(&["a", "b"]);
        t.rows.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
