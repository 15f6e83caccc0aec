//! Deterministic text output: 12 significant digits, `.` decimal, `\n` line
//! endings.

use serde::Serialize;
use serde_json::Value;

/// Microseconds to the nanosecond output axis.
pub const NS_PER_US: f64 = 1000.0;

pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

/// Rounds `x` to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format_number(x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize to JSON");
    round_value(&mut v);
    let mut out = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    out.push('\n');
    out
}

/// In-memory CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Csv {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * self.header.len() * 20);
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|&x| if x.is_nan() { String::new() } else { format_number(x) })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_number(-8000.0), "-8.00000000000e3");
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
    }

    #[test]
    fn json_rounds_nested_floats() {
        let v = serde_json::json!({"a": [1.0f64 / 3.0], "b": {"c": 2}});
        assert_eq!(to_json(&v), "{\n  \"a\": [\n    0.333333333333\n  ],\n  \"b\": {\n    \"c\": 2\n  }\n}\n");
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(vec!["t_ns".into(), "x".into()]);
        csv.push(vec![0.0, 0.5]);
        csv.push(vec![1.0, f64::NAN]);
        assert_eq!(csv.render(), "t_ns,x\n0.00000000000e0,5.00000000000e-1\n1.00000000000e0,\n");
    }
}
