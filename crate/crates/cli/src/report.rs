//! Rendering of records and check tables in the three output formats.

use std::fmt::Write as _;

use serde::Serialize;

use lucas_ez::sweep::format_float;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(x) => format_float(*x),
            Value::Text(s) => s.clone(),
        }
    }

    fn text(&self) -> String {
        match self {
            Value::Num(x) => short(*x),
            other => other.csv(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Value::Num(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Value::Text(s) => s.clone().into(),
        }
    }
}

/// Shortest round-trip form, in scientific notation for very small or large magnitudes.
pub fn short(x: f64) -> String {
    if x != 0.0 && x.is_finite() && !(1e-4..1e16).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

/// Named fields in display order.
pub type Record = Vec<(&'static str, Value)>;

/// Renders records sharing one schema: aligned `name  value` blocks,
/// a CSV table, or one JSON object per line.
pub fn render(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => {
            let width = records
                .iter()
                .flatten()
                .map(|(k, _)| k.len())
                .max()
                .unwrap_or(0);
            for (i, record) in records.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                for (k, v) in record {
                    let _ = writeln!(out, "{k:<width$}  {}", v.text());
                }
            }
        }
        Format::Csv => {
            if let Some(first) = records.first() {
                let header: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
                out.push_str(&header.join(","));
                out.push('\n');
            }
            for record in records {
                let row: Vec<String> = record.iter().map(|(_, v)| v.csv()).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Format::Json => {
            for record in records {
                let map: serde_json::Map<String, serde_json::Value> = record
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect();
                out.push_str(&serde_json::Value::Object(map).to_string());
                out.push('\n');
            }
        }
    }
    out
}

/// One pass/fail comparison of an estimate with its reference value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub estimate: f64,
    pub expected: f64,
    pub std_error: f64,
    /// Largest admissible `|estimate - expected|`.
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn record(&self) -> Record {
        vec![
            ("check", Value::Text(self.name.clone())),
            ("estimate", Value::Num(self.estimate)),
            ("expected", Value::Num(self.expected)),
            ("std_error", Value::Num(self.std_error)),
            ("bound", Value::Num(self.bound)),
            ("verdict", Value::Text(self.verdict().into())),
        ]
    }
}

/// Check table; text output is one aligned line per check.
pub fn render_checks(checks: &[Check], format: Format) -> String {
    if format != Format::Text {
        let records: Vec<Record> = checks.iter().map(Check::record).collect();
        return render(&records, format);
    }
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(
            out,
            "{:<width$}  estimate {:>24}  expected {:>24}  se {:>10.3e}  bound {:>10.3e}  {}",
            c.name,
            short(c.estimate),
            short(c.expected),
            c.std_error,
            c.bound,
            c.verdict()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Record> {
        vec![
            vec![("x", Value::Num(0.1)), ("label", Value::Text("a".into()))],
            vec![("x", Value::Num(-2.5e-20)), ("label", Value::Text("b".into()))],
        ]
    }

    #[test]
    fn csv_rendering() {
        assert_eq!(
            render(&sample(), Format::Csv),
            "x,label\n1.0000000000000001e-1,a\n-2.4999999999999999e-20,b\n"
        );
    }

    #[test]
    fn json_rendering_keeps_field_order() {
        assert_eq!(
            render(&sample(), Format::Json),
            "{\"x\":0.1,\"label\":\"a\"}\n{\"x\":-2.5e-20,\"label\":\"b\"}\n"
        );
    }

    #[test]
    fn text_rendering_aligns_names() {
        assert_eq!(render(&sample()[..1], Format::Text), "x      0.1\nlabel  a\n");
    }

    #[test]
    fn short_numbers() {
        assert_eq!(short(0.034592), "0.034592");
        assert_eq!(short(-2.7755575615628914e-17), "-2.7755575615628914e-17");
        assert_eq!(short(0.0), "0");
        assert_eq!(short(1e20), "1e20");
    }
}
