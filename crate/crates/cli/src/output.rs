//! Tabular payloads rendered as markdown, CSV or JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Markdown,
}

/// One table cell: the text shown in markdown/CSV and the full-precision
/// value used in JSON.
#[derive(Debug, Clone)]
pub struct Cell {
    pub text: String,
    pub raw: Value,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        let s = s.into();
        Self { raw: Value::String(s.clone()), text: s }
    }

    /// Number printed with `decimals` places.
    pub fn fixed(x: f64, decimals: usize) -> Self {
        Self { text: format!("{x:.decimals$}"), raw: number(x) }
    }

    /// Number printed with `digits` significant digits.
    pub fn sig(x: f64, digits: usize) -> Self {
        Self { text: significant(x, digits), raw: number(x) }
    }

    /// Number printed in scientific notation.
    pub fn sci(x: f64) -> Self {
        Self { text: format!("{x:.3e}"), raw: number(x) }
    }

    /// Shortest round-trip representation.
    pub fn exact(x: f64) -> Self {
        Self { text: format!("{x:?}"), raw: number(x) }
    }

    pub fn int(n: i64) -> Self {
        Self { text: n.to_string(), raw: json!(n) }
    }

    pub fn flag(b: bool) -> Self {
        Self { text: b.to_string(), raw: json!(b) }
    }
}

fn number(x: f64) -> Value {
    // JSON has no NaN/inf; those become strings.
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(format!("{x}")))
}

/// `x` rounded to `digits` significant digits, without exponent for
/// magnitudes in `[1e-4, 1e15)`.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&magnitude) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.9996 -> 10.000).
    let carried = s.parse::<f64>().is_ok_and(|v| v.abs() >= 10f64.powi(magnitude + 1));
    if carried && decimals > 0 {
        format!("{x:.*}", decimals - 1)
    } else {
        s
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

/// Everything a command prints. Wall-clock time is reported on stderr so that
/// stdout stays byte-identical across runs.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub parameters: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: String, parameters: Value, columns: &[&str]) -> Self {
        Self {
            command,
            parameters,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: OutputFormat, out: &mut impl Write) -> io::Result<()> {
        match format {
            OutputFormat::Markdown => self.markdown(out),
            OutputFormat::Csv => self.csv(out),
            OutputFormat::Json => self.json(out),
        }
    }

    fn markdown(&self, out: &mut impl Write) -> io::Result<()> {
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| r[j].text.chars().count())
                    .chain([self.columns[j].chars().count(), 3])
                    .max()
                    .unwrap_or(3)
            })
            .collect();
        let line = |cells: Vec<&str>, out: &mut dyn Write| -> io::Result<()> {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            writeln!(out, "| {} |", padded.join(" | "))
        };
        line(self.columns.iter().map(String::as_str).collect(), out)?;
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(rule.iter().map(String::as_str).collect(), out)?;
        for row in &self.rows {
            line(row.iter().map(|c| c.text.as_str()).collect(), out)?;
        }
        if !self.checks.is_empty() {
            let passed = self.checks.iter().filter(|c| c.passed).count();
            writeln!(out)?;
            writeln!(out, "{passed}/{} checks passed", self.checks.len())?;
        }
        Ok(())
    }

    fn csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.text.as_str()))?;
        }
        w.flush()
    }

    fn json(&self, out: &mut impl Write) -> io::Result<()> {
        let rows: Vec<Vec<&Value>> = self.rows.iter().map(|r| r.iter().map(|c| &c.raw).collect()).collect();
        let mut doc = json!({
            "command": self.command,
            "parameters": self.parameters,
            "columns": self.columns,
            "rows": rows,
        });
        if !self.checks.is_empty() {
            doc["checks"] = json!(self.checks);
            doc["passed"] = json!(self.all_passed());
        }
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(2.57413, 4), "2.574");
        assert_eq!(significant(13.2187, 4), "13.22");
        assert_eq!(significant(106.77, 4), "106.8");
        assert_eq!(significant(4241.6, 4), "4242");
        assert_eq!(significant(9.99996, 4), "10.00");
        assert_eq!(significant(-0.0123456, 3), "-0.0123");
        assert_eq!(significant(0.0, 4), "0");
    }

    #[test]
    fn non_finite_values_stay_valid_json() {
        assert_eq!(Cell::exact(f64::NAN).raw, Value::String("NaN".into()));
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut r = RunReport::new("x".into(), json!({}), &["a", "b"]);
        r.push(vec![Cell::text("1,2"), Cell::int(3)]);
        let mut buf = Vec::new();
        r.render(OutputFormat::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n\"1,2\",3\n");
    }
}
