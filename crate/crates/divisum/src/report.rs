//! Report emission: CSV tables and the JSON experiment schema
//! {command, params, results, runtime_ms}, with stable key order and
//! floats printed at 12 significant digits.

use serde::Serialize;
use serde_json::Value;

/// One reported quantity. `predictor`, `tolerance` and `pass` are present
/// only when a formula or check applies.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub name: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predictor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl ResultRow {
    pub fn number(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value: json_f64(value),
            predictor: None,
            tolerance: None,
            pass: None,
        }
    }

    pub fn integer(name: impl Into<String>, value: u64) -> Self {
        Self {
            name: name.into(),
            value: Value::from(value),
            predictor: None,
            tolerance: None,
            pass: None,
        }
    }

    pub fn text(name: impl Into<String>, value: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value: Value::from(value.into()),
            predictor: None,
            tolerance: None,
            pass: None,
        }
    }

    pub fn flag(name: impl Into<String>, value: bool) -> Self {
        Self {
            name: name.into(),
            value: Value::from(value),
            predictor: None,
            tolerance: None,
            pass: None,
        }
    }

    pub fn with_predictor(mut self, p: f64) -> Self {
        self.predictor = Some(p);
        self
    }

    pub fn with_check(mut self, tolerance: f64, pass: bool) -> Self {
        self.tolerance = Some(tolerance);
        self.pass = Some(pass);
        self
    }
}

fn json_f64(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{v}")))
}

/// A full experiment report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub params: serde_json::Map<String, Value>,
    pub results: Vec<ResultRow>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            params: serde_json::Map::new(),
            results: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn push(&mut self, row: ResultRow) {
        self.results.push(row);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Generic CSV view: header then one line per result.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value,predictor,tolerance,pass\n");
        for row in &self.results {
            out.push_str(&csv_field(&row.name));
            out.push(',');
            out.push_str(&value_to_csv(&row.value));
            out.push(',');
            if let Some(p) = row.predictor {
                out.push_str(&fmt_sig(p, 12));
            }
            out.push(',');
            if let Some(t) = row.tolerance {
                out.push_str(&fmt_sig(t, 12));
            }
            out.push(',');
            if let Some(p) = row.pass {
                out.push_str(if p { "true" } else { "false" });
            }
            out.push('\n');
        }
        out
    }
}

/// A free-form CSV table for subcommands with their own column schema.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

fn value_to_csv(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => fmt_sig(f, 12),
            _ => n.to_string(),
        },
        Value::String(s) => csv_field(s),
        Value::Bool(b) => b.to_string(),
        other => csv_field(&other.to_string()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Formats with the given number of significant digits, plain decimal
/// notation in a sane exponent window, scientific outside it.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if mag >= sig as i32 || mag < -4 {
        format!("{:.*e}", sig - 1, x)
    } else {
        let decimals = (sig as i32 - 1 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(fmt_sig(0.44254, 12), "0.442540000000");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(123456.0, 6), "123456");
        assert_eq!(fmt_sig(1e20, 12), "1.00000000000e20");
        assert_eq!(fmt_sig(-2.5e-7, 3), "-2.50e-7");
    }

    #[test]
    fn csv_shape() {
        let mut r = Report::new("demo");
        r.param("n", 100);
        r.push(ResultRow::number("x", 1.5).with_predictor(1.0));
        r.push(ResultRow::text("form", "4*C2"));
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "name,value,predictor,tolerance,pass");
        assert_eq!(lines.next().unwrap(), "x,1.50000000000,1.00000000000,,");
        assert_eq!(lines.next().unwrap(), "form,4*C2,,,");
    }

    #[test]
    fn json_schema_keys_in_order() {
        let mut r = Report::new("demo");
        r.param("n", 5);
        r.push(ResultRow::number("v", 2.0).with_check(0.1, true));
        let js = r.to_json();
        let cmd = js.find("\"command\"").unwrap();
        let params = js.find("\"params\"").unwrap();
        let results = js.find("\"results\"").unwrap();
        let runtime = js.find("\"runtime_ms\"").unwrap();
        assert!(cmd < params && params < results && results < runtime);
        assert!(js.contains("\"tolerance\": 0.1"));
    }
}
