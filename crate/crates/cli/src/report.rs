//! Tabular reports with a config header, rendered as CSV or JSON.

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported but not counted as a failure.
    Flag,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flag => "FLAG",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::from_bool(ok), detail: detail.into() }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", self.status.label(), self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub config: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
    /// The underlying library report.
    pub record: Value,
}

impl Report {
    pub fn new(columns: &[&'static str], record: Value) -> Report {
        Report { columns: columns.to_vec(), record, ..Report::default() }
    }

    pub fn push_config(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.into(), value.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn summary(&self) -> String {
        let count = |s| self.checks.iter().filter(|c| c.status == s).count();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!("{verdict} ({} passed, {} failed", count(Status::Pass), count(Status::Fail));
        if count(Status::Flag) > 0 {
            line.push_str(&format!(", {} flagged", count(Status::Flag)));
        }
        line.push(')');
        line
    }

    pub fn config_line(&self) -> String {
        self.config
            .iter()
            .map(|(k, v)| if v.chars().any(char::is_whitespace) { format!("{k}=\"{v}\"") } else { format!("{k}={v}") })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_csv(&self, timestamp: Option<u64>) -> String {
        let mut out = format!("# config: {}\n", self.config_line());
        if let Some(t) = timestamp {
            out.push_str(&format!("# timestamp: {t}\n"));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields"));
        for c in &self.checks {
            out.push_str(&format!("# check: {}\n", c.line()));
        }
        out.push_str(&format!("# summary: {}\n", self.summary()));
        out
    }

    pub fn to_json(&self, timestamp: Option<u64>) -> String {
        let config: serde_json::Map<String, Value> = self.config.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let checks: Vec<Value> = self.checks.iter().map(|c| json!({ "name": c.name, "status": c.status.label(), "detail": c.detail })).collect();
        let mut v = json!({
            "config": config,
            "columns": self.columns,
            "rows": self.rows,
            "checks": checks,
            "summary": self.summary(),
            "record": self.record,
        });
        if let Some(t) = timestamp {
            v["timestamp"] = json!(t);
        }
        let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// Decimal rendering for empirical values.
pub fn dec(x: f64) -> String {
    format!("{x:.6}")
}
