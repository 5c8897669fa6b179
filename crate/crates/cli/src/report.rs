use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use qsep_core::verify::{Check, CriterionReport};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub checks: Vec<Check>,
    pub wall_time: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub values: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub criteria: Vec<CriterionReport>,
    #[serde(skip)]
    start: Option<Instant>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
            wall_time: 0.0,
            passed: true,
            values: Map::new(),
            criteria: Vec::new(),
            start: Some(Instant::now()),
        }
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    pub fn finish(mut self) -> Self {
        self.wall_time = self.start.map_or(0.0, |s| s.elapsed().as_secs_f64());
        self.passed = self.checks.iter().all(|c| c.passed) && self.criteria.iter().all(CriterionReport::passed);
        self
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn emit(&self, json: bool) {
        let text = if json {
            let mut t = serde_json::to_string_pretty(self).expect("report serializes");
            t.push('\n');
            t
        } else {
            self.render()
        };
        // A closed pipe downstream is not an error worth reporting.
        let _ = std::io::stdout().lock().write_all(text.as_bytes());
    }

    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qsep {}: {}", self.command, if self.passed { "ok" } else { "FAILED" });
        for (k, v) in &self.values {
            let _ = match v {
                Value::String(s) => writeln!(out, "  {k} = {s}"),
                other => writeln!(out, "  {k} = {other}"),
            };
        }
        for path in &self.outputs {
            let _ = writeln!(out, "  wrote {}", path.display());
        }
        for c in &self.criteria {
            let _ = writeln!(out, "{}", c.summary_line());
            for check in &c.checks {
                render_check(&mut out, check);
            }
        }
        for check in &self.checks {
            render_check(&mut out, check);
        }
        let _ = writeln!(out, "  wall time {:.3} s", self.wall_time);
        out
    }
}

fn render_check(out: &mut String, c: &Check) {
    let status = if c.passed { "ok  " } else { "FAIL" };
    let detail = c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
    let _ = writeln!(out, "    [{status}] {}: measured {:e}, tolerance {:e}{detail}", c.name, c.measured, c.tolerance);
}
