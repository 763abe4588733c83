//! Structured check results.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub counterexamples: Vec<Value>,
    pub precision_used: u32,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            status: Status::Pass,
            counterexamples: Vec::new(),
            precision_used: 0,
            details: Map::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records a failure; failures dominate undecided outcomes.
    pub fn fail(&mut self, counterexample: Value) {
        self.status = Status::Fail;
        self.counterexamples.push(counterexample);
    }

    pub fn undecided(&mut self, note: Value) {
        if self.status == Status::Pass {
            self.status = Status::Undecided;
        }
        self.counterexamples.push(note);
    }

    pub fn used(&mut self, precision: u32) {
        self.precision_used = self.precision_used.max(precision);
    }

    pub fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.into(), value.into());
    }

    /// Combines sub-reports under one name.
    pub fn merge(check: impl Into<String>, parts: Vec<Report>) -> Report {
        let mut out = Report::new(check);
        for p in &parts {
            out.used(p.precision_used);
            match p.status {
                Status::Fail => out.status = Status::Fail,
                Status::Undecided if out.status == Status::Pass => out.status = Status::Undecided,
                _ => {}
            }
        }
        out.details.insert(
            "parts".into(),
            Value::Array(parts.into_iter().map(|p| serde_json::to_value(p).expect("report serializes")).collect()),
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_precedence() {
        let mut r = Report::new("x");
        r.undecided(json!("slow"));
        assert_eq!(r.status, Status::Undecided);
        r.fail(json!(1));
        r.undecided(json!("slow"));
        assert_eq!(r.status, Status::Fail);
        let m = Report::merge("all", vec![Report::new("a"), r]);
        assert_eq!(m.status, Status::Fail);
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"status\":\"fail\""));
    }
}
