//! Verification reports: a flat list of named checks with their two sides.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub k: Option<i64>,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `lhs == rhs`.
    pub fn check_eq<T: Serialize + PartialEq>(&mut self, check: &str, k: Option<i64>, lhs: &T, rhs: &T) -> bool {
        self.record(check, k, lhs, rhs, lhs == rhs)
    }

    /// Records a relation whose truth the caller has already decided.
    pub fn record<A: Serialize, B: Serialize>(&mut self, check: &str, k: Option<i64>, lhs: &A, rhs: &B, ok: bool) -> bool {
        self.records.push(CheckRecord {
            check: check.to_string(),
            k,
            status: if ok { Status::Pass } else { Status::Fail },
            lhs: json(lhs),
            rhs: json(rhs),
        });
        ok
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    /// Plain-text table, one line per check.
    pub fn render_table(&self) -> String {
        let width = self.records.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  {:>4}  status\n", "check", "k");
        for r in &self.records {
            let k = r.k.map_or("-".to_string(), |k| k.to_string());
            let s = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!("{:<width$}  {:>4}  {s}\n", r.check, k));
        }
        let fails = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.records.len(), fails));
        out
    }
}
