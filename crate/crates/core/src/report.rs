//! Structured check reports: deterministic, machine-readable JSON plus a
//! markdown rendering for humans.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Informational record: no pass/fail semantics (e.g. fitted values).
    Info,
    /// A precondition failed, so the check was recorded but not asserted.
    Skipped,
}

/// One named check: a residual against a tolerance, anchored to the source
/// equation or statement it verifies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// Anchor string naming the verified statement (equation tag or claim).
    pub anchor: String,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_point: Option<Vec<f64>>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn residual(
        id: impl Into<String>,
        anchor: impl Into<String>,
        max_residual: f64,
        worst_point: Option<Vec<f64>>,
        tolerance: f64,
    ) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            max_residual,
            worst_point,
            tolerance,
            verdict: if max_residual <= tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            note: None,
        }
    }

    pub fn info(id: impl Into<String>, anchor: impl Into<String>, note: impl Into<String>) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            max_residual: 0.0,
            worst_point: None,
            tolerance: 0.0,
            verdict: Verdict::Info,
            note: Some(note.into()),
        }
    }

    pub fn skipped(
        id: impl Into<String>,
        anchor: impl Into<String>,
        note: impl Into<String>,
    ) -> Self {
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            max_residual: 0.0,
            worst_point: None,
            tolerance: 0.0,
            verdict: Verdict::Skipped,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        !matches!(self.verdict, Verdict::Fail)
    }
}

/// Aggregated report for one manifest run. Serialization is deterministic:
/// field order is fixed by declaration and records keep insertion order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub seed: u64,
    pub points: usize,
    pub tolerance: f64,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(name: impl Into<String>, seed: u64, points: usize, tolerance: f64) -> Self {
        Report {
            name: name.into(),
            seed,
            points,
            tolerance,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = CheckRecord>) {
        self.records.extend(records);
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# Report: {}\n\n", self.name));
        out.push_str(&format!(
            "seed {} · {} points · tolerance {:e}\n\n",
            self.seed, self.points, self.tolerance
        ));
        out.push_str("| verdict | check | anchor | max residual | tol |\n");
        out.push_str("|---|---|---|---|---|\n");
        for r in &self.records {
            let verdict = match r.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Info => "info",
                Verdict::Skipped => "skip",
            };
            out.push_str(&format!(
                "| {} | {} | {} | {:.3e} | {:.1e} |\n",
                verdict, r.id, r.anchor, r.max_residual, r.tolerance
            ));
            if let Some(note) = &r.note {
                out.push_str(&format!("| | | _{note}_ | | |\n"));
            }
        }
        let fails = self.failures().count();
        out.push_str(&format!(
            "\n{} checks, {} failed\n",
            self.records.len(),
            fails
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_from_residual() {
        let r = CheckRecord::residual("a", "eq", 1e-9, None, 1e-8);
        assert_eq!(r.verdict, Verdict::Pass);
        let r = CheckRecord::residual("a", "eq", 1e-7, None, 1e-8);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn json_is_stable() {
        let mut rep = Report::new("demo", 42, 100, 1e-8);
        rep.push(CheckRecord::residual(
            "check",
            "anchor",
            0.5,
            Some(vec![1.0, 2.0]),
            1e-8,
        ));
        assert_eq!(rep.to_json(), rep.to_json());
    }
}
