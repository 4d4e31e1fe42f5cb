//! Verification ledger: each checked bound becomes one entry pairing the
//! computed value with its closed-form counterpart.

use serde::{Deserialize, Serialize};

/// Comparison direction of a ledger entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "==")]
    Eq,
}

/// One verified bound: `lhs <relation> rhs` within `tolerance`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundEntry {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub tolerance: f64,
    /// Signed margin; an entry passes iff `slack >= -tolerance`.
    pub slack: f64,
    pub pass: bool,
    /// Informational entries record known discrepancies and never gate.
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundEntry {
    pub fn new(
        id: impl Into<String>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        tolerance: f64,
        required: bool,
    ) -> Self {
        let slack = match relation {
            Relation::Ge => lhs - rhs,
            Relation::Le => rhs - lhs,
            Relation::Eq => -(lhs - rhs).abs(),
        };
        Self {
            id: id.into(),
            lhs,
            rhs,
            relation,
            tolerance,
            slack,
            pass: slack >= -tolerance,
            required,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Full ledger, serialized with a schema version.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema: u32,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn new() -> Self {
        Self { schema: 1, entries: Vec::new() }
    }

    pub fn push(&mut self, entry: BoundEntry) {
        self.entries.push(entry);
    }

    pub fn ge(&mut self, id: &str, lhs: f64, rhs: f64, tol: f64, required: bool) -> &mut BoundEntry {
        self.push(BoundEntry::new(id, lhs, rhs, Relation::Ge, tol, required));
        self.entries.last_mut().unwrap()
    }

    pub fn le(&mut self, id: &str, lhs: f64, rhs: f64, tol: f64, required: bool) -> &mut BoundEntry {
        self.push(BoundEntry::new(id, lhs, rhs, Relation::Le, tol, required));
        self.entries.last_mut().unwrap()
    }

    pub fn eq(&mut self, id: &str, lhs: f64, rhs: f64, tol: f64, required: bool) -> &mut BoundEntry {
        self.push(BoundEntry::new(id, lhs, rhs, Relation::Eq, tol, required));
        self.entries.last_mut().unwrap()
    }

    pub fn all_required_pass(&self) -> bool {
        self.entries.iter().filter(|e| e.required).all(|e| e.pass)
    }

    pub fn failed_required(&self) -> Vec<&BoundEntry> {
        self.entries.iter().filter(|e| e.required && !e.pass).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_fail_and_slack() {
        let e = BoundEntry::new("a", 1.0, 0.5, Relation::Ge, 1e-9, true);
        assert!(e.pass);
        assert!((e.slack - 0.5).abs() < 1e-15);

        let e = BoundEntry::new("b", 0.5, 1.0, Relation::Ge, 1e-9, true);
        assert!(!e.pass);

        let e = BoundEntry::new("c", 1.0 + 5e-10, 1.0, Relation::Eq, 1e-9, true);
        assert!(e.pass);
        let e = BoundEntry::new("d", 1.0 + 5e-9, 1.0, Relation::Eq, 1e-9, true);
        assert!(!e.pass);
    }

    #[test]
    fn report_gating_ignores_informational() {
        let mut r = BoundReport::new();
        r.ge("ok", 1.0, 0.0, 1e-9, true);
        r.eq("known-discrepancy", 1.0, 2.0, 1e-9, false);
        assert!(r.all_required_pass());
        r.le("broken", 2.0, 1.0, 1e-9, true);
        assert!(!r.all_required_pass());
        assert_eq!(r.failed_required().len(), 1);

        let json = r.to_json();
        assert!(json.contains("\"schema\": 1"));
        assert!(json.contains("\">=\""));
    }
}
