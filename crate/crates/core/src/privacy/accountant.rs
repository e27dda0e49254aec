use super::{zcdp_to_epsdelta, Disjointness, NoiseKind, PrivacyBudget};
use crate::error::Result;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// One charged release.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub round: usize,
    pub label: String,
    pub mechanism: NoiseKind,
    pub sensitivity: f64,
    pub scale: f64,
    pub parties: usize,
    pub disjointness: Disjointness,
    /// zCDP spent by this release after parallel composition over parties.
    #[serde(with = "super::finite_or_null")]
    pub zcdp_cost: f64,
    /// Pure ε spent, for Laplace and geometric releases.
    pub pure_eps: Option<f64>,
}

/// Sequential-composition ledger.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Accountant {
    entries: Vec<LedgerEntry>,
}

impl Accountant {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, entry: LedgerEntry) {
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of zCDP costs.
    pub fn total(&self) -> PrivacyBudget {
        PrivacyBudget::new(self.entries.iter().map(|e| e.zcdp_cost).sum())
            .expect("costs are nonnegative")
    }

    /// Sum of pure ε costs when every entry is a pure mechanism.
    pub fn pure_eps_total(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.pure_eps).sum()
    }

    /// Total of the entries charged since `mark` (an earlier `len()`).
    pub fn total_since(&self, mark: usize) -> PrivacyBudget {
        PrivacyBudget::new(self.entries[mark..].iter().map(|e| e.zcdp_cost).sum())
            .expect("costs are nonnegative")
    }

    pub(crate) fn append(&mut self, other: Accountant, round_offset: usize) {
        self.entries.extend(other.entries.into_iter().map(|mut e| {
            e.round += round_offset;
            e
        }));
    }

    /// Ledger with totals and the (ε, δ) conversion at `delta`.
    pub fn to_json(&self, delta: f64) -> Result<Value> {
        let total = self.total();
        let eps = zcdp_to_epsdelta(total, delta)?;
        Ok(json!({
            "entries": self.entries,
            "zcdp_total": if total.is_private() { json!(total.zcdp()) } else { Value::Null },
            "pure_eps_total": self.pure_eps_total().filter(|e| e.is_finite()),
            "private": total.is_private(),
            "conversion": {
                "delta": delta,
                "eps": if eps.is_finite() { json!(eps) } else { Value::Null },
            },
        }))
    }
}
