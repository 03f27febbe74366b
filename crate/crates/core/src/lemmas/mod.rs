//! Constructive structure lemmas and their exhaustive checkers.

mod covering;
mod freiman;
mod injection;
mod sparse;
mod supersat;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use covering::{ruzsa_cover, sweep_covering, CoveringWitness};
pub use freiman::{freiman_3k4_check, sweep_freiman, FreimanCheck};
pub use injection::{pr_injection, sweep_injection, InjectionEntry, InjectionTable};
pub use sparse::{sparse_diagnostics, SparseDiagnostics};
pub use supersat::{
    interval_layouts, supersat_pairs, sweep_supersat, x_set, y_set, IntervalLayout, SupersatConfig,
    SupersatOutcome,
};

pub const SWEEP_CSV_HEADER: [&str; 4] = ["input", "applicable", "holds", "witness"];

const MAX_EXAMPLES: usize = 20;

/// One corpus element of a checker sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub input: String,
    pub applicable: bool,
    pub holds: bool,
    pub witness: String,
}

impl SweepRow {
    pub fn csv_record(&self) -> [String; 4] {
        [
            self.input.clone(),
            self.applicable.to_string(),
            self.holds.to_string(),
            self.witness.clone(),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub check: String,
    pub corpus: String,
    pub checked: u64,
    pub applicable: u64,
    pub violations: u64,
    /// The first few violating inputs.
    pub examples: Vec<String>,
    /// Check-specific tallies.
    pub counters: BTreeMap<String, u64>,
}

impl SweepSummary {
    pub fn new(check: &str, corpus: String) -> Self {
        SweepSummary {
            check: check.to_string(),
            corpus,
            ..Default::default()
        }
    }

    pub fn all_hold(&self) -> bool {
        self.violations == 0
    }

    pub(crate) fn record(&mut self, applicable: bool, holds: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if applicable {
            self.applicable += 1;
            if !holds {
                self.violations += 1;
                if self.examples.len() < MAX_EXAMPLES {
                    self.examples.push(describe());
                }
            }
        }
    }

    pub(crate) fn bump(&mut self, key: &str, by: u64) {
        *self.counters.entry(key.to_string()).or_default() += by;
    }

    /// Order-preserving merge: `self` then `other`.
    pub fn absorb(&mut self, other: SweepSummary) {
        self.checked += other.checked;
        self.applicable += other.applicable;
        self.violations += other.violations;
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(other.examples.into_iter().take(room));
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
    }
}
