//! Deterministic experiment reports: sorted keys, exact integers, and a
//! stable text rendering. Timing is carried alongside but kept out of the
//! serialized bytes so repeated runs with one seed stay byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use exact_linear::HomologyGroup;
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologySummary {
    pub fn from_group(h: &HomologyGroup) -> Result<Self, Error> {
        let torsion = h
            .torsion
            .iter()
            .map(|t| {
                t.try_into()
                    .map_err(|_| Error::Format(format!("torsion coefficient {} too large", t)))
            })
            .collect::<Result<Vec<u64>, _>>()?;
        Ok(HomologySummary {
            free_rank: h.free_rank,
            torsion,
        })
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyComparison {
    pub source: HomologySummary,
    pub target: HomologySummary,
}

impl HomologyComparison {
    pub fn agree(&self) -> bool {
        self.source == self.target
    }
}

/// One experiment's outcome: named pass/fail checks, per-table per-degree
/// homology comparisons, and witnesses for anything that failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub verdict: String,
    pub checks: BTreeMap<String, String>,
    pub tables: BTreeMap<String, BTreeMap<String, HomologyComparison>>,
    pub witnesses: BTreeMap<String, String>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Report {
            name: name.to_string(),
            verdict: "pass".into(),
            checks: BTreeMap::new(),
            tables: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            elapsed: None,
        }
    }

    /// Record a check; failures flip the verdict unless `advisory` marks the
    /// check as informational (hypothesis flags must not mask counterexamples).
    pub fn set_check(&mut self, name: &str, ok: bool, advisory: bool, witness: Option<String>) {
        self.checks
            .insert(name.to_string(), if ok { "pass" } else { "fail" }.into());
        if !ok {
            if !advisory {
                self.verdict = "fail".into();
            }
            if let Some(w) = witness {
                self.witnesses.insert(name.to_string(), w);
            }
        }
    }

    pub fn insert_row(&mut self, table: &str, degree: i64, row: HomologyComparison) {
        self.tables
            .entry(table.to_string())
            .or_default()
            .insert(degree.to_string(), row);
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "report: {}", self.name).unwrap();
        writeln!(out, "verdict: {}", self.verdict).unwrap();
        for (name, status) in &self.checks {
            writeln!(out, "check {}: {}", name, status).unwrap();
        }
        for (table, rows) in &self.tables {
            for (degree, row) in rows {
                writeln!(
                    out,
                    "homology {} degree {}: source {}, target {}",
                    table,
                    degree,
                    row.source.render(),
                    row.target.render()
                )
                .unwrap();
            }
        }
        for (name, witness) in &self.witnesses {
            writeln!(out, "witness {}: {}", name, witness).unwrap();
        }
        out
    }
}
