//! Machine-readable report types. Everything here round-trips through JSON,
//! and timing is opt-in so default output stays byte-deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use matchsat::{EncodeFlags, SolveStats, SolveStatus, StructureReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    Sat,
    Unsat,
    BudgetExhausted,
}

impl Answer {
    pub fn from_status(status: &SolveStatus) -> Answer {
        match status {
            SolveStatus::Sat(_) => Answer::Sat,
            SolveStatus::Unsat => Answer::Unsat,
            SolveStatus::BudgetExhausted => Answer::BudgetExhausted,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Answer::Sat => "SAT",
            Answer::Unsat => "UNSAT",
            Answer::BudgetExhausted => "BUDGET EXHAUSTED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsBlock {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<f64>,
}

impl StatsBlock {
    pub fn new(stats: &SolveStats, timing: bool) -> StatsBlock {
        StatsBlock {
            decisions: stats.decisions,
            propagations: stats.propagations,
            conflicts: stats.conflicts,
            wall_ms: timing.then_some(stats.wall.as_secs_f64() * 1e3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance: String,
    pub k: u32,
    pub flags: EncodeFlags,
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matched: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index_table: Option<Vec<u32>>,
    pub stats: StatsBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: u32,
    pub answer: Answer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub instance: String,
    pub flags: EncodeFlags,
    pub rows: Vec<SweepRow>,
    pub max_sat_k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_max_matching: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub check_passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub instance: String,
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub flags: EncodeFlags,
    pub total_vars: u32,
    pub clauses_after_dedup: usize,
    /// Pre-deduplication emission tallies keyed by family label.
    pub family_counts: BTreeMap<String, usize>,
    pub structure: StructureReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    /// Edge-list document of the offending graph.
    pub graph: String,
    pub k: u32,
    pub flags: EncodeFlags,
    pub sat_answer: Answer,
    pub oracle_answer: bool,
    pub shrunk_graph: String,
    pub shrunk_k: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertFailureReport {
    pub graph: String,
    pub k: u32,
    pub flags: EncodeFlags,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub max_n: u32,
    pub instances: u64,
    pub agree_sat: u64,
    pub agree_unsat: u64,
    pub disagree: u64,
    pub certificate_failures: u64,
    /// Instances decided by propagation alone (zero branching decisions).
    pub propagation_decided: u64,
    /// Instances contributed by the edge-ordering sweep.
    pub ordering_instances: u64,
    pub discrepancies: Vec<DiscrepancyReport>,
    pub certificate_failure_details: Vec<CertFailureReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<f64>,
}

impl CorpusReport {
    pub fn clean(&self) -> bool {
        self.disagree == 0 && self.certificate_failures == 0
    }
}
