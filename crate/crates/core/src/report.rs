//! Machine-readable result documents printed by the command-line tool.
//!
//! Field order is fixed by the struct layout and optional fields are omitted
//! when absent, so identical runs produce byte-identical JSON.

use serde::Serialize;

use crate::matching::{Allocation, ObstructionCertificate};
use crate::mindel::SolverStats;
use crate::profile::{Item, ItemSet, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The profile admits a proportional allocation as is.
    Proportional,
    /// The profile admits none; a certificate is attached.
    Obstructed,
    /// A minimum deletion set was found.
    Solved,
    /// No deletion set within the budget exists.
    NoSolution,
    /// The given deletion set is a solution.
    Valid,
    /// The given deletion set is not a solution.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bundle {
    pub agent: String,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotRef {
    pub agent: String,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub cuts: Vec<usize>,
    pub slots: Vec<SlotRef>,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Statistics {
    pub memo_entries: usize,
    pub memo_hits: usize,
    pub recursions: usize,
    pub obstructions: usize,
    pub max_branching: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl From<SolverStats> for Statistics {
    fn from(s: SolverStats) -> Self {
        Statistics {
            memo_entries: s.memo_entries,
            memo_hits: s.memo_hits,
            recursions: s.recursions,
            obstructions: s.obstructions,
            max_branching: s.max_branching,
            wall_ms: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultDocument {
    pub command: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<&'static str>,
    pub agents: usize,
    pub items: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deleted: Option<Vec<Item>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allocation: Option<Vec<Bundle>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Statistics>,
}

impl ResultDocument {
    pub fn new(command: &'static str, status: Status, profile: &Profile) -> Self {
        ResultDocument {
            command,
            status,
            method: None,
            agents: profile.n_agents(),
            items: profile.n_items(),
            k: None,
            decision: None,
            min_size: None,
            deleted: None,
            allocation: None,
            certificate: None,
            stats: None,
        }
    }

    pub fn with_allocation(mut self, profile: &Profile, allocation: &Allocation) -> Self {
        self.allocation = Some(
            allocation
                .bundles(profile.n_agents())
                .into_iter()
                .enumerate()
                .map(|(a, items)| Bundle {
                    agent: profile.agent_label(a).to_owned(),
                    items,
                })
                .collect(),
        );
        self
    }

    pub fn with_certificate(mut self, profile: &Profile, cert: &ObstructionCertificate) -> Self {
        self.certificate = Some(Certificate {
            cuts: cert.prefix.cuts().to_vec(),
            slots: cert
                .violating_slots
                .iter()
                .map(|s| SlotRef {
                    agent: profile.agent_label(s.agent).to_owned(),
                    index: s.index,
                })
                .collect(),
            items: cert.witness_items.iter().copied().collect(),
        });
        self
    }

    pub fn with_deleted(mut self, deleted: &ItemSet) -> Self {
        self.deleted = Some(deleted.iter().copied().collect());
        self
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents always serialize");
        out.push('\n');
        out
    }
}
