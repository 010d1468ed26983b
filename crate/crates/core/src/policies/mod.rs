//! Scheduling policies: the dynamic-quantum re-adjusted round robin
//! (DQRRR), classic round robin with a fixed quantum, FCFS and
//! non-preemptive SJF.

mod dqrrr;
mod fcfs;
mod median;
mod rr;
mod sjf;

use std::fmt;
use std::num::NonZeroU64;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{ProcessSpec, ScheduleTrace, Workload};

pub use dqrrr::schedule_dqrrr;
pub use fcfs::schedule_fcfs;
pub use median::{interleave_min_max, median_quantum};
pub use rr::schedule_rr;
pub use sjf::schedule_sjf;

/// Fixed quantum used for the round robin baseline unless overridden.
pub const DEFAULT_RR_QUANTUM: u64 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Dqrrr,
    Rr,
    Fcfs,
    Sjf,
}

impl PolicyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Dqrrr => "dqrrr",
            PolicyKind::Rr => "rr",
            PolicyKind::Fcfs => "fcfs",
            PolicyKind::Sjf => "sjf",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown policy `{0}` (expected fcfs, sjf, rr or dqrrr)")]
pub struct UnknownPolicy(pub String);

impl FromStr for PolicyKind {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dqrrr" => Ok(PolicyKind::Dqrrr),
            "rr" => Ok(PolicyKind::Rr),
            "fcfs" => Ok(PolicyKind::Fcfs),
            "sjf" => Ok(PolicyKind::Sjf),
            _ => Err(UnknownPolicy(s.to_string())),
        }
    }
}

/// A policy plus its parameters. The fixed quantum only matters for RR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    pub fixed_quantum: NonZeroU64,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind) -> Self {
        PolicyConfig {
            kind,
            fixed_quantum: NonZeroU64::new(DEFAULT_RR_QUANTUM).unwrap(),
        }
    }

    pub fn dqrrr() -> Self {
        Self::new(PolicyKind::Dqrrr)
    }

    pub fn rr(quantum: NonZeroU64) -> Self {
        PolicyConfig {
            kind: PolicyKind::Rr,
            fixed_quantum: quantum,
        }
    }

    pub fn fcfs() -> Self {
        Self::new(PolicyKind::Fcfs)
    }

    pub fn sjf() -> Self {
        Self::new(PolicyKind::Sjf)
    }

    pub fn label(&self) -> String {
        match self.kind {
            PolicyKind::Rr => format!("RR(q={})", self.fixed_quantum),
            PolicyKind::Dqrrr => "DQRRR".to_string(),
            PolicyKind::Fcfs => "FCFS".to_string(),
            PolicyKind::Sjf => "SJF".to_string(),
        }
    }
}

pub fn schedule(workload: &Workload, policy: &PolicyConfig) -> ScheduleTrace {
    match policy.kind {
        PolicyKind::Dqrrr => schedule_dqrrr(workload),
        PolicyKind::Rr => schedule_rr(workload, policy.fixed_quantum),
        PolicyKind::Fcfs => schedule_fcfs(workload),
        PolicyKind::Sjf => schedule_sjf(workload),
    }
}

/// Processes ordered by arrival, ties by pid.
fn arrival_order(workload: &Workload) -> Vec<ProcessSpec> {
    let mut procs = workload.processes().to_vec();
    procs.sort_by_key(|p| (p.arrival, p.pid));
    procs
}
