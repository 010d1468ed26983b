//! Domain types shared by every policy: processes, workloads, time slices
//! and the schedule trace a simulation produces.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::policies::{self, PolicyConfig};

/// Simulation time in integer ticks.
pub type Tick = u64;

/// Process identifier. Always positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pid(u32);

impl Pid {
    pub fn new(raw: u32) -> Result<Self, ModelError> {
        if raw == 0 {
            return Err(ModelError::ZeroPid);
        }
        Ok(Pid(raw))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Pid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("pid must be a positive integer")]
    ZeroPid,
    #[error("pid {0} out of range")]
    PidOutOfRange(i64),
    #[error("{pid}: burst must be >= 1, got {burst}")]
    NonPositiveBurst { pid: Pid, burst: i64 },
    #[error("{pid}: arrival must be >= 0, got {arrival}")]
    NegativeArrival { pid: Pid, arrival: i64 },
    #[error("duplicate pid {0}")]
    DuplicatePid(Pid),
    #[error("workload must contain at least one process")]
    EmptyWorkload,
}

/// One process of a workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessSpec {
    pub pid: Pid,
    pub arrival: Tick,
    pub burst: Tick,
}

impl ProcessSpec {
    pub fn new(pid: Pid, arrival: Tick, burst: Tick) -> Result<Self, ModelError> {
        if burst == 0 {
            return Err(ModelError::NonPositiveBurst { pid, burst: 0 });
        }
        Ok(ProcessSpec {
            pid,
            arrival,
            burst,
        })
    }

    /// Validates raw signed fields, as read from a file or the command line.
    pub fn from_signed(pid: i64, arrival: i64, burst: i64) -> Result<Self, ModelError> {
        let raw = u32::try_from(pid).map_err(|_| ModelError::PidOutOfRange(pid))?;
        let pid = Pid::new(raw)?;
        if arrival < 0 {
            return Err(ModelError::NegativeArrival { pid, arrival });
        }
        if burst < 1 {
            return Err(ModelError::NonPositiveBurst { pid, burst });
        }
        Ok(ProcessSpec {
            pid,
            arrival: arrival as Tick,
            burst: burst as Tick,
        })
    }
}

/// Where a workload came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    File {
        path: String,
    },
    Generated {
        params: String,
        seed: u64,
        algorithm: String,
    },
    PaperTable {
        id: String,
    },
    Inline,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::File { path } => write!(f, "file:{path}"),
            Provenance::Generated {
                params,
                seed,
                algorithm,
            } => write!(f, "generated:{params} seed={seed} algorithm={algorithm}"),
            Provenance::PaperTable { id } => write!(f, "table:{id}"),
            Provenance::Inline => f.write_str("inline"),
        }
    }
}

/// A validated, non-empty set of processes with unique pids. Input order is kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Workload {
    processes: Vec<ProcessSpec>,
    provenance: Provenance,
}

impl Workload {
    pub fn processes(&self) -> &[ProcessSpec] {
        &self.processes
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.processes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.processes.is_empty()
    }

    pub fn get(&self, pid: Pid) -> Option<&ProcessSpec> {
        self.processes.iter().find(|p| p.pid == pid)
    }

    pub fn total_burst(&self) -> Tick {
        self.processes.iter().map(|p| p.burst).sum()
    }
}

pub fn build_workload(
    specs: Vec<ProcessSpec>,
    provenance: Provenance,
) -> Result<Workload, ModelError> {
    if specs.is_empty() {
        return Err(ModelError::EmptyWorkload);
    }
    let mut seen = HashSet::with_capacity(specs.len());
    for spec in &specs {
        if spec.burst == 0 {
            return Err(ModelError::NonPositiveBurst {
                pid: spec.pid,
                burst: 0,
            });
        }
        if !seen.insert(spec.pid) {
            return Err(ModelError::DuplicatePid(spec.pid));
        }
    }
    Ok(Workload {
        processes: specs,
        provenance,
    })
}

/// One dispatch of a process over `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeSlice {
    pub pid: Pid,
    pub start: Tick,
    pub end: Tick,
}

impl TimeSlice {
    pub fn len(&self) -> Tick {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// The complete output of one simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleTrace {
    pub slices: Vec<TimeSlice>,
    /// One quantum per round for quantum-based policies, empty otherwise.
    pub quantum_sequence: Vec<Tick>,
    pub completion: BTreeMap<Pid, Tick>,
    pub workload: Workload,
    pub policy_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceViolation {
    #[error("slice {index} has non-positive length")]
    EmptySlice { index: usize },
    #[error("slice {index} overlaps or precedes slice {}", index - 1)]
    Overlap { index: usize },
    #[error("{pid} dispatched at {start} before its arrival at {arrival}")]
    BeforeArrival {
        pid: Pid,
        start: Tick,
        arrival: Tick,
    },
    #[error("{pid} received {got} ticks, burst is {burst}")]
    Conservation { pid: Pid, got: Tick, burst: Tick },
    #[error("{0} appears in the trace but not in the workload")]
    UnknownPid(Pid),
    #[error("completion of {pid} is {recorded:?}, last slice ends at {actual}")]
    Completion {
        pid: Pid,
        recorded: Option<Tick>,
        actual: Tick,
    },
    #[error("CPU idle over [{from}, {to}) while {pid} was ready")]
    IdleWhileReady { from: Tick, to: Tick, pid: Pid },
    #[error("first slice starts at {start}, earliest arrival is {arrival}")]
    LateStart { start: Tick, arrival: Tick },
}

impl ScheduleTrace {
    pub fn makespan(&self) -> Tick {
        self.slices.last().map_or(0, |s| s.end)
    }

    /// Idle intervals between consecutive slices, plus any leading gap from tick 0.
    pub fn idle_gaps(&self) -> Vec<(Tick, Tick)> {
        let mut gaps = Vec::new();
        let mut clock = 0;
        for s in &self.slices {
            if s.start > clock {
                gaps.push((clock, s.start));
            }
            clock = s.end;
        }
        gaps
    }

    /// Checks chronology, conservation of work, arrival order, completion
    /// bookkeeping and work conservation.
    pub fn validate(&self) -> Result<(), TraceViolation> {
        let mut served: BTreeMap<Pid, Tick> = BTreeMap::new();
        let mut last_end: BTreeMap<Pid, Tick> = BTreeMap::new();
        for (index, s) in self.slices.iter().enumerate() {
            if s.end <= s.start {
                return Err(TraceViolation::EmptySlice { index });
            }
            if index > 0 && self.slices[index - 1].end > s.start {
                return Err(TraceViolation::Overlap { index });
            }
            let spec = self
                .workload
                .get(s.pid)
                .ok_or(TraceViolation::UnknownPid(s.pid))?;
            if s.start < spec.arrival {
                return Err(TraceViolation::BeforeArrival {
                    pid: s.pid,
                    start: s.start,
                    arrival: spec.arrival,
                });
            }
            *served.entry(s.pid).or_default() += s.len();
            last_end.insert(s.pid, s.end);
        }
        for spec in self.workload.processes() {
            let got = served.get(&spec.pid).copied().unwrap_or(0);
            if got != spec.burst {
                return Err(TraceViolation::Conservation {
                    pid: spec.pid,
                    got,
                    burst: spec.burst,
                });
            }
            let actual = last_end[&spec.pid];
            let recorded = self.completion.get(&spec.pid).copied();
            if recorded != Some(actual) {
                return Err(TraceViolation::Completion {
                    pid: spec.pid,
                    recorded,
                    actual,
                });
            }
        }
        let earliest = self
            .workload
            .processes()
            .iter()
            .map(|p| p.arrival)
            .min()
            .unwrap_or(0);
        if let Some(first) = self.slices.first() {
            if first.start != earliest {
                return Err(TraceViolation::LateStart {
                    start: first.start,
                    arrival: earliest,
                });
            }
        }
        // A process that arrives before a gap closes and completes after it
        // opens was ready, with work left, somewhere inside the gap.
        for (from, to) in self.idle_gaps() {
            if let Some(p) = self
                .workload
                .processes()
                .iter()
                .find(|p| p.arrival < to && self.completion[&p.pid] > from)
            {
                return Err(TraceViolation::IdleWhileReady {
                    from: from.max(p.arrival),
                    to,
                    pid: p.pid,
                });
            }
        }
        Ok(())
    }
}

/// Accumulates slices while a policy runs and derives completion times.
#[derive(Debug)]
pub(crate) struct TraceRecorder {
    slices: Vec<TimeSlice>,
    quanta: Vec<Tick>,
}

impl TraceRecorder {
    pub(crate) fn new() -> Self {
        TraceRecorder {
            slices: Vec::new(),
            quanta: Vec::new(),
        }
    }

    pub(crate) fn dispatch(&mut self, pid: Pid, start: Tick, len: Tick) -> Tick {
        debug_assert!(len > 0);
        let end = start + len;
        self.slices.push(TimeSlice { pid, start, end });
        end
    }

    pub(crate) fn quantum(&mut self, q: Tick) {
        self.quanta.push(q);
    }

    pub(crate) fn finish(self, workload: &Workload, policy_label: String) -> ScheduleTrace {
        let mut completion = BTreeMap::new();
        for s in &self.slices {
            completion.insert(s.pid, s.end);
        }
        ScheduleTrace {
            slices: self.slices,
            quantum_sequence: self.quanta,
            completion,
            workload: workload.clone(),
            policy_label,
        }
    }
}

/// Runs `policy` over `workload` to completion.
pub fn run_dispatch_loop(workload: &Workload, policy: &PolicyConfig) -> ScheduleTrace {
    policies::schedule(workload, policy)
}
