//! A deterministic uniprocessor CPU-scheduling simulator.
//!
//! Four policies run over integer time: a dynamic-quantum round robin that
//! re-derives its quantum each round from the median remaining burst
//! ([`policies::schedule_dqrrr`]), classic fixed-quantum round robin, FCFS and
//! non-preemptive SJF. Traces feed the [`metrics`] engine, Gantt renderers and
//! a harness that audits the published comparison tables ([`report`]).

pub mod cli;
pub mod metrics;
pub mod model;
pub mod policies;
pub mod report;
pub mod workload_io;

pub use metrics::{evaluate, Average, MetricConvention, MetricsReport};
pub use model::{
    build_workload, run_dispatch_loop, Pid, ProcessSpec, Provenance, ScheduleTrace, Tick,
    TimeSlice, Workload,
};
pub use policies::{PolicyConfig, PolicyKind};
