use crate::model::{ScheduleTrace, Tick, TraceRecorder, Workload};

/// First come, first served: run to completion in arrival order, ties by pid.
pub fn schedule_fcfs(workload: &Workload) -> ScheduleTrace {
    let mut rec = TraceRecorder::new();
    let mut clock: Tick = 0;
    for p in super::arrival_order(workload) {
        clock = rec.dispatch(p.pid, clock.max(p.arrival), p.burst);
    }
    rec.finish(workload, "FCFS".to_string())
}
