use crate::model::{ScheduleTrace, Tick, TraceRecorder, Workload};

/// Non-preemptive shortest job first. Ties go to the earlier arrival, then
/// the lower pid.
pub fn schedule_sjf(workload: &Workload) -> ScheduleTrace {
    let mut waiting = super::arrival_order(workload);
    let mut rec = TraceRecorder::new();
    let mut clock: Tick = 0;

    while !waiting.is_empty() {
        // `waiting` is arrival-ordered, so the head arrives first.
        clock = clock.max(waiting[0].arrival);
        let (idx, _) = waiting
            .iter()
            .enumerate()
            .filter(|(_, p)| p.arrival <= clock)
            .min_by_key(|(_, p)| (p.burst, p.arrival, p.pid))
            .unwrap();
        let p = waiting.remove(idx);
        clock = rec.dispatch(p.pid, clock, p.burst);
    }
    rec.finish(workload, "SJF".to_string())
}
