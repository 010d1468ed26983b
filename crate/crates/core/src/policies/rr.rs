use std::collections::VecDeque;
use std::num::NonZeroU64;

use crate::model::{Pid, ScheduleTrace, Tick, TraceRecorder, Workload};

/// Classic round robin with a fixed quantum over a FIFO circular queue.
///
/// Processes that arrive by the end of a slice join the tail before the
/// preempted process does.
pub fn schedule_rr(workload: &Workload, quantum: NonZeroU64) -> ScheduleTrace {
    let quantum = quantum.get();
    let mut pending: VecDeque<_> = super::arrival_order(workload).into();
    let mut ready: VecDeque<(Pid, Tick)> = VecDeque::new();
    let mut rec = TraceRecorder::new();
    let mut clock: Tick = 0;

    let admit = |pending: &mut VecDeque<crate::model::ProcessSpec>,
                 ready: &mut VecDeque<(Pid, Tick)>,
                 clock: Tick| {
        while pending.front().is_some_and(|p| p.arrival <= clock) {
            let p = pending.pop_front().unwrap();
            ready.push_back((p.pid, p.burst));
        }
    };

    while !(pending.is_empty() && ready.is_empty()) {
        if ready.is_empty() {
            clock = clock.max(pending.front().unwrap().arrival);
            admit(&mut pending, &mut ready, clock);
        }
        let (pid, remaining) = ready.pop_front().unwrap();
        let run = quantum.min(remaining);
        clock = rec.dispatch(pid, clock, run);
        admit(&mut pending, &mut ready, clock);
        if remaining > run {
            ready.push_back((pid, remaining - run));
        }
    }

    rec.quantum(quantum);
    rec.finish(workload, format!("RR(q={quantum})"))
}
