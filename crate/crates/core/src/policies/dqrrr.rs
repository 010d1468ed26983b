use std::collections::VecDeque;

use super::median::{interleave_min_max, median_quantum};
use crate::model::{Pid, ProcessSpec, ScheduleTrace, Tick, TraceRecorder, Workload};

#[derive(Debug, Clone, Copy)]
struct Entry {
    pid: Pid,
    arrival: Tick,
    remaining: Tick,
}

/// Ready queue for DQRRR. Entries always have remaining work; arrivals wait
/// in `pending` until the next round boundary.
#[derive(Debug)]
struct ReadyQueue {
    queue: Vec<Entry>,
    pending: VecDeque<ProcessSpec>,
}

impl ReadyQueue {
    fn new(workload: &Workload) -> Self {
        ReadyQueue {
            queue: Vec::new(),
            pending: super::arrival_order(workload).into(),
        }
    }

    fn is_exhausted(&self) -> bool {
        self.queue.is_empty() && self.pending.is_empty()
    }

    fn next_arrival(&self) -> Option<Tick> {
        self.pending.front().map(|p| p.arrival)
    }

    /// Moves every process that has arrived by `clock` into the queue.
    /// Returns whether anything was merged.
    fn merge_arrivals(&mut self, clock: Tick) -> bool {
        let mut merged = false;
        while self.pending.front().is_some_and(|p| p.arrival <= clock) {
            let p = self.pending.pop_front().unwrap();
            self.queue.push(Entry {
                pid: p.pid,
                arrival: p.arrival,
                remaining: p.burst,
            });
            merged = true;
        }
        merged
    }

    fn rearrange(&mut self) {
        self.queue.sort_by_key(|e| (e.remaining, e.arrival, e.pid));
        self.queue = interleave_min_max(&self.queue);
    }

    fn remaining(&self) -> Vec<Tick> {
        self.queue.iter().map(|e| e.remaining).collect()
    }
}

/// Dynamic-quantum re-adjusted round robin.
///
/// Each round the quantum is the floored median of the remaining bursts of
/// the queued processes, and every queued process is dispatched once for at
/// most that long. The queue is sorted by remaining burst and interleaved
/// smallest/largest when it is first formed and whenever new arrivals were
/// merged at a round boundary; otherwise the previous round's order carries
/// over. Arrivals during a round wait for the next boundary.
pub fn schedule_dqrrr(workload: &Workload) -> ScheduleTrace {
    let mut state = ReadyQueue::new(workload);
    let mut rec = TraceRecorder::new();
    let mut clock: Tick = 0;

    while !state.is_exhausted() {
        if state.queue.is_empty() {
            // Idle CPU: jump to the next arrival.
            clock = clock.max(state.next_arrival().expect("pending arrivals"));
        }
        if state.merge_arrivals(clock) {
            state.rearrange();
        }

        let quantum = median_quantum(&state.remaining());
        rec.quantum(quantum);

        for entry in &mut state.queue {
            let run = quantum.min(entry.remaining);
            clock = rec.dispatch(entry.pid, clock, run);
            entry.remaining -= run;
        }
        state.queue.retain(|e| e.remaining > 0);
    }

    rec.finish(workload, "DQRRR".to_string())
}
