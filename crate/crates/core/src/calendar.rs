//! The event calendar: a priority queue ordered by `(fire_at, sequence)`.
//!
//! Two events never compare equal — ties in firing time are broken by a
//! monotone insertion sequence, so dispatch order is a total order and
//! replays are reproducible.

use alloc::collections::BinaryHeap;
use core::cmp::{Ordering, Reverse};

use crate::line::{BufferId, StationId, WorkerId};
use crate::time::SimTime;

/// What a scheduled event means to its target station.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Kick a station's cycle (initial start, or wake after an action
    /// changed its situation).
    Start,
    /// The station's current timed phase has elapsed.
    PhaseDone,
    /// A carrier inserted into `buffer` has finished traversing and is now
    /// gettable by the target station.
    CarrierReady { buffer: BufferId },
    /// A relocating worker reaches the target station.
    WorkerArrives { worker: WorkerId },
}

/// A scheduled occurrence.
#[derive(Clone, Copy, Debug)]
pub struct Event {
    pub fire_at: SimTime,
    /// Monotone tiebreaker assigned by the calendar at insertion.
    pub sequence: u64,
    pub target: StationId,
    pub kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.sequence == other.sequence
    }
}
impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.fire_at
            .as_f64()
            .total_cmp(&other.fire_at.as_f64())
            .then_with(|| self.sequence.cmp(&other.sequence))
    }
}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pending events, popped in `(fire_at, sequence)` order.
#[derive(Debug, Default)]
pub struct EventCalendar {
    heap: BinaryHeap<Reverse<Event>>,
    next_sequence: u64,
}

impl EventCalendar {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an event and returns its sequence number.
    pub fn schedule(&mut self, fire_at: SimTime, target: StationId, kind: EventKind) -> u64 {
        let sequence = self.next_sequence;
        self.next_sequence += 1;
        self.heap.push(Reverse(Event { fire_at, sequence, target, kind }));
        sequence
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop().map(|Reverse(e)| e)
    }

    pub fn peek(&self) -> Option<&Event> {
        self.heap.peek().map(|Reverse(e)| e)
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }
}
