//! The event-driven engine that advances a [`Line`] through continuous
//! time.
//!
//! Every station is a small state machine (see `Phase`); timed phases
//! schedule a completion event, blocked phases wait without events and are
//! woken when the buffer they starve on matures a carrier or frees a slot.
//! All stochastic draws go through per-station named streams, so
//! trajectories are bit-reproducible for a given seed, layout, and action
//! sequence.

use alloc::string::String;
use alloc::vec::Vec;

use crate::calendar::{Event, EventCalendar, EventKind};
use crate::dist::Distribution;
use crate::layout::ProcessingSpec;
use crate::line::{BufferId, Carrier, Kind, Line, Part, Phase, StationId, WorkerId, WorkerLocation};
use crate::rng::RandomStream;
use crate::time::SimTime;

/// One entry of the event log.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EventRecord {
    pub time: f64,
    pub seq: u64,
    /// Station the entry belongs to.
    pub object: String,
    pub note: EventNote,
}

/// What happened.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum EventNote {
    SetupDone { part: u64, duration: f64 },
    WaitDone,
    GetStart { buffer: String, carrier: u64 },
    PutDone { buffer: String, carrier: u64 },
    ProcessDone { duration: f64 },
    HoldDone { duration: f64 },
    Scrap { part: u64, age: f64 },
    DisposeDone,
    Starved { buffer: String },
    Blocked { buffer: String },
    Absorbed { carrier: u64, parts: u64 },
    WorkerDeparted { worker: String, to: String },
    WorkerArrived { worker: String },
    WorkerRedirected { worker: String, to: String },
    Parked,
}

/// What a station does next, extracted from its kind before mutating.
enum Step {
    Get(BufferId),
    Setup,
    Magazine,
    Put(BufferId),
    SwitchHold,
    Process,
    AssemblyMainDone { first_component: BufferId },
    AssemblyComponentDone,
    SinkAbsorb { carrier_out: Option<BufferId> },
    MagazineStore { pace: f64 },
    MagazinePace { pace: f64 },
}

/// Engine state: clock, calendar, random streams, and the line they drive.
#[derive(Debug)]
pub struct Sim {
    clock: SimTime,
    calendar: EventCalendar,
    line: Line,
    streams: Vec<RandomStream>,
    /// Stream for scenario-level draws (jump windows and the like).
    pub scenario_stream: RandomStream,
    log: Option<Vec<EventRecord>>,
    record_seq: u64,
}

impl Sim {
    /// Wraps a freshly built line and schedules every station's initial
    /// cycle start at `t = 0`.
    pub fn new(line: Line, seed: u64) -> Sim {
        let streams = line.stations.iter().map(|s| RandomStream::new(seed, &s.name)).collect();
        let mut sim = Sim {
            clock: SimTime::ZERO,
            calendar: EventCalendar::new(),
            line,
            streams,
            scenario_stream: RandomStream::new(seed, "scenario"),
            log: None,
            record_seq: 0,
        };
        for sid in 0..sim.line.stations.len() {
            sim.calendar.schedule(SimTime::ZERO, StationId(sid), EventKind::Start);
        }
        sim
    }

    pub fn now(&self) -> SimTime {
        self.clock
    }

    pub fn line(&self) -> &Line {
        &self.line
    }

    pub fn line_mut(&mut self) -> &mut Line {
        &mut self.line
    }

    pub fn set_event_logging(&mut self, enabled: bool) {
        if enabled && self.log.is_none() {
            self.log = Some(Vec::new());
        } else if !enabled {
            self.log = None;
        }
    }

    pub fn event_log(&self) -> Option<&[EventRecord]> {
        self.log.as_deref()
    }

    pub fn take_event_log(&mut self) -> Vec<EventRecord> {
        self.log.take().unwrap_or_default()
    }

    pub fn pending_events(&self) -> usize {
        self.calendar.len()
    }

    /// Dispatches every event with `fire_at <= t_end` in `(time, sequence)`
    /// order, then sets the clock to exactly `t_end`.
    pub fn run_until(&mut self, t_end: SimTime) {
        assert!(
            t_end.as_f64() >= self.clock.as_f64(),
            "run_until into the past: {} < {}",
            t_end,
            self.clock
        );
        while let Some(ev) = self.calendar.peek() {
            if ev.fire_at.as_f64() > t_end.as_f64() {
                break;
            }
            let ev = self.calendar.pop().unwrap();
            self.clock = ev.fire_at;
            self.dispatch(ev);
        }
        self.clock = t_end;
    }

    /// True when nothing but agent interaction could ever change the line
    /// again: no event is pending and every station is blocked, starving,
    /// or parked.
    pub fn detect_deadlock(&self) -> bool {
        if !self.calendar.is_empty() {
            return false;
        }
        debug_assert!(self.line.stations.iter().all(|s| matches!(
            s.phase,
            Phase::Idle | Phase::Parked | Phase::AwaitGet { .. } | Phase::AwaitPut { .. }
        )));
        true
    }

    fn schedule_in(&mut self, delay: f64, target: StationId, kind: EventKind) {
        assert!(delay >= 0.0, "negative event delay");
        self.calendar.schedule(self.clock + delay, target, kind);
    }

    fn record(&mut self, sid: StationId, note: EventNote) {
        if self.log.is_some() {
            let time = self.clock.as_f64();
            let seq = self.record_seq;
            let object = self.line.stations[sid.0].name.clone();
            self.record_seq += 1;
            self.log.as_mut().unwrap().push(EventRecord { time, seq, object, note });
        }
    }

    fn buffer_name(&self, b: BufferId) -> String {
        self.line.buffers[b.0].name.clone()
    }

    fn dispatch(&mut self, ev: Event) {
        match ev.kind {
            EventKind::Start => self.on_start(ev.target),
            EventKind::PhaseDone => self.on_phase_done(ev.target),
            EventKind::CarrierReady { buffer } => self.on_carrier_ready(ev.target, buffer),
            EventKind::WorkerArrives { worker } => self.on_worker_arrives(ev.target, worker),
        }
    }

    /// Cycle kick / re-evaluation. Safe to deliver in any phase: active
    /// phases ignore it, blocked phases retry their pending decision.
    fn on_start(&mut self, sid: StationId) {
        match self.line.stations[sid.0].phase {
            Phase::Idle | Phase::Parked => {
                if self.line.stations[sid.0].on {
                    self.begin_cycle(sid);
                } else if self.line.stations[sid.0].phase == Phase::Idle {
                    self.park(sid);
                }
            }
            Phase::AwaitGet { buffer } => {
                self.line.buffers[buffer.0].get_waiter = false;
                self.resume_get(sid, buffer);
            }
            Phase::AwaitPut { buffer } => {
                self.line.buffers[buffer.0].put_waiter = false;
                self.resume_put(sid, buffer);
            }
            _ => {}
        }
    }

    fn park(&mut self, sid: StationId) {
        self.line.stations[sid.0].phase = Phase::Parked;
        self.record(sid, EventNote::Parked);
    }

    /// Entry point of a station's cycle; honors the on/off flag.
    fn begin_cycle(&mut self, sid: StationId) {
        if !self.line.stations[sid.0].on {
            self.park(sid);
            return;
        }
        let step = match &self.line.stations[sid.0].kind {
            Kind::Source { carrier_in: Some(b), .. } => Step::Get(*b),
            Kind::Source { .. } => Step::Setup,
            Kind::Process { input, .. } => Step::Get(*input),
            Kind::Assembly { main_in, .. } => Step::Get(*main_in),
            Kind::Switch { inputs, in_index, .. } => Step::Get(inputs[*in_index]),
            Kind::Sink { input, .. } => Step::Get(*input),
            Kind::Magazine { .. } => Step::Magazine,
        };
        match step {
            Step::Get(b) => {
                self.line.stations[sid.0].comp_cursor = 0;
                self.try_get(sid, b);
            }
            Step::Setup => self.start_setup(sid),
            Step::Magazine => self.magazine_begin(sid),
            _ => unreachable!(),
        }
    }

    fn magazine_begin(&mut self, sid: StationId) {
        let (cin, cout) = match &self.line.stations[sid.0].kind {
            Kind::Magazine { carrier_in, carrier_out, .. } => (*carrier_in, *carrier_out),
            _ => unreachable!(),
        };
        let has_stock = !self.line.stations[sid.0].stock.is_empty();
        if let (Some(out), true) = (cout, has_stock) {
            let carrier = self.line.stations[sid.0].stock.pop_front().unwrap();
            self.line.stations[sid.0].carrier = Some(carrier);
            self.start_put(sid, out);
        } else if let Some(inp) = cin {
            self.try_get(sid, inp);
        } else {
            // Supply-only magazine that ran dry: nothing can wake it.
            self.line.stations[sid.0].phase = Phase::Idle;
        }
    }

    /// Is a blocked get at this buffer the boundary of the station's
    /// cycle (nothing held yet)? Parking is only legal there.
    fn at_cycle_start(&self, sid: StationId, b: BufferId) -> bool {
        match &self.line.stations[sid.0].kind {
            Kind::Assembly { main_in, .. } => b == *main_in,
            _ => true,
        }
    }

    /// Attempts to take the head carrier of `b`; blocks in `AwaitGet`
    /// otherwise. The carrier leaves the queue when the get starts, which
    /// frees the slot for a blocked upstream putter.
    fn try_get(&mut self, sid: StationId, b: BufferId) {
        let now = self.clock.as_f64();
        if self.line.buffers[b.0].head_ready(now) {
            let (carrier, _) = self.line.buffers[b.0].queue.pop_front().unwrap();
            let carrier_id = carrier.id;
            self.line.stations[sid.0].fetch = Some(carrier);
            self.line.stations[sid.0].phase = Phase::Getting { buffer: b };
            self.record(sid, EventNote::GetStart { buffer: self.buffer_name(b), carrier: carrier_id });
            let dur = self.line.buffers[b.0].get_time.sample(&mut self.streams[sid.0]);
            self.schedule_in(dur, sid, EventKind::PhaseDone);
            self.wake_putter(b);
        } else {
            self.line.buffers[b.0].get_waiter = true;
            self.line.stations[sid.0].phase = Phase::AwaitGet { buffer: b };
            self.record(sid, EventNote::Starved { buffer: self.buffer_name(b) });
        }
    }

    /// Re-runs a blocked get after a wake; a switch re-reads its input
    /// selection, and a cycle-start get respects a pending off switch.
    fn resume_get(&mut self, sid: StationId, b: BufferId) {
        if self.at_cycle_start(sid, b) && !self.line.stations[sid.0].on {
            self.park(sid);
            return;
        }
        let target = match &self.line.stations[sid.0].kind {
            Kind::Switch { inputs, in_index, .. } => inputs[*in_index],
            _ => b,
        };
        self.try_get(sid, target);
    }

    /// Attempts to start pushing the held carrier into `b`; blocks in
    /// `AwaitPut` otherwise. A starting put reserves its slot.
    fn start_put(&mut self, sid: StationId, b: BufferId) {
        debug_assert!(self.line.stations[sid.0].carrier.is_some());
        if self.line.buffers[b.0].has_space() {
            self.line.buffers[b.0].reserved += 1;
            self.line.stations[sid.0].phase = Phase::Putting { buffer: b };
            let dur = self.line.buffers[b.0].put_time.sample(&mut self.streams[sid.0]);
            self.schedule_in(dur, sid, EventKind::PhaseDone);
        } else {
            self.line.buffers[b.0].put_waiter = true;
            self.line.stations[sid.0].phase = Phase::AwaitPut { buffer: b };
            self.record(sid, EventNote::Blocked { buffer: self.buffer_name(b) });
        }
    }

    /// Re-runs a blocked put after a wake; a switch re-reads its output
    /// selection.
    fn resume_put(&mut self, sid: StationId, b: BufferId) {
        let target = match &self.line.stations[sid.0].kind {
            Kind::Switch { outputs, out_index, .. } => outputs[*out_index],
            _ => b,
        };
        self.start_put(sid, target);
    }

    /// Put finished: the carrier enters the queue and starts traversing.
    fn finish_put(&mut self, sid: StationId, b: BufferId) {
        let now = self.clock.as_f64();
        let carrier = self.line.stations[sid.0].carrier.take().expect("no carrier to put");
        let carrier_id = carrier.id;
        let buf = &mut self.line.buffers[b.0];
        buf.reserved -= 1;
        buf.queue.push_back((carrier, now));
        let downstream = buf.to;
        let traversal = buf.traversal;
        self.record(sid, EventNote::PutDone { buffer: self.buffer_name(b), carrier: carrier_id });
        self.schedule_in(traversal, downstream, EventKind::CarrierReady { buffer: b });
    }

    fn wake_putter(&mut self, b: BufferId) {
        if self.line.buffers[b.0].put_waiter {
            self.line.buffers[b.0].put_waiter = false;
            let from = self.line.buffers[b.0].from;
            debug_assert_eq!(self.line.stations[from.0].phase, Phase::AwaitPut { buffer: b });
            self.resume_put(from, b);
        }
    }

    fn on_carrier_ready(&mut self, sid: StationId, b: BufferId) {
        if self.line.buffers[b.0].get_waiter
            && self.line.buffers[b.0].head_ready(self.clock.as_f64())
        {
            self.line.buffers[b.0].get_waiter = false;
            debug_assert_eq!(self.line.stations[sid.0].phase, Phase::AwaitGet { buffer: b });
            self.resume_get(sid, b);
        }
    }

    fn on_worker_arrives(&mut self, sid: StationId, wid: WorkerId) {
        let assigned = self.line.workers[wid.0].assigned;
        if assigned == sid {
            self.line.workers[wid.0].location = WorkerLocation::At(sid);
            self.line.stations[sid.0].present_workers += 1;
            let worker = self.line.workers[wid.0].name.clone();
            self.record(sid, EventNote::WorkerArrived { worker });
        } else {
            // Reassigned while relocating: finish this leg, then walk on.
            let traversal = self.line.pools[self.line.workers[wid.0].pool.0].traversal_time;
            self.line.workers[wid.0].location = WorkerLocation::Transit { to: assigned };
            self.schedule_in(traversal, assigned, EventKind::WorkerArrives { worker: wid });
            let worker = self.line.workers[wid.0].name.clone();
            let to = self.line.stations[assigned.0].name.clone();
            self.record(sid, EventNote::WorkerRedirected { worker, to });
        }
    }

    /// Sends a worker to `target`. A present worker leaves immediately
    /// (the origin's next cycle samples with one worker fewer) and counts
    /// at the target only after the pool's traversal time. Reassigning to
    /// the current target is a no-op.
    ///
    /// The caller vouches for pool eligibility; commands routed through
    /// [`crate::observe::apply`] are range-checked there.
    pub fn reassign_worker(&mut self, wid: WorkerId, target: StationId) {
        if self.line.workers[wid.0].assigned == target {
            return;
        }
        self.line.workers[wid.0].assigned = target;
        match self.line.workers[wid.0].location {
            WorkerLocation::At(origin) => {
                self.line.stations[origin.0].present_workers -= 1;
                self.line.workers[wid.0].location = WorkerLocation::Transit { to: target };
                let traversal = self.line.pools[self.line.workers[wid.0].pool.0].traversal_time;
                self.schedule_in(traversal, target, EventKind::WorkerArrives { worker: wid });
                let worker = self.line.workers[wid.0].name.clone();
                let to = self.line.stations[target.0].name.clone();
                self.record(origin, EventNote::WorkerDeparted { worker, to });
            }
            WorkerLocation::Transit { .. } => {
                // The pending arrival event reroutes on landing.
            }
        }
    }

    pub(crate) fn set_waiting_time(&mut self, sid: StationId, value: f64) -> bool {
        match &mut self.line.stations[sid.0].kind {
            Kind::Source { waiting_time, .. } => {
                let changed = *waiting_time != value;
                *waiting_time = value;
                changed
            }
            _ => false,
        }
    }

    pub(crate) fn set_switch_index(&mut self, sid: StationId, outgoing: bool, index: usize) -> bool {
        let changed = match &mut self.line.stations[sid.0].kind {
            Kind::Switch { in_index, out_index, inputs, outputs, .. } => {
                if outgoing {
                    debug_assert!(index < outputs.len());
                    let changed = *out_index != index;
                    *out_index = index;
                    changed
                } else {
                    debug_assert!(index < inputs.len());
                    let changed = *in_index != index;
                    *in_index = index;
                    changed
                }
            }
            _ => false,
        };
        if changed {
            self.nudge(sid);
        }
        changed
    }

    pub(crate) fn set_on(&mut self, sid: StationId, on: bool) -> bool {
        let changed = self.line.stations[sid.0].on != on;
        self.line.stations[sid.0].on = on;
        if changed && on {
            self.nudge(sid);
        }
        changed
    }

    /// Schedules an immediate re-evaluation of a blocked or parked
    /// station (used when an action changes its situation).
    fn nudge(&mut self, sid: StationId) {
        if matches!(
            self.line.stations[sid.0].phase,
            Phase::Idle | Phase::Parked | Phase::AwaitGet { .. } | Phase::AwaitPut { .. }
        ) {
            self.schedule_in(0.0, sid, EventKind::Start);
        }
    }

    /// Effective processing duration sampled at cycle start: the worker
    /// count is read once, here. A jump profile stretches the minimum by
    /// the time-varying slowdown (exactly `f * T` for cycles lying fully
    /// inside the window); the exponential excess is never scaled.
    fn sample_processing(&mut self, sid: StationId) -> f64 {
        let st = &self.line.stations[sid.0];
        let base = match &st.kind {
            Kind::Process { law, .. } | Kind::Assembly { law, .. } => match *law {
                ProcessingSpec::Fixed(d) => d,
                ProcessingSpec::WorkerScaled { minimum, noise_scale, coefficient } => {
                    Distribution::worker_scaled(minimum, noise_scale, st.present_workers, coefficient)
                }
            },
            Kind::Source { processing, .. }
            | Kind::Switch { processing, .. }
            | Kind::Sink { processing, .. }
            | Kind::Magazine { processing, .. } => *processing,
        };
        let jump = st.jump;
        let excess = self.streams[sid.0].exponential(base.exp_mean);
        let minimum = match jump {
            Some(j) => j.stretched_minimum(self.clock.as_f64(), base.minimum),
            None => base.minimum,
        };
        minimum + excess
    }

    fn start_setup(&mut self, sid: StationId) {
        let dur = self.sample_processing(sid);
        let st = &mut self.line.stations[sid.0];
        st.phase = Phase::Setup;
        st.phase_duration = dur;
        self.schedule_in(dur, sid, EventKind::PhaseDone);
    }

    fn start_processing(&mut self, sid: StationId) {
        let mut dur = self.sample_processing(sid);
        if let Kind::Process { rework_probability, .. } = self.line.stations[sid.0].kind {
            // A simulated human error repeats the step, doubling it.
            if self.streams[sid.0].chance(rework_probability) {
                dur *= 2.0;
            }
        }
        let st = &mut self.line.stations[sid.0];
        st.phase = Phase::Processing;
        st.phase_duration = dur;
        self.schedule_in(dur, sid, EventKind::PhaseDone);
    }

    fn on_phase_done(&mut self, sid: StationId) {
        let phase = self.line.stations[sid.0].phase;
        match phase {
            Phase::Setup => self.source_setup_done(sid),
            Phase::Wait => self.wait_done(sid),
            Phase::Getting { buffer } => self.get_done(sid, buffer),
            Phase::Processing => self.processing_done(sid),
            Phase::Disposing => {
                self.record(sid, EventNote::DisposeDone);
                let cursor = self.line.stations[sid.0].comp_cursor;
                let b = match &self.line.stations[sid.0].kind {
                    Kind::Assembly { components, .. } => components[cursor],
                    _ => unreachable!(),
                };
                self.try_get(sid, b);
            }
            Phase::Putting { buffer } => {
                self.finish_put(sid, buffer);
                self.after_put(sid);
            }
            Phase::Idle | Phase::Parked | Phase::AwaitGet { .. } | Phase::AwaitPut { .. } => {
                unreachable!("phase completion for a phase without an event")
            }
        }
    }

    fn source_setup_done(&mut self, sid: StationId) {
        let now = self.clock.as_f64();
        let duration = self.line.stations[sid.0].phase_duration;
        let (part_spec, carrier_capacity, out) = match &self.line.stations[sid.0].kind {
            Kind::Source { part, carrier_capacity, out, .. } => {
                (*part, *carrier_capacity, *out)
            }
            _ => unreachable!(),
        };
        let part_id = self.line.next_part_id;
        self.line.next_part_id += 1;
        let part = Part {
            id: part_id,
            created_at: now,
            assembly_condition: part_spec.assembly_condition,
            origin: sid,
        };
        // Carrier from the supply buffer if one was fetched, fresh otherwise.
        let mut carrier = match self.line.stations[sid.0].carrier.take() {
            Some(c) => c,
            None => {
                let id = self.line.next_carrier_id;
                self.line.next_carrier_id += 1;
                Carrier { id, capacity: carrier_capacity, parts: Vec::new() }
            }
        };
        debug_assert!((carrier.parts.len() as u32) < carrier.capacity);
        carrier.parts.push(part);
        {
            let st = &mut self.line.stations[sid.0];
            st.carrier = Some(carrier);
            st.n_ok += 1;
            st.last_processing = Some(duration);
        }
        self.record(sid, EventNote::SetupDone { part: part_id, duration });
        self.start_put(sid, out);
    }

    fn wait_done(&mut self, sid: StationId) {
        let step = match &self.line.stations[sid.0].kind {
            // The waiting time sits between two parts; after it the next
            // cycle begins.
            Kind::Source { .. } => Step::Magazine,
            Kind::Switch { outputs, out_index, .. } => Step::Put(outputs[*out_index]),
            Kind::Magazine { .. } => Step::Magazine,
            _ => unreachable!("wait phase on unexpected station"),
        };
        match step {
            Step::Put(b) => {
                let duration = self.line.stations[sid.0].phase_duration;
                self.line.stations[sid.0].last_processing = Some(duration);
                self.record(sid, EventNote::HoldDone { duration });
                self.start_put(sid, b);
            }
            Step::Magazine => {
                if matches!(self.line.stations[sid.0].kind, Kind::Source { .. }) {
                    self.record(sid, EventNote::WaitDone);
                }
                self.begin_cycle(sid);
            }
            _ => unreachable!(),
        }
    }

    fn get_done(&mut self, sid: StationId, b: BufferId) {
        let step = match &self.line.stations[sid.0].kind {
            Kind::Source { .. } => Step::Setup,
            Kind::Process { .. } | Kind::Sink { .. } => Step::Process,
            Kind::Assembly { main_in, components, .. } => {
                if b == *main_in {
                    Step::AssemblyMainDone { first_component: components[0] }
                } else {
                    Step::AssemblyComponentDone
                }
            }
            Kind::Switch { .. } => Step::SwitchHold,
            Kind::Magazine { processing, .. } => Step::MagazineStore { pace: processing.minimum },
        };
        match step {
            Step::Setup => {
                // Empty carrier acquired from the supply buffer.
                let carrier = self.line.stations[sid.0].fetch.take().unwrap();
                self.line.stations[sid.0].carrier = Some(carrier);
                self.start_setup(sid);
            }
            Step::Process => {
                let carrier = self.line.stations[sid.0].fetch.take().unwrap();
                self.line.stations[sid.0].carrier = Some(carrier);
                self.start_processing(sid);
            }
            Step::AssemblyMainDone { first_component } => {
                let carrier = self.line.stations[sid.0].fetch.take().unwrap();
                self.line.stations[sid.0].carrier = Some(carrier);
                self.line.stations[sid.0].comp_cursor = 0;
                self.try_get(sid, first_component);
            }
            Step::AssemblyComponentDone => self.assembly_component_arrived(sid),
            Step::SwitchHold => {
                let dur = self.sample_processing(sid);
                let carrier = self.line.stations[sid.0].fetch.take().unwrap();
                let st = &mut self.line.stations[sid.0];
                st.carrier = Some(carrier);
                st.phase = Phase::Wait;
                st.phase_duration = dur;
                self.schedule_in(dur, sid, EventKind::PhaseDone);
            }
            Step::MagazineStore { pace } => {
                let mut carrier = self.line.stations[sid.0].fetch.take().unwrap();
                carrier.parts.clear();
                let st = &mut self.line.stations[sid.0];
                st.stock.push_back(carrier);
                st.phase = Phase::Wait;
                st.phase_duration = pace;
                self.schedule_in(pace, sid, EventKind::PhaseDone);
            }
            _ => unreachable!(),
        }
    }

    /// A component carrier finished its get: enforce the assembly
    /// condition at process start, then join or scrap.
    fn assembly_component_arrived(&mut self, sid: StationId) {
        let now = self.clock.as_f64();
        let mut comp_carrier = self.line.stations[sid.0].fetch.take().unwrap();
        let part = comp_carrier.parts.pop();
        // The component's carrier is consumed here.
        drop(comp_carrier);
        let cursor = self.line.stations[sid.0].comp_cursor;
        let (component_buffer, components_len, nok_time) =
            match &self.line.stations[sid.0].kind {
                Kind::Assembly { components, nok_error_time, .. } => {
                    (components[cursor], components.len(), *nok_error_time)
                }
                _ => unreachable!(),
            };
        let Some(part) = part else {
            // Empty carrier on a component feed: nothing to join, refetch.
            self.try_get(sid, component_buffer);
            return;
        };
        let age = now - part.created_at;
        let expired = part.assembly_condition.map(|tac| age > tac).unwrap_or(false);
        if expired {
            let st = &mut self.line.stations[sid.0];
            st.n_nok += 1;
            *st.nok_by_origin.entry(part.origin).or_insert(0) += 1;
            st.phase = Phase::Disposing;
            st.phase_duration = nok_time;
            let part_id = part.id;
            drop(part);
            self.record(sid, EventNote::Scrap { part: part_id, age });
            self.schedule_in(nok_time, sid, EventKind::PhaseDone);
            return;
        }
        let st = &mut self.line.stations[sid.0];
        let carrier = st.carrier.as_mut().expect("assembly lost its main carrier");
        assert!(
            (carrier.parts.len() as u32) < carrier.capacity,
            "carrier {} has no room for another component",
            carrier.id
        );
        carrier.parts.push(part);
        st.comp_cursor += 1;
        let next = st.comp_cursor;
        if next < components_len {
            let b = match &self.line.stations[sid.0].kind {
                Kind::Assembly { components, .. } => components[next],
                _ => unreachable!(),
            };
            self.try_get(sid, b);
        } else {
            self.start_processing(sid);
        }
    }

    fn processing_done(&mut self, sid: StationId) {
        let duration = self.line.stations[sid.0].phase_duration;
        self.line.stations[sid.0].last_processing = Some(duration);
        self.line.stations[sid.0].n_ok += 1;
        self.record(sid, EventNote::ProcessDone { duration });
        let step = match &self.line.stations[sid.0].kind {
            Kind::Process { out, .. } | Kind::Assembly { out, .. } => Step::Put(*out),
            Kind::Sink { carrier_out, .. } => Step::SinkAbsorb { carrier_out: *carrier_out },
            _ => unreachable!("processing on unexpected station"),
        };
        match step {
            Step::Put(b) => self.start_put(sid, b),
            Step::SinkAbsorb { carrier_out } => {
                let mut carrier = self.line.stations[sid.0].carrier.take().unwrap();
                let parts = carrier.parts.len() as u64;
                let carrier_id = carrier.id;
                self.line.stations[sid.0].parts_absorbed += parts;
                self.record(sid, EventNote::Absorbed { carrier: carrier_id, parts });
                match carrier_out {
                    Some(b) => {
                        carrier.parts.clear();
                        self.line.stations[sid.0].carrier = Some(carrier);
                        self.start_put(sid, b);
                    }
                    None => self.begin_cycle(sid),
                }
            }
            _ => unreachable!(),
        }
    }

    fn after_put(&mut self, sid: StationId) {
        let step = match &self.line.stations[sid.0].kind {
            Kind::Magazine { processing, .. } => Step::MagazinePace { pace: processing.minimum },
            // Wait between two parts produced; the current actionable
            // value is read here, so commands apply from the next
            // iteration on.
            Kind::Source { waiting_time, .. } => Step::MagazinePace { pace: *waiting_time },
            _ => Step::Magazine,
        };
        match step {
            Step::MagazinePace { pace } => {
                let st = &mut self.line.stations[sid.0];
                st.phase = Phase::Wait;
                st.phase_duration = pace;
                self.schedule_in(pace, sid, EventKind::PhaseDone);
            }
            _ => self.begin_cycle(sid),
        }
    }
}
